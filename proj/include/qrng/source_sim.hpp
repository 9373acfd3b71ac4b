#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrng/adc.hpp"
#include "qrng/noise_model.hpp"

namespace qrng {

/// PRNG stream definition recorded with every simulated data set. Samples
/// are generated in fixed 65536-sample blocks; each block draws from an
/// mt19937_64 seeded by splitmix64(seed, block index), and normal deviates
/// come from Box-Muller on 53-bit uniforms. Changing any of this changes
/// the stream, so the name is versioned.
extern const char* const kSimRngAlgorithm;

struct SimConfig {
    NoiseModelParams params;
    double power_mw = 0.95;
    AdcConfig adc;
    std::uint64_t n_samples = 0;
    std::uint64_t quantum_seed = 1;
    std::uint64_t classical_seed = 2;
    /// Optional single-pole low-pass on the summed voltage, cutoff as a
    /// fraction of the sample rate; 0 disables it and keeps samples iid.
    double bandwidth_cutoff = 0.0;

    void validate() const;
};

/// Quantized ADC codes plus the quantizer that produced them.
struct RawSampleStream {
    std::vector<std::uint16_t> samples;
    AdcConfig adc;

    std::uint64_t bit_count() const { return samples.size() * static_cast<std::uint64_t>(adc.bits); }
};

/// Draw v_q ~ N(0, aq·P) and v_c ~ N(0, ac·P² + f) from two independently
/// seeded streams, optionally low-pass the sum, and quantize. Deterministic
/// for a given config.
RawSampleStream simulate_raw(const SimConfig& config);

/// Unquantized voltages (v_q + v_c after the optional filter), same stream
/// definition as simulate_raw. Exposed for spectral and variance checks.
std::vector<double> simulate_voltages(const SimConfig& config);

/// Mean and (population) variance of de-quantized bin midpoints.
struct StreamMoments {
    double mean = 0.0;
    double variance = 0.0;
};
StreamMoments stream_moments(const RawSampleStream& stream);

}  // namespace qrng
