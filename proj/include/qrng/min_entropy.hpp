#pragma once

#include <string>
#include <vector>

#include "qrng/adc.hpp"
#include "qrng/noise_model.hpp"
#include "qrng/source_sim.hpp"

namespace qrng {

/// Zero-mean Gaussian, σ in mV.
struct GaussianSpec {
    double sigma = 1.0;
};

/// Output of the four-step entropy chain with every intermediate value.
struct EntropyReport {
    double sigma_total_sq = 0.0;           // raw midpoint-dequantized variance, mV²
    double sigma_total_sq_sheppard = 0.0;  // Δ²/12-corrected variance, mV²
    double gamma = 0.0;
    double sigma_quantum_sq = 0.0;  // mV²
    double p_max = 0.0;
    double h_min_per_sample = 0.0;  // bits
    AdcConfig adc;
    double autocorr_lag1 = 0.0;  // measured on the de-quantized stream
    double autocorr_lag2 = 0.0;
    std::uint64_t n_samples = 0;
    /// The model treats classical noise as adversary-visible but additive
    /// and independent of the quantum signal; no conditioning on correlated
    /// side information is performed.
    std::string security_assumption =
        "classical noise additive and independent of the quantum signal";
};

/// Probability of each ADC code under a centred Gaussian: interior bins
/// integrate the density between their edges, the two edge bins absorb the
/// tails. Sums to 1 within 1e-12.
std::vector<double> bin_probabilities(const GaussianSpec& gauss, const AdcConfig& adc);

/// σ²_quantum = γ/(γ+1) · σ²_total.
double quantum_variance(double sigma_total_sq, double gamma);

/// H∞ = -log2(max bin probability) for a Gaussian of the given σ; bounded
/// by the ADC resolution.
double min_entropy_per_sample(double sigma_quantum, const AdcConfig& adc);

/// Four-step chain: empirical σ²_total from the stream, γ from the model,
/// σ²_quantum split, then H∞ of the quantum Gaussian through the ADC.
/// Throws InsufficientData below 10⁴ samples and ZeroVariance for a
/// degenerate stream.
EntropyReport evaluate(const RawSampleStream& stream, const NoiseModelParams& params,
                       double power_mw);

std::string report_to_json(const EntropyReport& report);
EntropyReport report_from_json(const std::string& text);

}  // namespace qrng
