#include "qrng/source_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qrng {

const char* const kSimRngAlgorithm = "mt19937_64/box-muller/block-65536/v1";

namespace {

constexpr std::uint64_t kBlockSamples = 65536;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
    return splitmix64(seed + (block + 1) * 0x9E3779B97F4A7C15ull);
}

// Box-Muller on top of 53-bit uniforms in (0, 1]; mt19937_64 is fully
// specified by the standard, so the stream is stable across platforms.
class NormalBlockSource {
public:
    NormalBlockSource(std::uint64_t seed, std::uint64_t block) : rng_(block_seed(seed, block)) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

void SimConfig::validate() const {
    adc.validate();
    if (n_samples < 1)
        throw std::invalid_argument("n_samples must be >= 1");
    if (power_mw <= 0.0)
        throw std::invalid_argument("power must be positive");
    if (params.aq < 0.0 || params.ac < 0.0 || params.f < 0.0)
        throw std::invalid_argument("noise coefficients must be non-negative");
    if (bandwidth_cutoff < 0.0 || bandwidth_cutoff >= 0.5)
        throw std::invalid_argument("bandwidth cutoff must lie in [0, 0.5) of the sample rate");
}

std::vector<double> simulate_voltages(const SimConfig& config) {
    config.validate();
    const double sigma_q = std::sqrt(config.params.aq * config.power_mw);
    const double sigma_c =
        std::sqrt(config.params.ac * config.power_mw * config.power_mw + config.params.f);

    std::vector<double> volts(config.n_samples);
    const std::uint64_t blocks = (config.n_samples + kBlockSamples - 1) / kBlockSamples;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        NormalBlockSource qsrc(config.quantum_seed, b);
        NormalBlockSource csrc(config.classical_seed, b);
        const std::uint64_t begin = b * kBlockSamples;
        const std::uint64_t end = std::min(config.n_samples, begin + kBlockSamples);
        for (std::uint64_t i = begin; i < end; ++i)
            volts[i] = sigma_q * qsrc.next() + sigma_c * csrc.next();
    }

    if (config.bandwidth_cutoff > 0.0) {
        // Sequential pass: the filter state crosses block boundaries.
        const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * config.bandwidth_cutoff);
        double state = 0.0;
        for (double& v : volts) {
            state += alpha * (v - state);
            v = state;
        }
    }
    return volts;
}

RawSampleStream simulate_raw(const SimConfig& config) {
    const std::vector<double> volts = simulate_voltages(config);
    RawSampleStream out;
    out.adc = config.adc;
    out.samples.resize(volts.size());
    for (std::size_t i = 0; i < volts.size(); ++i)
        out.samples[i] = quantize(volts[i], config.adc);
    return out;
}

StreamMoments stream_moments(const RawSampleStream& stream) {
    if (stream.samples.empty())
        throw std::invalid_argument("empty sample stream");
    // Pairwise reduction keeps the sum deterministic and well conditioned
    // for long streams.
    struct Acc {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    const auto& s = stream.samples;
    const AdcConfig adc = stream.adc;
    auto reduce = [&](auto&& self, std::size_t lo, std::size_t hi) -> Acc {
        if (hi - lo <= 4096) {
            Acc a;
            for (std::size_t i = lo; i < hi; ++i) {
                const double v = dequantize_midpoint(s[i], adc);
                a.sum += v;
                a.sumsq += v * v;
            }
            return a;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        const Acc l = self(self, lo, mid);
        const Acc r = self(self, mid, hi);
        return Acc{l.sum + r.sum, l.sumsq + r.sumsq};
    };
    const Acc acc = reduce(reduce, 0, s.size());
    const double n = static_cast<double>(s.size());
    StreamMoments m;
    m.mean = acc.sum / n;
    m.variance = acc.sumsq / n - m.mean * m.mean;
    return m;
}

}  // namespace qrng
