#include "qrng/min_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qrng/errors.hpp"
#include "qrng/special_functions.hpp"

namespace qrng {

std::vector<double> bin_probabilities(const GaussianSpec& gauss, const AdcConfig& adc) {
    adc.validate();
    if (!(gauss.sigma > 0.0))
        throw std::invalid_argument("gaussian sigma must be positive");
    const int codes = adc.code_count();
    const double delta = adc.bin_width();
    std::vector<double> probs(codes);
    // Edge u_k = -a + kΔ; cdf[k] = Φ(u_k/σ) for k = 1..codes-1.
    double prev_cdf = 0.0;  // left tail folds into bin 0
    for (int k = 0; k < codes; ++k) {
        const double cdf =
            (k == codes - 1) ? 1.0 : gaussian_cdf((-adc.range_a + (k + 1) * delta) / gauss.sigma);
        probs[k] = cdf - prev_cdf;
        prev_cdf = cdf;
    }
    return probs;
}

double quantum_variance(double sigma_total_sq, double gamma) {
    if (sigma_total_sq < 0.0 || gamma < 0.0)
        throw std::invalid_argument("quantum_variance requires non-negative inputs");
    return gamma / (gamma + 1.0) * sigma_total_sq;
}

double min_entropy_per_sample(double sigma_quantum, const AdcConfig& adc) {
    if (!(sigma_quantum > 0.0))
        throw std::invalid_argument("sigma_quantum must be positive");
    const std::vector<double> probs = bin_probabilities(GaussianSpec{sigma_quantum}, adc);
    const double p_max = *std::max_element(probs.begin(), probs.end());
    const double h = -std::log2(p_max);
    // Guard rounding at the extremes; H∞ of a 2^bits-outcome source cannot
    // exceed the resolution.
    return std::clamp(h, 0.0, static_cast<double>(adc.bits));
}

namespace {

double lag_autocorr(const std::vector<std::uint16_t>& s, const AdcConfig& adc, double mean,
                    double variance, std::size_t lag) {
    if (s.size() <= lag + 1 || variance <= 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t i = 0; i + lag < s.size(); ++i)
        num += (dequantize_midpoint(s[i], adc) - mean) * (dequantize_midpoint(s[i + lag], adc) - mean);
    return num / (static_cast<double>(s.size() - lag) * variance);
}

}  // namespace

EntropyReport evaluate(const RawSampleStream& stream, const NoiseModelParams& params,
                       double power_mw) {
    if (stream.samples.empty())
        throw InsufficientData("empty sample stream");
    if (stream.samples.size() < 10000)
        throw InsufficientData("need at least 10^4 samples for a variance-based entropy claim");
    stream.adc.validate();

    const StreamMoments moments = stream_moments(stream);
    if (moments.variance <= 0.0)
        throw ZeroVariance("degenerate stream: zero empirical variance");

    EntropyReport report;
    report.adc = stream.adc;
    report.n_samples = stream.samples.size();
    report.sigma_total_sq = moments.variance;
    const double delta = stream.adc.bin_width();
    report.sigma_total_sq_sheppard = moments.variance - delta * delta / 12.0;
    report.gamma = snr(params, power_mw);
    report.sigma_quantum_sq = quantum_variance(report.sigma_total_sq, report.gamma);
    if (report.sigma_quantum_sq <= 0.0)
        throw ZeroVariance("quantum variance is zero under the fitted model");
    const double sigma_q = std::sqrt(report.sigma_quantum_sq);
    const std::vector<double> probs = bin_probabilities(GaussianSpec{sigma_q}, stream.adc);
    report.p_max = *std::max_element(probs.begin(), probs.end());
    report.h_min_per_sample = std::clamp(-std::log2(report.p_max), 0.0,
                                         static_cast<double>(stream.adc.bits));
    report.autocorr_lag1 =
        lag_autocorr(stream.samples, stream.adc, moments.mean, moments.variance, 1);
    report.autocorr_lag2 =
        lag_autocorr(stream.samples, stream.adc, moments.mean, moments.variance, 2);
    return report;
}

std::string report_to_json(const EntropyReport& r) {
    nlohmann::json j{{"sigma_total_sq", r.sigma_total_sq},
                     {"sigma_total_sq_sheppard", r.sigma_total_sq_sheppard},
                     {"gamma", r.gamma},
                     {"sigma_quantum_sq", r.sigma_quantum_sq},
                     {"p_max", r.p_max},
                     {"h_min_per_sample", r.h_min_per_sample},
                     {"adc_bits", r.adc.bits},
                     {"adc_range_a", r.adc.range_a},
                     {"autocorr_lag1", r.autocorr_lag1},
                     {"autocorr_lag2", r.autocorr_lag2},
                     {"n_samples", r.n_samples},
                     {"security_assumption", r.security_assumption}};
    return j.dump(2);
}

EntropyReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EntropyReport r;
    r.sigma_total_sq = j.at("sigma_total_sq").get<double>();
    r.sigma_total_sq_sheppard = j.value("sigma_total_sq_sheppard", r.sigma_total_sq);
    r.gamma = j.at("gamma").get<double>();
    r.sigma_quantum_sq = j.at("sigma_quantum_sq").get<double>();
    r.p_max = j.at("p_max").get<double>();
    r.h_min_per_sample = j.at("h_min_per_sample").get<double>();
    r.adc.bits = j.at("adc_bits").get<int>();
    r.adc.range_a = j.at("adc_range_a").get<double>();
    r.autocorr_lag1 = j.value("autocorr_lag1", 0.0);
    r.autocorr_lag2 = j.value("autocorr_lag2", 0.0);
    r.n_samples = j.value("n_samples", std::uint64_t{0});
    r.security_assumption = j.value("security_assumption", r.security_assumption);
    return r;
}

}  // namespace qrng
