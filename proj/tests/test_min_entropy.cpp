#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qrng/min_entropy.hpp"
#include "qrng/presets.hpp"
#include "qrng/special_functions.hpp"

using namespace qrng;

TEST_CASE("gaussian cdf reference values") {
    CHECK(gaussian_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gaussian_cdf(40.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gaussian_cdf(-40.0) < 1e-300);
    CHECK(gaussian_cdf(0.5357) == doctest::Approx(0.70391).epsilon(1.5e-4 / 0.70391));
}

TEST_CASE("gaussian cdf against adaptive quadrature") {
    for (double x = -8.0; x <= 8.0; x += 0.173)
        CHECK(std::fabs(gaussian_cdf(x) - oracles::normal_cdf_quadrature(x)) < 1e-12);
}

TEST_CASE("one-bit quantizer splits evenly") {
    for (double sigma : {0.3, 1.0, 7.0, 42.0}) {
        const auto probs = bin_probabilities(GaussianSpec{sigma}, AdcConfig{1, 15.0});
        REQUIRE(probs.size() == 2);
        CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("3-bit toy model bin probabilities") {
    // sigma=7, a=15, 3-bit: the two centre bins carry the maximum.
    const auto probs = bin_probabilities(GaussianSpec{7.0}, AdcConfig{3, 15.0});
    REQUIRE(probs.size() == 8);
    const double expected = gaussian_cdf(3.75 / 7.0) - 0.5;
    CHECK(probs[4] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(probs[3] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(probs[4] == doctest::Approx(0.2039).epsilon(0.0005 / 0.2039));
    const double p_max = *std::max_element(probs.begin(), probs.end());
    CHECK(p_max == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("3-bit bin probabilities against direct quadrature") {
    for (double sigma : {2.0, 4.8, 7.0, 12.0}) {
        const AdcConfig adc{3, 15.0};
        const auto probs = bin_probabilities(GaussianSpec{sigma}, adc);
        const double delta = adc.bin_width();
        for (int k = 0; k < 8; ++k) {
            const double lo = (k == 0) ? -40.0 * sigma : -15.0 + k * delta;
            const double hi = (k == 7) ? 40.0 * sigma : -15.0 + (k + 1) * delta;
            const double direct = oracles::normal_integral(lo / sigma, hi / sigma);
            CHECK(std::fabs(probs[k] - direct) < 1e-9);
        }
    }
}

TEST_CASE("bin probabilities sum to one across random configurations") {
    oracles::TestRng rng(31);
    for (int rep = 0; rep < 1000; ++rep) {
        const int bits = 1 + static_cast<int>(rng.below(12));
        const double a = 0.5 + 30.0 * rng.uniform();
        const double sigma = 0.05 + 40.0 * rng.uniform();
        const auto probs = bin_probabilities(GaussianSpec{sigma}, AdcConfig{bits, a});
        double sum = 0.0;
        for (double p : probs) sum += p;
        CHECK(std::fabs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("quantum variance split") {
    CHECK(quantum_variance(24.4, 21.0) == doctest::Approx(23.2909).epsilon(1e-4));
    CHECK(quantum_variance(24.4, 21.0) == doctest::Approx(23.3).epsilon(0.1 / 23.3));
    CHECK(quantum_variance(5.0, 0.0) == 0.0);
    CHECK(quantum_variance(24.4, 1.0) == doctest::Approx(12.2).epsilon(1e-12));
}

TEST_CASE("paper-regime min-entropy values") {
    const AdcConfig adc{8, 15.0};
    CHECK(min_entropy_per_sample(4.8, adc) == doctest::Approx(6.70).epsilon(0.03 / 6.70));
    CHECK(min_entropy_per_sample(7.0, AdcConfig{3, 15.0}) ==
          doctest::Approx(2.294).epsilon(0.005 / 2.294));
    for (double sigma : {0.7, 3.0, 11.0})
        CHECK(min_entropy_per_sample(sigma, AdcConfig{1, 15.0}) == doctest::Approx(1.0));
}

TEST_CASE("entropy stays within [0, bits]") {
    oracles::TestRng rng(37);
    for (int rep = 0; rep < 300; ++rep) {
        const int bits = 1 + static_cast<int>(rng.below(10));
        const AdcConfig adc{bits, 0.5 + 30.0 * rng.uniform()};
        const double sigma = 0.01 + 100.0 * rng.uniform();
        const double h = min_entropy_per_sample(sigma, adc);
        CHECK(h >= 0.0);
        CHECK(h <= bits);
    }
}

TEST_CASE("min-entropy is non-decreasing in sigma while the centre bin dominates") {
    // Holds through sigma = a/2 for low-resolution ADCs; at 8 bits the
    // edge-bin mass overtakes the centre before a/2 (checked below).
    for (int bits : {3, 5}) {
        const AdcConfig adc{bits, 15.0};
        double last = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double sigma = 7.5 * i / 100.0;
            const double h = min_entropy_per_sample(sigma, adc);
            CHECK(h >= last - 1e-12);
            last = h;
        }
    }
}

TEST_CASE("8-bit entropy is not monotone up to a/2: the edge bins take over") {
    const AdcConfig adc{8, 15.0};
    CHECK(min_entropy_per_sample(6.0, adc) > min_entropy_per_sample(7.5, adc));
}

TEST_CASE("argmax location: central for small sigma, edge for huge sigma") {
    for (int bits : {2, 3, 8}) {
        const AdcConfig adc{bits, 15.0};
        const int codes = adc.code_count();

        const auto central = bin_probabilities(GaussianSpec{15.0 / 3.0}, adc);
        const auto arg_c = static_cast<int>(
            std::max_element(central.begin(), central.end()) - central.begin());
        CHECK((arg_c == codes / 2 || arg_c == codes / 2 - 1));

        const auto edge = bin_probabilities(GaussianSpec{150.0}, adc);
        const auto arg_e =
            static_cast<int>(std::max_element(edge.begin(), edge.end()) - edge.begin());
        CHECK((arg_e == 0 || arg_e == codes - 1));
    }
}

TEST_CASE("evaluate chains the four steps at the working point") {
    SimConfig config;
    config.params = working_point_params();
    config.power_mw = kWorkingPowerMw;
    config.adc = working_adc();
    config.n_samples = 1'000'000;
    config.quantum_seed = 11;
    config.classical_seed = 12;
    const auto stream = simulate_raw(config);
    const auto report = evaluate(stream, config.params, config.power_mw);

    CHECK(report.gamma == doctest::Approx(21.2).epsilon(0.005));
    CHECK(report.sigma_total_sq > 23.9);
    CHECK(report.sigma_total_sq < 24.9);
    CHECK(report.h_min_per_sample > 6.6);
    CHECK(report.h_min_per_sample < 6.8);
    CHECK(report.p_max == doctest::Approx(std::exp2(-report.h_min_per_sample)).epsilon(1e-12));
    CHECK(report.sigma_quantum_sq ==
          doctest::Approx(report.gamma / (report.gamma + 1.0) * report.sigma_total_sq)
              .epsilon(1e-12));
    // Sheppard correction is tiny at this bin width but strictly below raw.
    CHECK(report.sigma_total_sq_sheppard < report.sigma_total_sq);
    CHECK(std::fabs(report.autocorr_lag1) < 4.0 / 1000.0);
}

TEST_CASE("entropy falls at a power with a worse quantum/classical split") {
    SimConfig config;
    config.params = working_point_params();
    config.adc = working_adc();
    config.n_samples = 200000;
    config.quantum_seed = 21;
    config.classical_seed = 22;

    config.power_mw = kWorkingPowerMw;
    const auto at_opt = evaluate(simulate_raw(config), config.params, config.power_mw);

    config.power_mw = 0.1;  // gamma ~ 4.4: less of the variance is quantum
    const auto at_low = evaluate(simulate_raw(config), config.params, config.power_mw);

    CHECK(at_low.gamma < at_opt.gamma);
    CHECK(at_low.h_min_per_sample < at_opt.h_min_per_sample);
}

TEST_CASE("evaluate rejects short and degenerate streams") {
    RawSampleStream stream;
    stream.adc = working_adc();
    stream.samples.assign(5000, 128);
    CHECK_THROWS_AS(evaluate(stream, working_point_params(), 0.95), InsufficientData);
    stream.samples.assign(20000, 128);  // constant: zero variance
    CHECK_THROWS_AS(evaluate(stream, working_point_params(), 0.95), ZeroVariance);
}

TEST_CASE("entropy report JSON round trip") {
    SimConfig config;
    config.params = working_point_params();
    config.power_mw = kWorkingPowerMw;
    config.adc = working_adc();
    config.n_samples = 50000;
    const auto report = evaluate(simulate_raw(config), config.params, config.power_mw);
    const auto round = report_from_json(report_to_json(report));
    CHECK(round.h_min_per_sample == doctest::Approx(report.h_min_per_sample).epsilon(1e-12));
    CHECK(round.p_max == doctest::Approx(report.p_max).epsilon(1e-12));
    CHECK(round.gamma == doctest::Approx(report.gamma).epsilon(1e-12));
    CHECK(round.adc.bits == report.adc.bits);
    CHECK(round.n_samples == report.n_samples);
}
