#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrng/adc.hpp"
#include "qrng/extractors.hpp"
#include "qrng/noise_model.hpp"
#include "qrng/stat_tests.hpp"

namespace qrng {

/// Stage failure with the originating stage attached. Artifacts of a
/// failed stage stay on disk with a `.partial` suffix.
struct StageError : Error {
    StageError(const std::string& stage_name, const std::string& message)
        : Error("stage " + stage_name + ": " + message), stage(stage_name) {}
    std::string stage;
};

struct PipelinePaths {
    std::string sweep_csv;  // optional; empty = use configured coefficients
    std::string fit_report = "fit.json";
    std::string raw = "raw.qrng";
    std::string entropy_report = "entropy.json";
    std::string bits = "extracted.bits";
    std::string extract_metadata = "extracted.bits.meta.json";
    std::string test_report = "tests.json";
};

struct ExtractorConfig {
    std::string algorithm = "toeplitz";
    std::uint64_t n = 4096;
    double epsilon = 0x1p-100;
    /// 0 = take the rate from the entropy report (h_min / adc bits).
    double h_min_rate = 0.0;
    std::string seed_file;  // external uniform seed
    /// Demo-only PRNG seed for generating the extractor seed; refused
    /// unless explicitly set, since extractor security assumes a
    /// uniformly random seed from outside the device.
    std::optional<std::uint64_t> demo_seed;
};

struct TestConfig {
    double alpha = 0.01;
    std::size_t max_lag = 100;
};

/// Everything a pipeline run depends on; all randomness flows from the
/// explicit seeds, and the config round-trips through JSON losslessly.
struct PipelineConfig {
    int schema_version = 1;
    PipelinePaths paths;
    NoiseModelParams noise;
    double fit_alpha = 0.99;
    double power_mw = 0.95;
    AdcConfig adc{8, 15.0};
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t quantum_seed = 1;
    std::uint64_t classical_seed = 2;
    double bandwidth_cutoff = 0.0;
    ExtractorConfig extractor;
    TestConfig tests;
};

std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const std::string& text);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct PipelineSummary {
    double gamma = 0.0;
    double h_min_per_sample = 0.0;
    std::uint64_t raw_samples = 0;
    std::uint64_t bits_extracted = 0;
    std::uint64_t discarded_bits = 0;
    bool all_tests_passed = false;
    double mean_autocorr = 0.0;  // extracted bits, lags 1..max_lag
    double max_abs_autocorr = 0.0;
    std::vector<TestReport> reports;
    std::vector<StageTiming> timings;
    std::string rng_algorithm;
};

std::string summary_to_json(const PipelineSummary& summary);

/// fit → operating point → simulate → entropy → extract → test. Writes
/// each artifact via a `.partial` temp name, renamed on stage success.
PipelineSummary run_pipeline(const PipelineConfig& config);

/// Demo/test seed material from a named PRNG. Production extraction must
/// feed seeds from an external uniform source instead.
BitString demo_seed_bits(std::uint64_t seed, std::uint64_t count);

struct BenchReport {
    std::string algorithm;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    int runs = 0;
    std::uint64_t blocks_per_run = 0;
    double median_bits_per_sec = 0.0;
    std::string kernel;  // "pclmul" or "generic"
};

/// Extraction-only throughput (seed setup and I/O excluded), median of
/// `runs` timed repetitions.
BenchReport bench_extractor(ExtractorAlgo algo, std::uint64_t n, std::uint64_t m, double epsilon,
                            int runs = 5);

}  // namespace qrng
