#include "qrng/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "qrng/gf2.hpp"
#include "qrng/io.hpp"
#include "qrng/min_entropy.hpp"
#include "qrng/source_sim.hpp"
#include "qrng/trevisan.hpp"

namespace qrng {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Write-to-temp-then-rename: a crashed or failed stage leaves only the
// `.partial` file behind.
class StagedFile {
public:
    explicit StagedFile(std::string path) : final_(std::move(path)), partial_(final_ + ".partial") {}

    const std::string& partial() const { return partial_; }

    void commit() {
        std::filesystem::rename(partial_, final_);
        committed_ = true;
    }

    ~StagedFile() = default;

private:
    std::string final_;
    std::string partial_;
    bool committed_ = false;
};

template <typename Fn>
auto run_stage(const std::string& name, std::vector<StageTiming>& timings, Fn&& fn) {
    const auto start = Clock::now();
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            timings.push_back({name, seconds_since(start)});
        } else {
            auto result = fn();
            timings.push_back({name, seconds_since(start)});
            return result;
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

std::string config_to_json(const PipelineConfig& c) {
    nlohmann::json j;
    j["schema_version"] = c.schema_version;
    j["paths"] = {{"sweep_csv", c.paths.sweep_csv},
                  {"fit_report", c.paths.fit_report},
                  {"raw", c.paths.raw},
                  {"entropy_report", c.paths.entropy_report},
                  {"bits", c.paths.bits},
                  {"extract_metadata", c.paths.extract_metadata},
                  {"test_report", c.paths.test_report}};
    j["noise"] = {{"aq", c.noise.aq}, {"ac", c.noise.ac}, {"f", c.noise.f}};
    j["fit_alpha"] = c.fit_alpha;
    j["power_mw"] = c.power_mw;
    j["adc"] = {{"bits", c.adc.bits}, {"range_a", c.adc.range_a}};
    j["n_samples"] = c.n_samples;
    j["quantum_seed"] = c.quantum_seed;
    j["classical_seed"] = c.classical_seed;
    j["bandwidth_cutoff"] = c.bandwidth_cutoff;
    j["extractor"] = {{"algorithm", c.extractor.algorithm},
                      {"n", c.extractor.n},
                      {"epsilon", c.extractor.epsilon},
                      {"h_min_rate", c.extractor.h_min_rate},
                      {"seed_file", c.extractor.seed_file}};
    if (c.extractor.demo_seed)
        j["extractor"]["demo_seed"] = *c.extractor.demo_seed;
    j["tests"] = {{"alpha", c.tests.alpha}, {"max_lag", c.tests.max_lag}};
    return j.dump(2);
}

PipelineConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PipelineConfig c;
    c.schema_version = j.value("schema_version", 1);
    if (c.schema_version != 1)
        throw FormatError("unsupported config schema_version");
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        c.paths.sweep_csv = p.value("sweep_csv", c.paths.sweep_csv);
        c.paths.fit_report = p.value("fit_report", c.paths.fit_report);
        c.paths.raw = p.value("raw", c.paths.raw);
        c.paths.entropy_report = p.value("entropy_report", c.paths.entropy_report);
        c.paths.bits = p.value("bits", c.paths.bits);
        c.paths.extract_metadata = p.value("extract_metadata", c.paths.extract_metadata);
        c.paths.test_report = p.value("test_report", c.paths.test_report);
    }
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        c.noise.aq = n.value("aq", 0.0);
        c.noise.ac = n.value("ac", 0.0);
        c.noise.f = n.value("f", 0.0);
    }
    c.fit_alpha = j.value("fit_alpha", 0.99);
    c.power_mw = j.value("power_mw", 0.95);
    if (j.contains("adc")) {
        c.adc.bits = j.at("adc").value("bits", 8);
        c.adc.range_a = j.at("adc").value("range_a", 15.0);
    }
    c.n_samples = j.value("n_samples", std::uint64_t{1'000'000});
    c.quantum_seed = j.value("quantum_seed", std::uint64_t{1});
    c.classical_seed = j.value("classical_seed", std::uint64_t{2});
    c.bandwidth_cutoff = j.value("bandwidth_cutoff", 0.0);
    if (j.contains("extractor")) {
        const auto& e = j.at("extractor");
        c.extractor.algorithm = e.value("algorithm", "toeplitz");
        c.extractor.n = e.value("n", std::uint64_t{4096});
        c.extractor.epsilon = e.value("epsilon", 0x1p-100);
        c.extractor.h_min_rate = e.value("h_min_rate", 0.0);
        c.extractor.seed_file = e.value("seed_file", "");
        if (e.contains("demo_seed"))
            c.extractor.demo_seed = e.at("demo_seed").get<std::uint64_t>();
    }
    if (j.contains("tests")) {
        c.tests.alpha = j.at("tests").value("alpha", 0.01);
        c.tests.max_lag = j.at("tests").value("max_lag", std::size_t{100});
    }
    return c;
}

std::string summary_to_json(const PipelineSummary& s) {
    nlohmann::json j;
    j["gamma"] = s.gamma;
    j["h_min_per_sample"] = s.h_min_per_sample;
    j["raw_samples"] = s.raw_samples;
    j["bits_extracted"] = s.bits_extracted;
    j["discarded_bits"] = s.discarded_bits;
    j["all_tests_passed"] = s.all_tests_passed;
    j["mean_autocorr"] = s.mean_autocorr;
    j["max_abs_autocorr"] = s.max_abs_autocorr;
    j["rng_algorithm"] = s.rng_algorithm;
    j["reports"] = nlohmann::json::parse(reports_to_json(s.reports));
    nlohmann::json timings = nlohmann::json::array();
    for (const auto& t : s.timings)
        timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    j["stage_timings"] = timings;
    return j.dump(2);
}

BitString demo_seed_bits(std::uint64_t seed, std::uint64_t count) {
    std::mt19937_64 rng(seed);
    BitString out(count);
    auto& words = out.words();
    for (auto& w : words) w = rng();
    out.mask_tail();
    return out;
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
    PipelineSummary summary;
    summary.rng_algorithm = kSimRngAlgorithm;

    // fit: take coefficients from the sweep when one is given.
    NoiseModelParams params = config.noise;
    if (!config.paths.sweep_csv.empty()) {
        params = run_stage("fit", summary.timings, [&] {
            const auto sweep = load_sweep_csv(config.paths.sweep_csv);
            NoiseModelParams fitted = fit_noise_model(sweep, config.fit_alpha);
            StagedFile out(config.paths.fit_report);
            write_text_file(out.partial(), params_to_json(fitted));
            out.commit();
            return fitted;
        });
    }

    // operating point: explicit power, or the SNR optimum when power <= 0.
    const double power = run_stage("operating-point", summary.timings, [&] {
        return config.power_mw > 0.0 ? config.power_mw : optimal_power(params).power_mw;
    });
    summary.gamma = run_stage("snr", summary.timings, [&] { return snr(params, power); });

    // simulate
    const RawSampleStream raw = run_stage("simulate", summary.timings, [&] {
        SimConfig sim;
        sim.params = params;
        sim.power_mw = power;
        sim.adc = config.adc;
        sim.n_samples = config.n_samples;
        sim.quantum_seed = config.quantum_seed;
        sim.classical_seed = config.classical_seed;
        sim.bandwidth_cutoff = config.bandwidth_cutoff;
        RawSampleStream stream = simulate_raw(sim);
        StagedFile out(config.paths.raw);
        write_raw_file(out.partial(), stream);
        out.commit();
        return stream;
    });
    summary.raw_samples = raw.samples.size();

    // entropy
    const EntropyReport entropy = run_stage("entropy", summary.timings, [&] {
        EntropyReport report = evaluate(raw, params, power);
        StagedFile out(config.paths.entropy_report);
        write_text_file(out.partial(), report_to_json(report));
        out.commit();
        return report;
    });
    summary.h_min_per_sample = entropy.h_min_per_sample;

    // extract
    const StreamExtractResult extracted = run_stage("extract", summary.timings, [&] {
        const double rate = config.extractor.h_min_rate > 0.0
                                ? config.extractor.h_min_rate
                                : entropy.h_min_per_sample / config.adc.bits;
        const ExtractorParams params_ext =
            output_length(config.extractor.n, rate, config.extractor.epsilon);
        const ExtractorAlgo algo = algo_from_string(config.extractor.algorithm);

        std::uint64_t seed_bits_needed = params_ext.d;
        if (algo == ExtractorAlgo::trevisan)
            seed_bits_needed =
                trevisan_params(params_ext.n, params_ext.m, params_ext.epsilon).seed_length;

        BitString seed;
        if (!config.extractor.seed_file.empty()) {
            const SeedFile sf = read_seed_file(config.extractor.seed_file);
            if (sf.seed.size() != seed_bits_needed)
                throw LengthMismatch("seed file holds " + std::to_string(sf.seed.size()) +
                                     " bits, need " + std::to_string(seed_bits_needed));
            seed = sf.seed;
        } else if (config.extractor.demo_seed) {
            seed = demo_seed_bits(*config.extractor.demo_seed, seed_bits_needed);
        } else {
            throw Error(
                "no extractor seed: supply a seed file, or opt into a PRNG "
                "seed with demo_seed (demo only; security assumes a uniform seed)");
        }

        StreamExtractResult result = stream_extract(raw, params_ext, seed, algo);
        StagedFile bits_out(config.paths.bits);
        write_bits_file(bits_out.partial(), result.bits);
        bits_out.commit();
        StagedFile meta_out(config.paths.extract_metadata);
        write_text_file(meta_out.partial(), extract_metadata_json(result, params_ext));
        meta_out.commit();
        return result;
    });
    summary.bits_extracted = extracted.bits.size();
    summary.discarded_bits = extracted.discarded_bits;

    // test
    summary.reports = run_stage("test", summary.timings, [&] {
        std::vector<TestReport> reports = core_battery(extracted.bits, config.tests.alpha);
        const AutocorrResult ac = autocorrelation_bits(extracted.bits, config.tests.max_lag);
        double mean = 0.0;
        double worst = 0.0;
        for (std::size_t j = 1; j < ac.coefficients.size(); ++j) {
            mean += ac.coefficients[j];
            worst = std::max(worst, std::fabs(ac.coefficients[j]));
        }
        mean /= static_cast<double>(ac.coefficients.size() - 1);
        summary.mean_autocorr = mean;
        summary.max_abs_autocorr = worst;
        StagedFile out(config.paths.test_report);
        write_text_file(out.partial(), reports_to_json(reports));
        out.commit();
        return reports;
    });
    summary.all_tests_passed =
        std::all_of(summary.reports.begin(), summary.reports.end(),
                    [](const TestReport& r) { return r.pass; });
    return summary;
}

BenchReport bench_extractor(ExtractorAlgo algo, std::uint64_t n, std::uint64_t m, double epsilon,
                            int runs) {
    if (runs < 5) runs = 5;
    BenchReport report;
    report.algorithm = to_string(algo);
    report.n = n;
    report.m = m;
    report.runs = runs;
    report.kernel = gf2::clmul_hardware() ? "pclmul" : "generic";

    ExtractorParams params;
    params.n = n;
    params.m = m;
    params.k = m;
    params.d = n + m - 1;
    params.epsilon = epsilon;

    // Deterministic inputs; seed setup happens outside the timed region.
    const BitString input_bits = demo_seed_bits(42, n);
    std::optional<TrevisanParams> tp;
    std::optional<WeakDesign> design;
    BitString seed;
    if (algo == ExtractorAlgo::toeplitz) {
        seed = demo_seed_bits(43, params.d);
    } else {
        tp = trevisan_params(n, m, epsilon);
        design = trevisan_design(*tp);
        seed = demo_seed_bits(43, tp->seed_length);
    }

    // Calibrate the per-run block count to roughly 0.2 s per run.
    auto extract_once = [&] {
        if (algo == ExtractorAlgo::toeplitz)
            return toeplitz_extract(input_bits, ToeplitzSeed{seed}, params);
        return trevisan_extract(input_bits, seed, *tp, *design);
    };
    std::uint64_t blocks = 1;
    for (;;) {
        const auto start = Clock::now();
        for (std::uint64_t b = 0; b < blocks; ++b) {
            volatile bool sink = extract_once().get(0);
            (void)sink;
        }
        const double elapsed = seconds_since(start);
        if (elapsed > 0.1 || blocks > (1u << 20)) break;
        blocks *= 4;
    }
    report.blocks_per_run = blocks;

    std::vector<double> rates;
    for (int r = 0; r < runs; ++r) {
        const auto start = Clock::now();
        for (std::uint64_t b = 0; b < blocks; ++b) {
            volatile bool sink = extract_once().get(0);
            (void)sink;
        }
        const double elapsed = seconds_since(start);
        rates.push_back(static_cast<double>(blocks * m) / elapsed);
    }
    std::sort(rates.begin(), rates.end());
    report.median_bits_per_sec = rates[rates.size() / 2];
    return report;
}

}  // namespace qrng
