#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qrng/errors.hpp"
#include "qrng/extractors.hpp"
#include "qrng/gf2.hpp"
#include "qrng/io.hpp"
#include "qrng/min_entropy.hpp"
#include "qrng/noise_model.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/presets.hpp"
#include "qrng/source_sim.hpp"
#include "qrng/stat_tests.hpp"
#include "qrng/trevisan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTestsFailed = 3;

qrng::NoiseModelParams load_params(const std::string& params_path, double aq, double ac, double f) {
    if (!params_path.empty())
        return qrng::params_from_json(qrng::read_text_file(params_path));
    if (aq < 0.0)
        throw qrng::Error("supply --params or explicit --aq/--ac/--f coefficients");
    qrng::NoiseModelParams p;
    p.aq = aq;
    p.ac = ac;
    p.f = f;
    return p;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        qrng::write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-fluctuation QRNG toolkit: noise model fitting, source simulation, "
                 "min-entropy evaluation, randomness extraction, statistical tests"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit the quadratic variance model to a power sweep CSV");
    std::string fit_in, fit_out;
    double fit_alpha = 0.99;
    fit->add_option("--in", fit_in, "sweep CSV (power_mw,variance_mv2)")->required();
    fit->add_option("--alpha", fit_alpha, "confidence level");
    fit->add_option("--out", fit_out, "output JSON path (default: stdout)");

    // snr
    auto* snr_cmd = app.add_subcommand("snr", "Evaluate the quantum/classical noise ratio at a power");
    std::string snr_params;
    double snr_aq = -1.0, snr_ac = 0.0, snr_f = 0.0, snr_power = 0.0;
    snr_cmd->add_option("--params", snr_params, "fit JSON");
    snr_cmd->add_option("--aq", snr_aq, "quantum coefficient, mV^2/mW");
    snr_cmd->add_option("--ac", snr_ac, "classical coefficient, mV^2/mW^2");
    snr_cmd->add_option("--f", snr_f, "background noise, mV^2");
    snr_cmd->add_option("--power", snr_power, "laser power, mW")->required();

    // optimal-power
    auto* opt = app.add_subcommand("optimal-power", "Power maximizing the SNR");
    std::string opt_params;
    double opt_aq = -1.0, opt_ac = 0.0, opt_f = 0.0;
    opt->add_option("--params", opt_params, "fit JSON");
    opt->add_option("--aq", opt_aq, "quantum coefficient");
    opt->add_option("--ac", opt_ac, "classical coefficient");
    opt->add_option("--f", opt_f, "background noise");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate raw ADC samples from the noise model");
    std::string sim_params, sim_out;
    double sim_aq = -1.0, sim_ac = 0.0, sim_f = 0.0;
    double sim_power = qrng::kWorkingPowerMw, sim_range = 15.0, sim_cutoff = 0.0;
    int sim_bits = 8;
    std::uint64_t sim_samples = 0, sim_qseed = 1, sim_cseed = 2;
    bool sim_working_point = false;
    sim->add_option("--params", sim_params, "fit JSON");
    sim->add_option("--aq", sim_aq, "quantum coefficient");
    sim->add_option("--ac", sim_ac, "classical coefficient");
    sim->add_option("--f", sim_f, "background noise");
    sim->add_flag("--working-point", sim_working_point,
                  "use the built-in working-point preset coefficients");
    sim->add_option("--power", sim_power, "laser power, mW");
    sim->add_option("--samples", sim_samples, "sample count")->required();
    sim->add_option("--adc-bits", sim_bits, "ADC resolution");
    sim->add_option("--adc-range", sim_range, "ADC half-range a, mV");
    sim->add_option("--quantum-seed", sim_qseed, "quantum stream seed");
    sim->add_option("--classical-seed", sim_cseed, "classical stream seed");
    sim->add_option("--bandwidth-cutoff", sim_cutoff,
                    "optional low-pass cutoff as a fraction of the sample rate");
    sim->add_option("--out", sim_out, "raw sample file")->required();

    // entropy
    auto* ent = app.add_subcommand("entropy", "Min-entropy of a raw sample stream");
    std::string ent_in, ent_params, ent_out;
    double ent_aq = -1.0, ent_ac = 0.0, ent_f = 0.0, ent_power = qrng::kWorkingPowerMw;
    bool ent_working_point = false;
    ent->add_option("--in", ent_in, "raw sample file")->required();
    ent->add_option("--params", ent_params, "fit JSON");
    ent->add_option("--aq", ent_aq, "quantum coefficient");
    ent->add_option("--ac", ent_ac, "classical coefficient");
    ent->add_option("--f", ent_f, "background noise");
    ent->add_flag("--working-point", ent_working_point,
                  "use the built-in working-point preset coefficients");
    ent->add_option("--power", ent_power, "laser power, mW");
    ent->add_option("--out", ent_out, "report JSON path (default: stdout)");

    // extract
    auto* ext = app.add_subcommand("extract", "Distill near-uniform bits from raw samples");
    std::string ext_algo = "toeplitz", ext_seed_file, ext_in, ext_out, ext_meta, ext_entropy,
                ext_save_seed;
    std::uint64_t ext_n = 4096;
    double ext_epsilon = 0x1p-100, ext_rate = 0.0;
    std::optional<std::uint64_t> ext_demo_seed;
    ext->add_option("--algo", ext_algo, "toeplitz|trevisan");
    ext->add_option("--n", ext_n, "input block length, bits");
    ext->add_option("--epsilon", ext_epsilon, "security parameter");
    ext->add_option("--seed-file", ext_seed_file, "seed file (QRNGSEED format)");
    ext->add_option("--demo-seed", ext_demo_seed,
                    "PRNG seed for demo extraction (security assumes a uniform external seed)");
    ext->add_option("--save-seed", ext_save_seed, "write the demo seed to this seed file");
    ext->add_option("--rate", ext_rate, "min-entropy per raw bit (overrides --entropy-report)");
    ext->add_option("--entropy-report", ext_entropy, "entropy report JSON supplying the rate");
    ext->add_option("--in", ext_in, "raw sample file")->required();
    ext->add_option("--out", ext_out, "extracted bits file")->required();
    ext->add_option("--meta", ext_meta, "sidecar metadata path (default: <out>.meta.json)");

    // test
    auto* tst = app.add_subcommand("test", "Statistical tests on bits or raw samples");
    std::string tst_in, tst_report, tst_battery;
    double tst_alpha = 0.01;
    bool tst_autocorr = false, tst_spectrum = false;
    std::size_t tst_max_lag = 100, tst_segments = 64, tst_block = 0;
    tst->add_option("--in", tst_in, "bits file or raw sample file")->required();
    tst->add_option("--battery", tst_battery, "battery name (core)");
    tst->add_option("--alpha", tst_alpha, "significance level");
    tst->add_option("--block-size", tst_block, "block frequency block size (default: auto)");
    tst->add_flag("--autocorr", tst_autocorr, "autocorrelation up to --max-lag");
    tst->add_option("--max-lag", tst_max_lag, "largest autocorrelation lag");
    tst->add_flag("--spectrum", tst_spectrum, "Welch spectral flatness");
    tst->add_option("--segments", tst_segments, "Welch segment count");
    tst->add_option("--report", tst_report, "report JSON path (default: stdout)");

    // bench
    auto* bch = app.add_subcommand("bench", "Extraction throughput, median of timed runs");
    std::string bch_algo = "toeplitz";
    std::uint64_t bch_n = 4096, bch_m = 3230;
    double bch_epsilon = 0x1p-100;
    int bch_runs = 5;
    bch->add_option("--algo", bch_algo, "toeplitz|trevisan");
    bch->add_option("--n", bch_n, "input block length");
    bch->add_option("--m", bch_m, "output block length");
    bch->add_option("--epsilon", bch_epsilon, "security parameter");
    bch->add_option("--runs", bch_runs, "timed repetitions (>= 5)");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run fit->simulate->entropy->extract->test");
    std::string pipe_config, pipe_summary;
    bool pipe_emit_default = false;
    pipe->add_option("--config", pipe_config, "pipeline config JSON");
    pipe->add_flag("--emit-default-config", pipe_emit_default,
                   "print a default config and exit");
    pipe->add_option("--summary", pipe_summary, "summary JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*fit) {
            const auto sweep = qrng::load_sweep_csv(fit_in);
            const auto params = qrng::fit_noise_model(sweep, fit_alpha);
            emit(fit_out, qrng::params_to_json(params));
        } else if (*snr_cmd) {
            const auto params = load_params(snr_params, snr_aq, snr_ac, snr_f);
            std::printf("%.6f\n", qrng::snr(params, snr_power));
        } else if (*opt) {
            const auto params = load_params(opt_params, opt_aq, opt_ac, opt_f);
            const auto best = qrng::optimal_power(params);
            std::printf("power_mw=%.6f gamma=%.6f\n", best.power_mw, best.gamma);
        } else if (*sim) {
            qrng::SimConfig config;
            config.params = sim_working_point ? qrng::working_point_params()
                                              : load_params(sim_params, sim_aq, sim_ac, sim_f);
            config.power_mw = sim_power;
            config.adc = qrng::AdcConfig{sim_bits, sim_range};
            config.n_samples = sim_samples;
            config.quantum_seed = sim_qseed;
            config.classical_seed = sim_cseed;
            config.bandwidth_cutoff = sim_cutoff;
            qrng::write_raw_file(sim_out, qrng::simulate_raw(config));
            std::fprintf(stderr, "wrote %llu samples (%s)\n",
                         static_cast<unsigned long long>(sim_samples), qrng::kSimRngAlgorithm);
        } else if (*ent) {
            const auto stream = qrng::read_raw_file(ent_in);
            const auto params = ent_working_point ? qrng::working_point_params()
                                                  : load_params(ent_params, ent_aq, ent_ac, ent_f);
            const auto report = qrng::evaluate(stream, params, ent_power);
            emit(ent_out, qrng::report_to_json(report));
        } else if (*ext) {
            const auto algo = qrng::algo_from_string(ext_algo);
            const auto raw = qrng::read_raw_file(ext_in);

            qrng::ExtractorParams params;
            qrng::BitString seed;
            if (!ext_seed_file.empty()) {
                const auto sf = qrng::read_seed_file(ext_seed_file);
                if (sf.algo != algo)
                    throw qrng::Error("seed file algorithm tag disagrees with --algo");
                if (ext->count("--n") && sf.n != ext_n)
                    throw qrng::Error("seed file n disagrees with --n");
                params.n = sf.n;
                params.m = sf.m;
                params.k = sf.m;
                params.d = sf.n + sf.m - 1;
                params.epsilon = ext_epsilon;
                seed = sf.seed;
            } else if (ext_demo_seed) {
                double rate = ext_rate;
                if (rate <= 0.0 && !ext_entropy.empty()) {
                    const auto report =
                        qrng::report_from_json(qrng::read_text_file(ext_entropy));
                    rate = report.h_min_per_sample / report.adc.bits;
                }
                if (rate <= 0.0)
                    throw qrng::Error("demo extraction needs --rate or --entropy-report");
                params = qrng::output_length(ext_n, rate, ext_epsilon);
                std::uint64_t bits_needed = params.d;
                if (algo == qrng::ExtractorAlgo::trevisan)
                    bits_needed =
                        qrng::trevisan_params(params.n, params.m, params.epsilon).seed_length;
                seed = qrng::demo_seed_bits(*ext_demo_seed, bits_needed);
                if (!ext_save_seed.empty()) {
                    qrng::SeedFile sf{algo, params.n, params.m, seed.size(), seed};
                    qrng::write_seed_file(ext_save_seed, sf);
                }
            } else {
                throw qrng::Error("supply --seed-file, or --demo-seed for demo use "
                                  "(security assumes a uniform external seed)");
            }

            const auto result = qrng::stream_extract(raw, params, seed, algo);
            qrng::write_bits_file(ext_out, result.bits);
            const std::string meta_path = ext_meta.empty() ? ext_out + ".meta.json" : ext_meta;
            qrng::write_text_file(meta_path, qrng::extract_metadata_json(result, params));
            std::fprintf(stderr, "extracted %llu bits from %llu blocks (%llu bits discarded)\n",
                         static_cast<unsigned long long>(result.bits.size()),
                         static_cast<unsigned long long>(result.blocks),
                         static_cast<unsigned long long>(result.discarded_bits));
        } else if (*tst) {
            const bool raw_input = qrng::is_raw_file(tst_in);
            std::vector<qrng::TestReport> reports;
            bool battery_failed = false;

            if (!tst_battery.empty()) {
                if (tst_battery != "core")
                    throw qrng::Error("unknown battery: " + tst_battery);
                if (raw_input)
                    throw qrng::Error("the core battery runs on extracted bit files");
                const auto bits = qrng::read_bits_file(tst_in);
                if (tst_block > 0) {
                    reports.push_back(qrng::monobit_test(bits, tst_alpha));
                    reports.push_back(qrng::block_frequency_test(bits, tst_block, tst_alpha));
                    reports.push_back(qrng::runs_test(bits, tst_alpha));
                } else {
                    reports = qrng::core_battery(bits, tst_alpha);
                }
            }
            if (tst_autocorr) {
                qrng::AutocorrResult ac;
                if (raw_input) {
                    const auto stream = qrng::read_raw_file(tst_in);
                    std::vector<double> volts(stream.samples.size());
                    for (std::size_t i = 0; i < volts.size(); ++i)
                        volts[i] = qrng::dequantize_midpoint(stream.samples[i], stream.adc);
                    ac = qrng::autocorrelation(volts, tst_max_lag);
                } else {
                    ac = qrng::autocorrelation_bits(qrng::read_bits_file(tst_in), tst_max_lag);
                }
                qrng::TestReport r;
                r.name = "autocorrelation";
                r.alpha = tst_alpha;
                double worst = 0.0;
                for (std::size_t j = 1; j < ac.coefficients.size(); ++j)
                    worst = std::max(worst, std::fabs(ac.coefficients[j]));
                r.p_values = {worst};
                // 4-sigma null band on every lag.
                r.pass = worst < 4.0 * ac.expected_sd;
                reports.push_back(std::move(r));
            }
            if (tst_spectrum) {
                std::vector<double> samples;
                if (raw_input) {
                    const auto stream = qrng::read_raw_file(tst_in);
                    samples.resize(stream.samples.size());
                    for (std::size_t i = 0; i < samples.size(); ++i)
                        samples[i] = qrng::dequantize_midpoint(stream.samples[i], stream.adc);
                } else {
                    const auto bits = qrng::read_bits_file(tst_in);
                    samples.resize(bits.size());
                    for (std::size_t i = 0; i < bits.size(); ++i)
                        samples[i] = bits.get(i) ? 1.0 : -1.0;
                }
                const auto flat = qrng::spectral_flatness(samples, tst_segments);
                qrng::TestReport r;
                r.name = "spectral_flatness";
                r.alpha = tst_alpha;
                r.p_values = {flat.flatness};
                r.pass = flat.flatness >= 0.9;
                reports.push_back(std::move(r));
            }
            if (reports.empty())
                throw qrng::Error("nothing to do: pass --battery core, --autocorr or --spectrum");

            for (const auto& r : reports)
                if (!r.pass) battery_failed = true;
            emit(tst_report, qrng::reports_to_json(reports));
            if (battery_failed) return kExitTestsFailed;
        } else if (*bch) {
            const auto report = qrng::bench_extractor(qrng::algo_from_string(bch_algo), bch_n,
                                                      bch_m, bch_epsilon, bch_runs);
            std::printf("algorithm=%s n=%llu m=%llu kernel=%s blocks_per_run=%llu "
                        "median_bits_per_sec=%.3e\n",
                        report.algorithm.c_str(), static_cast<unsigned long long>(report.n),
                        static_cast<unsigned long long>(report.m), report.kernel.c_str(),
                        static_cast<unsigned long long>(report.blocks_per_run),
                        report.median_bits_per_sec);
        } else if (*pipe) {
            if (pipe_emit_default) {
                qrng::PipelineConfig config;
                config.noise = qrng::working_point_params();
                std::cout << qrng::config_to_json(config) << "\n";
                return kExitOk;
            }
            if (pipe_config.empty())
                throw qrng::Error("pipeline needs --config (or --emit-default-config)");
            const auto config = qrng::config_from_json(qrng::read_text_file(pipe_config));
            const auto summary = qrng::run_pipeline(config);
            emit(pipe_summary, qrng::summary_to_json(summary));
            if (!summary.all_tests_passed) return kExitTestsFailed;
        }
    } catch (const qrng::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitOk;
}
