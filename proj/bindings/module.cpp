#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrng/adc.hpp"
#include "qrng/extractors.hpp"
#include "qrng/gf2.hpp"
#include "qrng/io.hpp"
#include "qrng/min_entropy.hpp"
#include "qrng/noise_model.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/presets.hpp"
#include "qrng/source_sim.hpp"
#include "qrng/special_functions.hpp"
#include "qrng/stat_tests.hpp"
#include "qrng/trevisan.hpp"
#include "qrng/weak_design.hpp"

namespace py = pybind11;
using namespace qrng;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phase-fluctuation QRNG toolkit: noise model, source simulation, min-entropy, "
              "Toeplitz and Trevisan extractors, statistical tests";

    py::class_<PowerSweepPoint>(m, "PowerSweepPoint")
        .def(py::init<double, double>(), py::arg("power_mw"), py::arg("variance_mv2"))
        .def_readwrite("power_mw", &PowerSweepPoint::power_mw)
        .def_readwrite("variance_mv2", &PowerSweepPoint::variance_mv2);

    py::class_<NoiseModelParams>(m, "NoiseModelParams")
        .def(py::init([](double aq, double ac, double f) {
                 NoiseModelParams p;
                 p.aq = aq;
                 p.ac = ac;
                 p.f = f;
                 return p;
             }),
             py::arg("aq"), py::arg("ac"), py::arg("f"))
        .def_readwrite("aq", &NoiseModelParams::aq)
        .def_readwrite("ac", &NoiseModelParams::ac)
        .def_readwrite("f", &NoiseModelParams::f)
        .def_readonly("ci_aq", &NoiseModelParams::ci_aq)
        .def_readonly("ci_ac", &NoiseModelParams::ci_ac)
        .def_readonly("ci_f", &NoiseModelParams::ci_f)
        .def_readonly("alpha", &NoiseModelParams::alpha)
        .def_readonly("rss", &NoiseModelParams::rss)
        .def_readonly("negative_coefficient", &NoiseModelParams::negative_coefficient);

    m.def("fit_noise_model", &fit_noise_model, py::arg("sweep"), py::arg("alpha") = 0.99);
    m.def("snr", &snr, py::arg("params"), py::arg("power_mw"));

    py::class_<OptimalPower>(m, "OptimalPower")
        .def_readonly("power_mw", &OptimalPower::power_mw)
        .def_readonly("gamma", &OptimalPower::gamma);
    m.def("optimal_power", &optimal_power, py::arg("params"));

    m.def("sweep_fit_params", &sweep_fit_params);
    m.def("working_point_params", &working_point_params);

    py::class_<AdcConfig>(m, "AdcConfig")
        .def(py::init<int, double>(), py::arg("bits") = 8, py::arg("range_a") = 15.0)
        .def_readwrite("bits", &AdcConfig::bits)
        .def_readwrite("range_a", &AdcConfig::range_a)
        .def_property_readonly("bin_width", &AdcConfig::bin_width);
    m.def("quantize", &quantize, py::arg("voltage_mv"), py::arg("adc"));
    m.def("dequantize_midpoint", &dequantize_midpoint, py::arg("code"), py::arg("adc"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("params", &SimConfig::params)
        .def_readwrite("power_mw", &SimConfig::power_mw)
        .def_readwrite("adc", &SimConfig::adc)
        .def_readwrite("n_samples", &SimConfig::n_samples)
        .def_readwrite("quantum_seed", &SimConfig::quantum_seed)
        .def_readwrite("classical_seed", &SimConfig::classical_seed)
        .def_readwrite("bandwidth_cutoff", &SimConfig::bandwidth_cutoff);

    py::class_<RawSampleStream>(m, "RawSampleStream")
        .def(py::init<>())
        .def_readwrite("samples", &RawSampleStream::samples)
        .def_readwrite("adc", &RawSampleStream::adc)
        .def_property_readonly("bit_count", &RawSampleStream::bit_count);
    m.def("simulate_raw", &simulate_raw, py::arg("config"));
    m.def("simulate_voltages", &simulate_voltages, py::arg("config"));
    m.attr("SIM_RNG_ALGORITHM") = kSimRngAlgorithm;

    py::class_<StreamMoments>(m, "StreamMoments")
        .def_readonly("mean", &StreamMoments::mean)
        .def_readonly("variance", &StreamMoments::variance);
    m.def("stream_moments", &stream_moments, py::arg("stream"));

    m.def("gaussian_cdf", &gaussian_cdf, py::arg("x"));
    py::class_<GaussianSpec>(m, "GaussianSpec")
        .def(py::init<double>(), py::arg("sigma"))
        .def_readwrite("sigma", &GaussianSpec::sigma);
    m.def("bin_probabilities", &bin_probabilities, py::arg("gauss"), py::arg("adc"));
    m.def("quantum_variance", &quantum_variance, py::arg("sigma_total_sq"), py::arg("gamma"));
    m.def("min_entropy_per_sample", &min_entropy_per_sample, py::arg("sigma_quantum"),
          py::arg("adc"));

    py::class_<EntropyReport>(m, "EntropyReport")
        .def_readonly("sigma_total_sq", &EntropyReport::sigma_total_sq)
        .def_readonly("sigma_total_sq_sheppard", &EntropyReport::sigma_total_sq_sheppard)
        .def_readonly("gamma", &EntropyReport::gamma)
        .def_readonly("sigma_quantum_sq", &EntropyReport::sigma_quantum_sq)
        .def_readonly("p_max", &EntropyReport::p_max)
        .def_readonly("h_min_per_sample", &EntropyReport::h_min_per_sample)
        .def_readonly("autocorr_lag1", &EntropyReport::autocorr_lag1)
        .def_readonly("autocorr_lag2", &EntropyReport::autocorr_lag2)
        .def_readonly("n_samples", &EntropyReport::n_samples)
        .def_readonly("security_assumption", &EntropyReport::security_assumption);
    m.def("evaluate_entropy", &evaluate, py::arg("stream"), py::arg("params"),
          py::arg("power_mw"));
    m.def("entropy_report_to_json", &report_to_json, py::arg("report"));

    py::class_<BitString>(m, "BitString")
        .def(py::init<std::size_t>(), py::arg("length") = 0)
        .def_static("from_string", &BitString::from_string, py::arg("bits"))
        .def_static(
            "from_bytes",
            [](py::bytes data, std::size_t length) {
                const std::string raw = data;
                std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
                return BitString::from_bytes(bytes, length);
            },
            py::arg("data"), py::arg("length"))
        .def("to_bytes",
             [](const BitString& bits) {
                 const auto bytes = bits.to_bytes();
                 return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
             })
        .def("__str__", &BitString::to_string)
        .def("__len__", &BitString::size)
        .def("__getitem__",
             [](const BitString& bits, std::size_t i) {
                 if (i >= bits.size()) throw py::index_error();
                 return bits.get(i);
             })
        .def("__eq__", [](const BitString& a, const BitString& b) { return a == b; })
        .def("count_ones", &BitString::count_ones);
    m.def("fingerprint_hex", &fingerprint_hex, py::arg("bits"));

    py::class_<ExtractorParams>(m, "ExtractorParams")
        .def(py::init<>())
        .def_readwrite("n", &ExtractorParams::n)
        .def_readwrite("k", &ExtractorParams::k)
        .def_readwrite("m", &ExtractorParams::m)
        .def_readwrite("d", &ExtractorParams::d)
        .def_readwrite("epsilon", &ExtractorParams::epsilon);
    m.def("output_length", &output_length, py::arg("n"), py::arg("h_min_rate"),
          py::arg("epsilon"));

    m.def(
        "toeplitz_extract",
        [](const BitString& input, const BitString& seed, const ExtractorParams& params) {
            return toeplitz_extract(input, ToeplitzSeed{seed}, params);
        },
        py::arg("input"), py::arg("seed"), py::arg("params"));

    py::class_<WeakDesign>(m, "WeakDesign")
        .def_readonly("sets", &WeakDesign::sets)
        .def_readonly("t", &WeakDesign::t)
        .def_readonly("universe", &WeakDesign::universe)
        .def_readonly("degree_bound", &WeakDesign::degree_bound)
        .def_readonly("overlap_rho", &WeakDesign::overlap_rho);
    m.def("weak_design", &weak_design, py::arg("m"), py::arg("t"));

    py::class_<TrevisanParams>(m, "TrevisanParams")
        .def_readonly("n", &TrevisanParams::n)
        .def_readonly("m", &TrevisanParams::m)
        .def_readonly("epsilon", &TrevisanParams::epsilon)
        .def_readonly("epsilon1", &TrevisanParams::epsilon1)
        .def_readonly("field_bits", &TrevisanParams::field_bits)
        .def_readonly("rs_symbols", &TrevisanParams::rs_symbols)
        .def_readonly("t", &TrevisanParams::t)
        .def_readonly("degree_bound", &TrevisanParams::degree_bound)
        .def_readonly("seed_length", &TrevisanParams::seed_length)
        .def_readonly("overlap_rho", &TrevisanParams::overlap_rho)
        .def_readonly("k_required", &TrevisanParams::k_required);
    m.def("trevisan_params", &trevisan_params, py::arg("n"), py::arg("m"), py::arg("epsilon"));
    m.def("trevisan_design", &trevisan_design, py::arg("params"));
    m.def("trevisan_extract", &trevisan_extract, py::arg("input"), py::arg("seed"),
          py::arg("params"), py::arg("design"));
    m.def("trevisan_proven_epsilon", &trevisan_proven_epsilon, py::arg("params"), py::arg("k"));

    py::enum_<ExtractorAlgo>(m, "ExtractorAlgo")
        .value("toeplitz", ExtractorAlgo::toeplitz)
        .value("trevisan", ExtractorAlgo::trevisan);

    py::class_<StreamExtractResult>(m, "StreamExtractResult")
        .def_readonly("bits", &StreamExtractResult::bits)
        .def_readonly("blocks", &StreamExtractResult::blocks)
        .def_readonly("discarded_bits", &StreamExtractResult::discarded_bits)
        .def_readonly("seed_fingerprint", &StreamExtractResult::seed_fingerprint)
        .def_readonly("algorithm", &StreamExtractResult::algorithm)
        .def_readonly("epsilon_per_block", &StreamExtractResult::epsilon_per_block)
        .def_readonly("epsilon_total", &StreamExtractResult::epsilon_total);
    m.def("stream_extract", &stream_extract, py::arg("raw"), py::arg("params"), py::arg("seed"),
          py::arg("algo"));
    m.def("extract_metadata_json", &extract_metadata_json, py::arg("result"), py::arg("params"));

    py::class_<AutocorrResult>(m, "AutocorrResult")
        .def_readonly("coefficients", &AutocorrResult::coefficients)
        .def_readonly("n", &AutocorrResult::n)
        .def_readonly("expected_sd", &AutocorrResult::expected_sd);
    m.def("autocorrelation", &autocorrelation, py::arg("samples"), py::arg("max_lag"));
    m.def("autocorrelation_bits", &autocorrelation_bits, py::arg("bits"), py::arg("max_lag"));

    py::class_<TestReport>(m, "TestReport")
        .def_readonly("name", &TestReport::name)
        .def_readonly("p_values", &TestReport::p_values)
        .def_readonly("alpha", &TestReport::alpha)
        .def_readonly("pass_", &TestReport::pass)
        .def_readonly("proportion", &TestReport::proportion);
    m.def("monobit_test", &monobit_test, py::arg("bits"), py::arg("alpha") = 0.01);
    m.def("block_frequency_test", &block_frequency_test, py::arg("bits"), py::arg("block_size"),
          py::arg("alpha") = 0.01);
    m.def("runs_test", &runs_test, py::arg("bits"), py::arg("alpha") = 0.01);
    m.def("core_battery", &core_battery, py::arg("bits"), py::arg("alpha") = 0.01);
    m.def("proportion_rule", &proportion_rule, py::arg("reports"), py::arg("alpha"),
          py::arg("threshold") = 0.976);
    m.def("ks_combine", &ks_combine, py::arg("p_values"));

    py::class_<SpectralFlatness>(m, "SpectralFlatness")
        .def_readonly("flatness", &SpectralFlatness::flatness)
        .def_readonly("psd", &SpectralFlatness::psd)
        .def_readonly("segment_length", &SpectralFlatness::segment_length);
    m.def("spectral_flatness", &spectral_flatness, py::arg("samples"), py::arg("segments"));
    m.def("reports_to_json", &reports_to_json, py::arg("reports"));

    m.def("write_raw_file", &write_raw_file, py::arg("path"), py::arg("stream"));
    m.def("read_raw_file", &read_raw_file, py::arg("path"));
    m.def(
        "write_seed_file",
        [](const std::string& path, ExtractorAlgo algo, std::uint64_t n, std::uint64_t m_len,
           const BitString& seed) {
            write_seed_file(path, SeedFile{algo, n, m_len, seed.size(), seed});
        },
        py::arg("path"), py::arg("algo"), py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def("write_bits_file", &write_bits_file, py::arg("path"), py::arg("bits"));
    m.def("read_bits_file", &read_bits_file, py::arg("path"));

    m.def("demo_seed_bits", &demo_seed_bits, py::arg("seed"), py::arg("count"));
    m.def(
        "run_pipeline_json",
        [](const std::string& config_json) {
            return summary_to_json(run_pipeline(config_from_json(config_json)));
        },
        py::arg("config_json"));
    m.def("default_pipeline_config_json",
          [] { return config_to_json(PipelineConfig{}); });
    m.def("clmul_hardware", &gf2::clmul_hardware);

    py::register_exception<Error>(m, "QrngError");
}
