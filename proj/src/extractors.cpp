#include "qrng/extractors.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "qrng/gf2.hpp"
#include "qrng/trevisan.hpp"

namespace qrng {

namespace {

// Snap values that are within 1e-9 of an integer so analytically exact
// inputs (powers of two, simple ratios) do not wobble across the floor.
double snap(double v) {
    const double r = std::round(v);
    return std::fabs(v - r) < 1e-9 ? r : v;
}

}  // namespace

ExtractorParams output_length(std::uint64_t n, double h_min_rate, double epsilon) {
    if (n == 0)
        throw std::invalid_argument("input length must be positive");
    if (!(h_min_rate > 0.0) || h_min_rate > 1.0)
        throw std::invalid_argument("h_min_rate must lie in (0, 1]");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in (0, 1]");

    ExtractorParams p;
    p.n = n;
    p.epsilon = epsilon;
    p.k = static_cast<std::uint64_t>(std::floor(snap(static_cast<double>(n) * h_min_rate)));
    const double penalty = std::ceil(snap(2.0 * std::log2(1.0 / epsilon)));
    if (penalty >= static_cast<double>(p.k))
        throw EntropyDeficit("leftover-hash penalty consumes the whole entropy budget");
    p.m = p.k - static_cast<std::uint64_t>(penalty);
    p.d = p.n + p.m - 1;
    return p;
}

BitString toeplitz_extract(const BitString& input, const ToeplitzSeed& seed,
                           const ExtractorParams& params) {
    if (params.n == 0 || params.m == 0 || params.m > params.n)
        throw std::invalid_argument("invalid extractor params");
    if (input.size() != params.n)
        throw LengthMismatch("input length does not match params.n");
    if (seed.seed.size() != params.n + params.m - 1)
        throw LengthMismatch("toeplitz seed must have n+m-1 bits");

    // out[i] = xor_j input[j]·seed[i+n-1-j] is the coefficient of
    // x^(n-1+i) in the product input(x)·seed(x).
    const gf2::Poly a = gf2::poly_from_bits(input);
    const gf2::Poly s = gf2::poly_from_bits(seed.seed);
    const gf2::Poly prod = gf2::multiply(a, s);
    return gf2::bits_from_poly(prod, params.n - 1, params.m);
}

const char* to_string(ExtractorAlgo algo) {
    return algo == ExtractorAlgo::toeplitz ? "toeplitz" : "trevisan";
}

ExtractorAlgo algo_from_string(const std::string& name) {
    if (name == "toeplitz") return ExtractorAlgo::toeplitz;
    if (name == "trevisan") return ExtractorAlgo::trevisan;
    throw std::invalid_argument("unknown extractor algorithm: " + name);
}

StreamExtractResult stream_extract(const RawSampleStream& raw, const ExtractorParams& params,
                                   const BitString& seed, ExtractorAlgo algo) {
    raw.adc.validate();
    if (params.n == 0 || params.m == 0)
        throw std::invalid_argument("invalid extractor params");
    const std::uint64_t total_bits = raw.bit_count();
    if (total_bits < params.n)
        throw InsufficientData("raw stream shorter than one extractor block");

    // Unpack sample codes into a bit stream, adc.bits bits per sample,
    // most significant bit first.
    BitString stream(total_bits);
    const int bits = raw.adc.bits;
    std::uint64_t pos = 0;
    for (const std::uint16_t code : raw.samples) {
        for (int b = bits - 1; b >= 0; --b)
            stream.set(pos++, (code >> b) & 1);
    }

    StreamExtractResult result;
    result.blocks = total_bits / params.n;
    result.discarded_bits = total_bits - result.blocks * params.n;
    result.seed_fingerprint = fingerprint_hex(seed);
    result.algorithm = to_string(algo);
    result.epsilon_per_block = params.epsilon;
    result.epsilon_total = std::min(1.0, params.epsilon * static_cast<double>(result.blocks));
    result.bits = BitString(result.blocks * params.m);

    if (algo == ExtractorAlgo::toeplitz) {
        if (seed.size() != params.n + params.m - 1)
            throw LengthMismatch("toeplitz seed must have n+m-1 bits");
        const ToeplitzSeed tseed{seed};
        for (std::uint64_t blk = 0; blk < result.blocks; ++blk) {
            const BitString block = stream.slice(blk * params.n, params.n);
            const BitString out = toeplitz_extract(block, tseed, params);
            for (std::uint64_t i = 0; i < params.m; ++i)
                if (out.get(i)) result.bits.set(blk * params.m + i, true);
        }
    } else {
        const TrevisanParams tp = trevisan_params(params.n, params.m, params.epsilon);
        const WeakDesign design = trevisan_design(tp);
        if (seed.size() != tp.seed_length)
            throw LengthMismatch("trevisan seed must cover the weak-design universe");
        for (std::uint64_t blk = 0; blk < result.blocks; ++blk) {
            const BitString block = stream.slice(blk * params.n, params.n);
            const BitString out = trevisan_extract(block, seed, tp, design);
            for (std::uint64_t i = 0; i < params.m; ++i)
                if (out.get(i)) result.bits.set(blk * params.m + i, true);
        }
    }
    return result;
}

std::string extract_metadata_json(const StreamExtractResult& result,
                                  const ExtractorParams& params) {
    nlohmann::json j{{"algorithm", result.algorithm},
                     {"n", params.n},
                     {"k", params.k},
                     {"m", params.m},
                     {"d", params.d},
                     {"epsilon", params.epsilon},
                     {"blocks", result.blocks},
                     {"discarded_bits", result.discarded_bits},
                     {"output_bits", result.bits.size()},
                     {"seed_fingerprint", result.seed_fingerprint},
                     {"epsilon_per_block", result.epsilon_per_block},
                     {"epsilon_total_seed_reuse", result.epsilon_total}};
    if (result.algorithm == std::string("trevisan")) {
        const TrevisanParams tp = trevisan_params(params.n, params.m, params.epsilon);
        j["trevisan"] = {{"field_bits", tp.field_bits},
                         {"rs_symbols", tp.rs_symbols},
                         {"t", tp.t},
                         {"degree_bound", tp.degree_bound},
                         {"seed_length", tp.seed_length},
                         {"overlap_rho", tp.overlap_rho},
                         {"k_required", tp.k_required},
                         {"entropy_condition_ok", static_cast<double>(params.k) >= tp.k_required}};
    }
    return j.dump(2);
}

}  // namespace qrng
