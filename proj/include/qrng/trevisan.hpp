#pragma once

#include <cstdint>

#include "qrng/bitstring.hpp"
#include "qrng/weak_design.hpp"

namespace qrng {

/// Concrete parameters of the Trevisan construction: a polynomial weak
/// design over GF(t) composed with a one-bit extractor built from a
/// Reed-Solomon code over GF(2^field_bits) concatenated with the Hadamard
/// (inner product) code.
struct TrevisanParams {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double epsilon = 0.0;
    double epsilon1 = 0.0;       // per-output-bit error, epsilon/m
    unsigned field_bits = 0;     // w: RS symbol width
    std::uint64_t rs_symbols = 0;  // L = ceil(n/w)
    std::uint64_t t = 0;         // one-bit seed length, prime power >= 2w
    unsigned degree_bound = 0;   // weak design polynomial degree bound
    std::uint64_t seed_length = 0;  // d1 = t^2
    double overlap_rho = 2.0 * 2.718281828459045;
    /// Source min-entropy the proven bound needs:
    /// k >= overlap_rho·(m-1) + 4·log2(1/epsilon1) + log2(n) + 6.
    double k_required = 0.0;
};

/// Derive parameters for given (n, m, epsilon): epsilon1 = epsilon/m,
/// w = ceil(log2 n + 2·log2(2/epsilon1)), t = smallest prime power >= 2w
/// (seed bits beyond 2w inside each set are ignored).
TrevisanParams trevisan_params(std::uint64_t n, std::uint64_t m, double epsilon);

/// Smallest total error the accounting above proves for a source of
/// min-entropy k with these parameters; capped at 1 when vacuous.
double trevisan_proven_epsilon(const TrevisanParams& params, double k);

/// Weak design matching the parameters (m sets over GF(t)).
WeakDesign trevisan_design(const TrevisanParams& params);

/// Output bit i applies the RS-Hadamard one-bit extractor to the seed
/// restricted to design set i: the first field_bits of the restriction
/// pick the RS evaluation point, the next field_bits the Hadamard mask.
/// Deterministic.
BitString trevisan_extract(const BitString& input, const BitString& seed,
                           const TrevisanParams& params, const WeakDesign& design);

}  // namespace qrng
