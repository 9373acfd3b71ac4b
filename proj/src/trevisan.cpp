#include "qrng/trevisan.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qrng/gf2.hpp"

namespace qrng {

namespace {

bool is_prime_power(std::uint64_t v) {
    if (v < 2) return false;
    std::uint64_t p = 2;
    while (v % p != 0) {
        ++p;
        if (p * p > v) {
            p = v;
            break;
        }
    }
    while (v % p == 0) v /= p;
    return v == 1;
}

std::uint64_t next_prime_power(std::uint64_t v) {
    while (!is_prime_power(v)) ++v;
    return v;
}

// Split the input into L field elements of w bits, MSB-first; the last
// element is zero-padded. Element bit order: the first bit of a chunk is
// the highest coefficient.
std::vector<gf2::Poly> rs_symbols_from_input(const BitString& input, unsigned w, std::uint64_t L,
                                             const gf2::BinaryField& field) {
    std::vector<gf2::Poly> symbols(L, gf2::Poly(field.words(), 0));
    for (std::uint64_t s = 0; s < L; ++s) {
        gf2::Poly& elem = symbols[s];
        for (unsigned b = 0; b < w; ++b) {
            const std::uint64_t pos = s * w + b;
            if (pos >= input.size()) break;
            if (input.get(pos)) {
                const unsigned coeff = w - 1 - b;
                elem[coeff / 64] |= std::uint64_t{1} << (coeff % 64);
            }
        }
    }
    return symbols;
}

}  // namespace

TrevisanParams trevisan_params(std::uint64_t n, std::uint64_t m, double epsilon) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("trevisan_params requires n, m >= 1");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    TrevisanParams p;
    p.n = n;
    p.m = m;
    p.epsilon = epsilon;
    p.epsilon1 = epsilon / static_cast<double>(m);
    const double w_real = std::log2(static_cast<double>(n)) + 2.0 * std::log2(2.0 / p.epsilon1);
    p.field_bits = static_cast<unsigned>(std::ceil(w_real - 1e-9));
    if (p.field_bits < 1) p.field_bits = 1;
    p.rs_symbols = (n + p.field_bits - 1) / p.field_bits;
    p.t = next_prime_power(2 * static_cast<std::uint64_t>(p.field_bits));
    std::uint64_t span = p.t;
    p.degree_bound = 1;
    while (span < m) {
        span *= p.t;
        ++p.degree_bound;
    }
    p.seed_length = p.t * p.t;
    p.k_required = p.overlap_rho * static_cast<double>(m - 1) +
                   4.0 * std::log2(1.0 / p.epsilon1) + std::log2(static_cast<double>(n)) + 6.0;
    return p;
}

double trevisan_proven_epsilon(const TrevisanParams& params, double k) {
    // Invert the k_required accounting at fixed m: the budget left for the
    // one-bit extractor is k - rho(m-1) - log2(n) - 6 = 4·log2(1/eps1).
    const double budget = k - params.overlap_rho * static_cast<double>(params.m - 1) -
                          std::log2(static_cast<double>(params.n)) - 6.0;
    if (budget <= 0.0) return 1.0;
    const double eps1 = std::exp2(-budget / 4.0);
    const double total = static_cast<double>(params.m) * eps1;
    return total > 1.0 ? 1.0 : total;
}

WeakDesign trevisan_design(const TrevisanParams& params) {
    return weak_design(params.m, params.t);
}

BitString trevisan_extract(const BitString& input, const BitString& seed,
                           const TrevisanParams& params, const WeakDesign& design) {
    if (input.size() != params.n)
        throw LengthMismatch("trevisan input length does not match params.n");
    if (seed.size() != params.seed_length)
        throw LengthMismatch("trevisan seed length does not match the design universe");
    if (design.sets.size() < params.m)
        throw DesignMismatch("weak design has fewer sets than output bits");
    if (design.t != params.t || design.universe != params.seed_length)
        throw DesignMismatch("weak design geometry does not match params");
    if (params.t < 2 * static_cast<std::uint64_t>(params.field_bits))
        throw DesignMismatch("one-bit extractor needs 2·field_bits seed bits per set");

    const unsigned w = params.field_bits;
    const gf2::BinaryField field(w);
    const std::vector<gf2::Poly> symbols = rs_symbols_from_input(input, w, params.rs_symbols, field);

    BitString out(params.m);
    gf2::Poly alpha(field.words(), 0);
    gf2::Poly mask(field.words(), 0);
    for (std::uint64_t i = 0; i < params.m; ++i) {
        const auto& set = design.sets[i];
        // Restriction order follows the set's natural (sorted) order; the
        // first w bits select the evaluation point, the next w the mask.
        auto restricted_bit = [&](std::uint64_t j) { return seed.get(set[j]); };
        std::fill(alpha.begin(), alpha.end(), 0);
        std::fill(mask.begin(), mask.end(), 0);
        for (unsigned b = 0; b < w; ++b) {
            const unsigned coeff = w - 1 - b;
            if (restricted_bit(b))
                alpha[coeff / 64] |= std::uint64_t{1} << (coeff % 64);
            if (restricted_bit(w + b))
                mask[coeff / 64] |= std::uint64_t{1} << (coeff % 64);
        }

        // Q(alpha) with the input symbols as coefficients, Horner form.
        gf2::Poly acc = symbols[params.rs_symbols - 1];
        for (std::uint64_t s = params.rs_symbols - 1; s-- > 0;) {
            acc = field.mul(acc, alpha);
            for (std::size_t wd = 0; wd < acc.size(); ++wd) acc[wd] ^= symbols[s][wd];
        }

        unsigned parity = 0;
        for (std::size_t wd = 0; wd < acc.size(); ++wd)
            parity ^= static_cast<unsigned>(std::popcount(acc[wd] & mask[wd]) & 1);
        if (parity) out.set(i, true);
    }
    return out;
}

}  // namespace qrng
