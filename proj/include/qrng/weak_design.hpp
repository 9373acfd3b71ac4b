#pragma once

#include <cstdint>
#include <vector>

#include "qrng/errors.hpp"

namespace qrng {

/// Finite field of prime-power order t = p^e with elements encoded as
/// 0..t-1 (base-p digit vectors read as polynomial coefficients over
/// GF(p), least significant digit = constant term). Intended for the
/// small orders a weak design needs; throws InvalidFieldSize otherwise.
class GaloisField {
public:
    explicit GaloisField(std::uint64_t order);

    std::uint64_t order() const { return order_; }
    std::uint64_t characteristic() const { return p_; }
    unsigned extension_degree() const { return e_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;

private:
    std::uint64_t order_ = 0;
    std::uint64_t p_ = 0;
    unsigned e_ = 1;
    std::vector<std::uint64_t> irreducible_;  // coefficients, degree e_, monic
};

/// Family of m index sets over the universe [0, t²), each of size t, with
/// bounded pairwise overlap: set i is the graph of the i-th polynomial of
/// degree < degree_bound over GF(t), flattened as a·t + p_i(a).
struct WeakDesign {
    std::vector<std::vector<std::uint32_t>> sets;
    std::uint64_t t = 0;
    std::uint64_t universe = 0;  // t²
    unsigned degree_bound = 0;   // c: smallest with t^c >= m
    /// Documented overlap bound: sum_{j<i} 2^|Si∩Sj| <= overlap_rho·(m-1).
    double overlap_rho = 2.0 * 2.718281828459045;
};

/// Polynomial-evaluation weak design with m sets over GF(t); t must be a
/// prime power.
WeakDesign weak_design(std::uint64_t m, std::uint64_t t);

}  // namespace qrng
