#pragma once

#include <cstdint>
#include <vector>

#include "qrng/bitstring.hpp"

namespace qrng::gf2 {

using Word = std::uint64_t;

/// Polynomial over GF(2): coefficient of x^i lives at bit (i % 64) of
/// word (i / 64). Note this is the opposite bit order from BitString.
using Poly = std::vector<Word>;

/// True when the carry-less multiply instruction is used; the portable
/// fallback computes identical results.
bool clmul_hardware();

/// Full product a·b over GF(2); result has a.size()+b.size() words.
Poly multiply(const Poly& a, const Poly& b);

/// Interpret bit i of `bits` as the coefficient of x^i.
Poly poly_from_bits(const BitString& bits);

/// Extract `count` consecutive coefficients starting at x^pos back into a
/// BitString (bit 0 of the result = coefficient of x^pos).
BitString bits_from_poly(const Poly& p, std::size_t pos, std::size_t count);

int poly_degree(const Poly& p);  // -1 for the zero polynomial

/// Binary extension field GF(2^bits) with a deterministically chosen
/// irreducible modulus x^bits + g(x) (smallest odd g passing Rabin's
/// irreducibility test). Elements are coefficient vectors of
/// ceil(bits/64) words, value bit i = coefficient of x^i.
class BinaryField {
public:
    explicit BinaryField(unsigned bits);

    unsigned bits() const { return bits_; }
    std::size_t words() const { return words_; }
    /// The tail g of the modulus, as a polynomial.
    const Poly& modulus_tail() const { return tail_; }

    Poly mul(const Poly& a, const Poly& b) const;

    /// Reduce an arbitrary polynomial modulo the field modulus.
    Poly reduce(Poly p) const;

private:
    unsigned bits_ = 0;
    std::size_t words_ = 0;
    Poly tail_;  // g, degree < bits_
};

}  // namespace qrng::gf2
