#include "qrng/weak_design.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrng {

namespace {

// Dense polynomials over GF(p), coefficient vectors without trailing zeros.
using PolyP = std::vector<std::uint64_t>;

void trim(PolyP& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

PolyP mul_mod_p(const PolyP& a, const PolyP& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PolyP out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    trim(out);
    return out;
}

// Remainder of a by monic b.
PolyP mod_poly(PolyP a, const PolyP& b, std::uint64_t p) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::uint64_t sub = (lead * b[i]) % p;
            a[i + shift] = (a[i + shift] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

bool divides(const PolyP& divisor, const PolyP& poly, std::uint64_t p) {
    return mod_poly(poly, divisor, p).empty();
}

// Enumerate monic polynomials of the given degree by counting in base p.
PolyP monic_from_index(std::uint64_t index, unsigned degree, std::uint64_t p) {
    PolyP out(degree + 1, 0);
    for (unsigned d = 0; d < degree; ++d) {
        out[d] = index % p;
        index /= p;
    }
    out[degree] = 1;
    return out;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

// Brute-force irreducibility: no monic divisor of degree 1..deg/2.
bool irreducible(const PolyP& f, std::uint64_t p) {
    const unsigned deg = static_cast<unsigned>(f.size() - 1);
    for (unsigned d = 1; 2 * d <= deg; ++d) {
        const std::uint64_t count = ipow(p, d);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            if (divides(monic_from_index(idx, d, p), f, p))
                return false;
        }
    }
    return true;
}

}  // namespace

GaloisField::GaloisField(std::uint64_t order) : order_(order) {
    if (order < 2)
        throw InvalidFieldSize("field order must be at least 2");
    if (order > (1u << 20))
        throw InvalidFieldSize("field order too large for the table-free implementation");
    std::uint64_t p = 2;
    while (order % p != 0) {
        ++p;
        if (p * p > order) {
            p = order;
            break;
        }
    }
    p_ = p;
    std::uint64_t rem = order;
    e_ = 0;
    while (rem % p == 0) {
        rem /= p;
        ++e_;
    }
    if (rem != 1)
        throw InvalidFieldSize("field order is not a prime power: " + std::to_string(order));
    if (e_ > 1) {
        for (std::uint64_t idx = 0;; ++idx) {
            if (idx >= ipow(p_, e_))
                throw InvalidFieldSize("no irreducible polynomial found");
            PolyP cand = monic_from_index(idx, e_, p_);
            if (irreducible(cand, p_)) {
                irreducible_ = std::move(cand);
                break;
            }
        }
    }
}

std::uint64_t GaloisField::add(std::uint64_t a, std::uint64_t b) const {
    if (a >= order_ || b >= order_)
        throw std::invalid_argument("field element out of range");
    if (e_ == 1) return (a + b) % p_;
    std::uint64_t out = 0;
    std::uint64_t scale = 1;
    for (unsigned d = 0; d < e_; ++d) {
        out += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

std::uint64_t GaloisField::mul(std::uint64_t a, std::uint64_t b) const {
    if (a >= order_ || b >= order_)
        throw std::invalid_argument("field element out of range");
    if (e_ == 1) return (a * b) % p_;
    PolyP pa, pb;
    for (std::uint64_t v = a; v != 0; v /= p_) pa.push_back(v % p_);
    for (std::uint64_t v = b; v != 0; v /= p_) pb.push_back(v % p_);
    const PolyP prod = mod_poly(mul_mod_p(pa, pb, p_), irreducible_, p_);
    std::uint64_t out = 0;
    for (std::size_t d = prod.size(); d-- > 0;) out = out * p_ + prod[d];
    return out;
}

WeakDesign weak_design(std::uint64_t m, std::uint64_t t) {
    if (m < 1)
        throw std::invalid_argument("weak design needs at least one set");
    const GaloisField field(t);

    unsigned c = 1;
    std::uint64_t span = t;
    while (span < m) {
        span *= t;
        ++c;
        if (c > 63)
            throw std::invalid_argument("weak design degree bound overflow");
    }

    WeakDesign design;
    design.t = t;
    design.universe = t * t;
    design.degree_bound = c;
    design.sets.reserve(m);

    std::vector<std::uint64_t> coeffs(c, 0);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t idx = i;
        for (unsigned d = 0; d < c; ++d) {
            coeffs[d] = idx % t;
            idx /= t;
        }
        std::vector<std::uint32_t> set(t);
        for (std::uint64_t a = 0; a < t; ++a) {
            // Horner from the top coefficient.
            std::uint64_t val = 0;
            for (unsigned d = c; d-- > 0;)
                val = field.add(field.mul(val, a), coeffs[d]);
            set[a] = static_cast<std::uint32_t>(a * t + val);
        }
        design.sets.push_back(std::move(set));
    }
    return design;
}

}  // namespace qrng
