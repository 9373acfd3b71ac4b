#include "qrng/gf2.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define QRNG_X86_64 1
#include <immintrin.h>
#include <wmmintrin.h>
#endif

namespace qrng::gf2 {

namespace {

struct WordPair {
    Word lo = 0;
    Word hi = 0;
};

WordPair clmul_soft(Word a, Word b) {
    WordPair r;
    while (b) {
        const int s = std::countr_zero(b);
        b &= b - 1;
        r.lo ^= a << s;
        if (s) r.hi ^= a >> (64 - s);
    }
    return r;
}

void multiply_soft(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < nb; ++j) {
            if (b[j] == 0) continue;
            const WordPair p = clmul_soft(a[i], b[j]);
            out[i + j] ^= p.lo;
            out[i + j + 1] ^= p.hi;
        }
    }
}

#ifdef QRNG_X86_64
__attribute__((target("pclmul,sse2"))) void multiply_pclmul(const Word* a, std::size_t na,
                                                            const Word* b, std::size_t nb,
                                                            Word* out) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a[i]));
        for (std::size_t j = 0; j < nb; ++j) {
            if (b[j] == 0) continue;
            const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b[j]));
            const __m128i p = _mm_clmulepi64_si128(va, vb, 0x00);
            out[i + j] ^= static_cast<Word>(_mm_cvtsi128_si64(p));
            out[i + j + 1] ^= static_cast<Word>(_mm_extract_epi64(p, 1));
        }
    }
}

bool detect_pclmul() { return __builtin_cpu_supports("pclmul"); }
#else
bool detect_pclmul() { return false; }
#endif

const bool g_use_pclmul = detect_pclmul();

Word reverse_bits(Word v) {
    v = ((v >> 1) & 0x5555555555555555ull) | ((v & 0x5555555555555555ull) << 1);
    v = ((v >> 2) & 0x3333333333333333ull) | ((v & 0x3333333333333333ull) << 2);
    v = ((v >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((v & 0x0F0F0F0F0F0F0F0Full) << 4);
    v = ((v >> 8) & 0x00FF00FF00FF00FFull) | ((v & 0x00FF00FF00FF00FFull) << 8);
    v = ((v >> 16) & 0x0000FFFF0000FFFFull) | ((v & 0x0000FFFF0000FFFFull) << 16);
    return (v >> 32) | (v << 32);
}

}  // namespace

bool clmul_hardware() { return g_use_pclmul; }

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size(), 0);
    if (a.empty() || b.empty()) return out;
#ifdef QRNG_X86_64
    if (g_use_pclmul) {
        multiply_pclmul(a.data(), a.size(), b.data(), b.size(), out.data());
        return out;
    }
#endif
    multiply_soft(a.data(), a.size(), b.data(), b.size(), out.data());
    return out;
}

Poly poly_from_bits(const BitString& bits) {
    const auto& words = bits.words();
    Poly p(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
        p[i] = reverse_bits(words[i]);
    return p;
}

BitString bits_from_poly(const Poly& p, std::size_t pos, std::size_t count) {
    if (p.size() * 64 < pos + count)
        throw LengthMismatch("polynomial window out of range");
    BitString out(count);
    auto& words = out.words();
    const std::size_t shift = pos % 64;
    for (std::size_t w = 0; w * 64 < count; ++w) {
        const std::size_t base = pos / 64 + w;
        Word v = p[base] >> shift;
        if (shift != 0 && base + 1 < p.size())
            v |= p[base + 1] << (64 - shift);
        words[w] = reverse_bits(v);
    }
    out.mask_tail();
    return out;
}

int poly_degree(const Poly& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] != 0)
            return static_cast<int>(i * 64 + 63 - std::countl_zero(p[i]));
    return -1;
}

namespace {

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// p >>= bits (drop low coefficients).
Poly shift_down(const Poly& p, std::size_t bits) {
    const std::size_t wshift = bits / 64;
    const std::size_t bshift = bits % 64;
    if (wshift >= p.size()) return {};
    Poly out(p.size() - wshift, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = p[i + wshift] >> bshift;
        if (bshift != 0 && i + wshift + 1 < p.size())
            out[i] |= p[i + wshift + 1] << (64 - bshift);
    }
    trim(out);
    return out;
}

Poly mask_low(const Poly& p, std::size_t bits) {
    const std::size_t nwords = (bits + 63) / 64;
    Poly out(p.begin(), p.begin() + std::min(nwords, p.size()));
    out.resize(nwords, 0);
    if (bits % 64 != 0)
        out.back() &= (Word{1} << (bits % 64)) - 1;
    return out;
}

void xor_into(Poly& dst, const Poly& src) {
    if (dst.size() < src.size()) dst.resize(src.size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
}

// Remainder by the full modulus, bit by bit. Setup-path only.
Poly mod_generic(Poly p, const Poly& modulus) {
    const int dm = poly_degree(modulus);
    for (int d = poly_degree(p); d >= dm; d = poly_degree(p)) {
        const std::size_t shift = static_cast<std::size_t>(d - dm);
        Poly shifted(modulus.size() + shift / 64 + 1, 0);
        const std::size_t ws = shift / 64;
        const std::size_t bs = shift % 64;
        for (std::size_t i = 0; i < modulus.size(); ++i) {
            shifted[i + ws] ^= modulus[i] << bs;
            if (bs != 0) shifted[i + ws + 1] ^= modulus[i] >> (64 - bs);
        }
        xor_into(p, shifted);
        trim(p);
    }
    return p;
}

Poly poly_gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod_generic(a, b);
        a = std::move(b);
        b = std::move(r);
        trim(b);
    }
    return a;
}

Poly make_x() { return Poly{2}; }

// x^(2^count) mod f via repeated squaring, using fold reduction against
// f = x^w + tail.
Poly iterate_frobenius(Poly start, unsigned count, unsigned w, const Poly& tail) {
    Poly acc = std::move(start);
    for (unsigned i = 0; i < count; ++i) {
        Poly sq = multiply(acc, acc);
        // fold: x^w == tail (mod f)
        for (;;) {
            trim(sq);
            if (poly_degree(sq) < static_cast<int>(w)) break;
            Poly high = shift_down(sq, w);
            Poly low = mask_low(sq, w);
            Poly folded = multiply(high, tail);
            xor_into(folded, low);
            sq = std::move(folded);
        }
        sq.resize((w + 63) / 64, 0);
        acc = std::move(sq);
    }
    return acc;
}

bool rabin_irreducible(unsigned w, const Poly& tail) {
    Poly modulus = tail;
    modulus.resize(w / 64 + 1, 0);
    modulus[w / 64] |= Word{1} << (w % 64);

    // Distinct prime divisors of w.
    std::vector<unsigned> primes;
    unsigned rem = w;
    for (unsigned p = 2; p * p <= rem; ++p) {
        if (rem % p == 0) {
            primes.push_back(p);
            while (rem % p == 0) rem /= p;
        }
    }
    if (rem > 1) primes.push_back(rem);

    for (unsigned p : primes) {
        Poly h = iterate_frobenius(make_x(), w / p, w, tail);
        // gcd(h - x, f) must be trivial.
        Poly diff = h;
        if (diff.empty()) diff.resize(1, 0);
        diff[0] ^= 2;  // xor with x
        Poly g = poly_gcd(modulus, diff);
        if (poly_degree(g) != 0) return false;
    }
    Poly h = iterate_frobenius(make_x(), w, w, tail);
    trim(h);
    return h == make_x();
}

std::mutex g_field_mutex;
std::map<unsigned, Poly> g_field_tails;

Poly find_irreducible_tail(unsigned w) {
    {
        std::lock_guard lock(g_field_mutex);
        auto it = g_field_tails.find(w);
        if (it != g_field_tails.end()) return it->second;
    }
    Poly tail;
    if (w == 1) {
        tail = Poly{1};  // x + 1
    } else {
        for (std::uint64_t g = 1;; g += 2) {
            Poly cand{g};
            if (rabin_irreducible(w, cand)) {
                tail = std::move(cand);
                break;
            }
            if (g > (Word{1} << 32))
                throw std::runtime_error("irreducible search overran");
        }
    }
    std::lock_guard lock(g_field_mutex);
    g_field_tails.emplace(w, tail);
    return tail;
}

}  // namespace

BinaryField::BinaryField(unsigned bits) : bits_(bits), words_((bits + 63) / 64) {
    if (bits < 1 || bits > 4096)
        throw std::invalid_argument("binary field degree must lie in [1, 4096]");
    tail_ = find_irreducible_tail(bits);
}

Poly BinaryField::reduce(Poly p) const {
    for (;;) {
        trim(p);
        if (poly_degree(p) < static_cast<int>(bits_)) break;
        Poly high = shift_down(p, bits_);
        Poly low = mask_low(p, bits_);
        Poly folded = multiply(high, tail_);
        xor_into(folded, low);
        p = std::move(folded);
    }
    p.resize(words_, 0);
    return p;
}

Poly BinaryField::mul(const Poly& a, const Poly& b) const {
    return reduce(multiply(a, b));
}

}  // namespace qrng::gf2
