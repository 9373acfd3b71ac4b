#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qrng/gf2.hpp"

using namespace qrng;

TEST_CASE("MSB-first byte packing") {
    const auto bits = BitString::from_string("10110000");
    CHECK(bits.to_bytes() == std::vector<std::uint8_t>{0xB0});

    const auto cut = BitString::from_bytes({0xB0, 0xFF}, 11);
    CHECK(cut.to_string() == "10110000111");

    // Cross-byte boundary: bit 8 is the MSB of byte 1.
    BitString b(9);
    b.set(8, true);
    CHECK(b.to_bytes() == std::vector<std::uint8_t>{0x00, 0x80});
}

TEST_CASE("slice, append and xor agree with the string model") {
    oracles::TestRng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t len = 1 + rng.below(300);
        const BitString a = rng.bits(len);
        const BitString b = rng.bits(len);
        const std::string sa = a.to_string();
        const std::string sb = b.to_string();

        const std::size_t pos = rng.below(len);
        const std::size_t count = rng.below(len - pos + 1);
        CHECK(a.slice(pos, count).to_string() == sa.substr(pos, count));

        BitString cat = a;
        cat.append(b);
        CHECK(cat.to_string() == sa + sb);

        std::string sx(len, '0');
        for (std::size_t i = 0; i < len; ++i)
            sx[i] = (sa[i] != sb[i]) ? '1' : '0';
        CHECK((a ^ b).to_string() == sx);
    }
}

TEST_CASE("count_ones and bounds") {
    const auto bits = BitString::from_string("1011001");
    CHECK(bits.count_ones() == 4);
    CHECK_THROWS_AS(bits.slice(4, 5), LengthMismatch);
    CHECK_THROWS_AS(bits ^ BitString(6), LengthMismatch);
}

TEST_CASE("poly round trip preserves coefficients") {
    oracles::TestRng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t len = 1 + rng.below(257);
        const BitString bits = rng.bits(len);
        const gf2::Poly p = gf2::poly_from_bits(bits);
        for (std::size_t i = 0; i < len; ++i)
            CHECK(((p[i / 64] >> (i % 64)) & 1) == (bits.get(i) ? 1u : 0u));
        CHECK(gf2::bits_from_poly(p, 0, len) == bits);
    }
}

TEST_CASE("carry-less multiply matches schoolbook convolution") {
    oracles::TestRng rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t la = 1 + rng.below(200);
        const std::size_t lb = 1 + rng.below(200);
        const BitString a = rng.bits(la);
        const BitString b = rng.bits(lb);
        const gf2::Poly prod = gf2::multiply(gf2::poly_from_bits(a), gf2::poly_from_bits(b));
        // Schoolbook: coefficient k = parity of #{(u,v): u+v=k, a_u=b_v=1}.
        for (std::size_t k = 0; k < la + lb - 1; ++k) {
            int acc = 0;
            for (std::size_t u = 0; u < la; ++u) {
                if (u > k) break;
                const std::size_t v = k - u;
                if (v < lb && a.get(u) && b.get(v)) acc ^= 1;
            }
            CHECK(((prod[k / 64] >> (k % 64)) & 1) == static_cast<unsigned>(acc));
        }
    }
}

TEST_CASE("binary field multiplication satisfies field axioms") {
    for (unsigned w : {1u, 2u, 3u, 8u, 13u, 64u, 67u, 238u}) {
        const gf2::BinaryField field(w);
        CHECK(field.bits() == w);
        CHECK(gf2::poly_degree(field.modulus_tail()) < static_cast<int>(w));

        oracles::TestRng rng(1000 + w);
        auto random_elem = [&] {
            gf2::Poly e(field.words(), 0);
            for (auto& word : e) word = rng.next();
            if (w % 64 != 0)
                e.back() &= (std::uint64_t{1} << (w % 64)) - 1;
            return e;
        };
        gf2::Poly one(field.words(), 0);
        one[0] = 1;

        for (int rep = 0; rep < 20; ++rep) {
            const auto a = random_elem();
            const auto b = random_elem();
            const auto c = random_elem();
            CHECK(field.mul(a, b) == field.mul(b, a));
            CHECK(field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c)));
            CHECK(field.mul(a, one) == a);
            // Distributivity over xor.
            gf2::Poly bc(field.words(), 0);
            for (std::size_t i = 0; i < bc.size(); ++i) bc[i] = b[i] ^ c[i];
            gf2::Poly sum(field.words(), 0);
            const auto ab = field.mul(a, b);
            const auto ac = field.mul(a, c);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = ab[i] ^ ac[i];
            CHECK(field.mul(a, bc) == sum);
        }
    }
}

TEST_CASE("GF(8) multiplication table from the chosen modulus") {
    // Degree-3 search starts at x^3 + 1 (reducible) and lands on x^3 + x + 1.
    const gf2::BinaryField field(3);
    CHECK(field.modulus_tail() == gf2::Poly{3});
    auto mul = [&](std::uint64_t a, std::uint64_t b) {
        return field.mul(gf2::Poly{a}, gf2::Poly{b})[0];
    };
    CHECK(mul(0b010, 0b100) == 0b011);  // x·x² = x³ = x+1
    CHECK(mul(0b100, 0b100) == 0b110);  // x⁴ = x²+x
    CHECK(mul(0b111, 0b111) == 0b011);  // (x²+x+1)² = x⁴+x²+1 = x+1
}

TEST_CASE("nonzero elements have no zero divisors in small fields") {
    const gf2::BinaryField field(4);
    for (std::uint64_t a = 1; a < 16; ++a)
        for (std::uint64_t b = 1; b < 16; ++b)
            CHECK(field.mul(gf2::Poly{a}, gf2::Poly{b})[0] != 0);
}
