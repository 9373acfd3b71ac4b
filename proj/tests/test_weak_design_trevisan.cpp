#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qrng/trevisan.hpp"
#include "qrng/weak_design.hpp"

using namespace qrng;

namespace {

std::size_t intersection_size(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

bool overlap_bound_holds(const WeakDesign& design) {
    const double rho = design.overlap_rho;
    const double m = static_cast<double>(design.sets.size());
    for (std::size_t i = 0; i < design.sets.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < i; ++j)
            sum += std::exp2(static_cast<double>(
                intersection_size(design.sets[i], design.sets[j])));
        if (m > 1 && sum > rho * (m - 1.0) + 1e-9) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("GF(4) multiplication from the x^2+x+1 modulus") {
    const GaloisField f(4);
    CHECK(f.characteristic() == 2);
    CHECK(f.extension_degree() == 2);
    CHECK(f.mul(2, 2) == 3);  // x·x = x+1
    CHECK(f.mul(2, 3) == 1);  // x·(x+1) = 1
    CHECK(f.mul(3, 3) == 2);  // (x+1)² = x
    CHECK(f.add(2, 3) == 1);
    CHECK(f.add(3, 3) == 0);
}

TEST_CASE("GF(9) field axioms by enumeration") {
    const GaloisField f(9);
    for (std::uint64_t a = 0; a < 9; ++a) {
        CHECK(f.mul(a, 1) == a);
        CHECK(f.add(a, 0) == a);
        for (std::uint64_t b = 0; b < 9; ++b) {
            CHECK(f.mul(a, b) == f.mul(b, a));
            if (a != 0 && b != 0) CHECK(f.mul(a, b) != 0);
            for (std::uint64_t c = 0; c < 9; ++c)
                CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
    }
}

TEST_CASE("non-prime-power orders are rejected") {
    for (std::uint64_t t : {6u, 10u, 12u, 15u, 100u})
        CHECK_THROWS_AS(GaloisField(t), InvalidFieldSize);
    CHECK_THROWS_AS(weak_design(4, 6), InvalidFieldSize);
}

TEST_CASE("single-set design is the zero polynomial graph") {
    for (std::uint64_t t : {2u, 3u, 5u, 8u}) {
        const auto design = weak_design(1, t);
        REQUIRE(design.sets.size() == 1);
        REQUIRE(design.sets[0].size() == t);
        for (std::uint64_t a = 0; a < t; ++a)
            CHECK(design.sets[0][a] == a * t);
    }
}

TEST_CASE("two constant polynomials over GF(2) are disjoint") {
    const auto design = weak_design(2, 2);
    CHECK(design.degree_bound == 1);
    CHECK(design.sets[0] == std::vector<std::uint32_t>{0, 2});
    CHECK(design.sets[1] == std::vector<std::uint32_t>{1, 3});
    CHECK(intersection_size(design.sets[0], design.sets[1]) == 0);
}

TEST_CASE("full quadratic family over GF(3): 9 sets, pairwise overlap <= 1") {
    const auto design = weak_design(9, 3);
    CHECK(design.degree_bound == 2);
    REQUIRE(design.sets.size() == 9);
    for (const auto& s : design.sets) {
        CHECK(s.size() == 3);
        CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == 3);
        for (auto v : s) CHECK(v < 9);
    }
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < i; ++j)
            CHECK(intersection_size(design.sets[i], design.sets[j]) <= 1);
}

TEST_CASE("overlap invariant across field sizes and set counts") {
    for (std::uint64_t t : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 13u, 16u, 25u}) {
        for (std::uint64_t m : {1u, 2u, 3u, 5u, 17u, 33u, 64u}) {
            const auto design = weak_design(m, t);
            REQUIRE(design.sets.size() == m);
            for (const auto& s : design.sets) {
                CHECK(s.size() == t);
                CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == t);
            }
            CHECK(overlap_bound_holds(design));
        }
    }
}

TEST_CASE("trevisan parameter derivation at the production point") {
    const auto p = trevisan_params(4096, 3230, 0x1p-100);
    CHECK(p.epsilon1 == doctest::Approx(0x1p-100 / 3230.0));
    CHECK(p.field_bits == 238);
    CHECK(p.rs_symbols == (4096 + 237) / 238);
    CHECK(p.t == 479);  // smallest prime power >= 2·238
    CHECK(p.seed_length == 479 * 479);
    CHECK(p.degree_bound == 2);
    // The basic-design entropy requirement exceeds this m at rho = 2e.
    CHECK(p.k_required > 3230.0);
}

TEST_CASE("trevisan extraction is deterministic and length-checked") {
    const auto p = trevisan_params(64, 4, 0.25);
    const auto design = trevisan_design(p);
    oracles::TestRng rng(67);
    const BitString input = rng.bits(64);
    const BitString seed = rng.bits(p.seed_length);
    const auto a = trevisan_extract(input, seed, p, design);
    const auto b = trevisan_extract(input, seed, p, design);
    CHECK(a == b);
    CHECK(a.size() == 4);
    CHECK_THROWS_AS(trevisan_extract(rng.bits(63), seed, p, design), LengthMismatch);
    CHECK_THROWS_AS(trevisan_extract(input, rng.bits(p.seed_length - 1), p, design),
                    LengthMismatch);
}

TEST_CASE("output bit i depends only on the seed restricted to set i") {
    // m=1 composition collapse: bit 0 of an m=2 run equals the m=1 run.
    auto p2 = trevisan_params(16, 2, 0.5);
    const auto design2 = trevisan_design(p2);
    auto p1 = p2;
    p1.m = 1;
    p1.epsilon1 = p1.epsilon;  // same one-bit extractor geometry
    const auto design1 = trevisan_design(p1);

    oracles::TestRng rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        const BitString input = rng.bits(16);
        const BitString seed = rng.bits(p2.seed_length);
        const auto two = trevisan_extract(input, seed, p2, design2);
        const auto one = trevisan_extract(input, seed, p1, design1);
        CHECK(two.get(0) == one.get(0));
    }
}

TEST_CASE("seed bits outside the design sets are inert") {
    const auto p = trevisan_params(16, 2, 0.5);
    const auto design = trevisan_design(p);
    std::set<std::uint32_t> used;
    for (std::uint64_t i = 0; i < p.m; ++i)
        used.insert(design.sets[i].begin(), design.sets[i].end());

    oracles::TestRng rng(73);
    const BitString input = rng.bits(16);
    BitString seed = rng.bits(p.seed_length);
    const auto base = trevisan_extract(input, seed, p, design);
    int flipped = 0;
    for (std::uint32_t pos = 0; pos < p.seed_length && flipped < 200; ++pos) {
        if (used.count(pos)) continue;
        seed.set(pos, !seed.get(pos));
        ++flipped;
    }
    REQUIRE(flipped > 0);
    CHECK(trevisan_extract(input, seed, p, design) == base);
}

TEST_CASE("tiny-instance output distance from uniform, exhaustive seeds") {
    // n=16, m=2 with a hand-sized one-bit extractor: w=2, t=4, universe 16.
    TrevisanParams p;
    p.n = 16;
    p.m = 2;
    p.epsilon = 1.0;
    p.epsilon1 = 0.5;
    p.field_bits = 2;
    p.rs_symbols = 8;
    p.t = 4;
    p.degree_bound = 1;
    p.seed_length = 16;
    const auto design = trevisan_design(p);

    // Flat source: uniform over a fixed 256-element subset of 2^16.
    oracles::TestRng rng(79);
    std::set<std::uint32_t> support;
    while (support.size() < 256)
        support.insert(static_cast<std::uint32_t>(rng.below(1u << 16)));

    // Output bits depend on seed positions in S_0 ∪ S_1 only, so 8 seed
    // bits (multiplicity 2^8 each) cover the full 2^16 seed space.
    std::vector<std::uint32_t> positions;
    for (std::uint64_t i = 0; i < p.m; ++i)
        positions.insert(positions.end(), design.sets[i].begin(), design.sets[i].end());
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    REQUIRE(positions.size() == 8);

    double mean_distance = 0.0;
    for (std::uint32_t pattern = 0; pattern < 256; ++pattern) {
        BitString seed(p.seed_length);
        for (std::size_t b = 0; b < positions.size(); ++b)
            if ((pattern >> b) & 1) seed.set(positions[b], true);
        int counts[4] = {0, 0, 0, 0};
        for (std::uint32_t value : support) {
            BitString input(16);
            for (int b = 0; b < 16; ++b)
                if ((value >> (15 - b)) & 1) input.set(b, true);
            const auto out = trevisan_extract(input, seed, p, design);
            ++counts[(out.get(0) ? 2 : 0) | (out.get(1) ? 1 : 0)];
        }
        double dist = 0.0;
        for (int y = 0; y < 4; ++y)
            dist += std::fabs(counts[y] / 256.0 - 0.25);
        mean_distance += 0.5 * dist / 256.0;
    }

    // The proven bound is vacuous at this scale; the construction still
    // has to land near uniform on a typical flat source.
    CHECK(mean_distance <= trevisan_proven_epsilon(p, 8.0));
    CHECK(mean_distance < 0.25);
}
