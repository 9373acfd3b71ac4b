#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "qrng/extractors.hpp"
#include "qrng/io.hpp"
#include "qrng/pipeline.hpp"

#include <nlohmann/json.hpp>

using namespace qrng;

TEST_CASE("output sizing at the production operating point") {
    const auto p = output_length(4096, 6.7 / 8.0, 0x1p-100);
    CHECK(p.k == 3430);
    CHECK(p.m == 3230);
    CHECK(p.d == 7325);
    CHECK(p.n == 4096);
}

TEST_CASE("full-entropy passthrough sizing with epsilon = 1") {
    const auto p = output_length(8, 1.0, 1.0);
    CHECK(p.k == 8);
    CHECK(p.m == 8);
    CHECK(p.d == 15);
}

TEST_CASE("entropy deficit is rejected") {
    CHECK_THROWS_AS(output_length(4096, 0.01, 0x1p-100), EntropyDeficit);
    CHECK_THROWS(output_length(4096, 0.0, 0.5));
    CHECK_THROWS(output_length(4096, 1.5, 0.5));
}

TEST_CASE("toeplitz trivial cases") {
    ExtractorParams p;
    p.n = 6;
    p.m = 3;
    p.d = 8;

    SUBCASE("all-zero seed maps everything to zero") {
        const ToeplitzSeed seed{BitString(8)};
        const auto out = toeplitz_extract(BitString::from_string("110101"), seed, p);
        CHECK(out.to_string() == "000");
    }

    SUBCASE("1x1 extractor is an AND gate") {
        ExtractorParams tiny;
        tiny.n = 1;
        tiny.m = 1;
        tiny.d = 1;
        for (int seed_bit = 0; seed_bit < 2; ++seed_bit) {
            for (int in_bit = 0; in_bit < 2; ++in_bit) {
                const ToeplitzSeed seed{BitString::from_string(seed_bit ? "1" : "0")};
                const auto out =
                    toeplitz_extract(BitString::from_string(in_bit ? "1" : "0"), seed, tiny);
                CHECK(out.get(0) == (seed_bit && in_bit));
            }
        }
    }
}

TEST_CASE("explicit 2x4 instance matches the fixed convention") {
    // seed bits s0..s4 = 1,0,1,1,0; rows are [s3 s2 s1 s0] and
    // [s4 s3 s2 s1]; input 1101.
    ExtractorParams p;
    p.n = 4;
    p.m = 2;
    p.d = 5;
    const auto input = BitString::from_string("1101");
    const auto seed = BitString::from_string("10110");
    const auto out = toeplitz_extract(input, ToeplitzSeed{seed}, p);
    CHECK(out.to_string() == "11");
    CHECK(out == oracles::toeplitz_naive(input, seed, 4, 2));
}

TEST_CASE("fast path equals the dense naive oracle on random instances") {
    oracles::TestRng rng(41);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t n = 1 + rng.below(256);
        const std::size_t m = 1 + rng.below(n);
        ExtractorParams p;
        p.n = n;
        p.m = m;
        p.d = n + m - 1;
        const BitString input = rng.bits(n);
        const BitString seed = rng.bits(n + m - 1);
        CHECK(toeplitz_extract(input, ToeplitzSeed{seed}, p) ==
              oracles::toeplitz_naive(input, seed, n, m));
    }
}

TEST_CASE("toeplitz extraction is linear over GF(2)") {
    oracles::TestRng rng(43);
    ExtractorParams p;
    p.n = 64;
    p.m = 32;
    p.d = 95;
    for (int rep = 0; rep < 1000; ++rep) {
        const BitString x = rng.bits(64);
        const BitString y = rng.bits(64);
        const ToeplitzSeed seed{rng.bits(95)};
        const auto lhs = toeplitz_extract(x ^ y, seed, p);
        const auto rhs = toeplitz_extract(x, seed, p) ^ toeplitz_extract(y, seed, p);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("toeplitz length checks") {
    ExtractorParams p;
    p.n = 8;
    p.m = 4;
    p.d = 11;
    CHECK_THROWS_AS(toeplitz_extract(BitString(7), ToeplitzSeed{BitString(11)}, p),
                    LengthMismatch);
    CHECK_THROWS_AS(toeplitz_extract(BitString(8), ToeplitzSeed{BitString(10)}, p),
                    LengthMismatch);
}

TEST_CASE("leftover-hash distance at toy scale, exhaustive over all seeds") {
    // n=8, m=2, flat source on a fixed 64-element subset (k = 6 bits);
    // expected distance bound 2^{-(k-m)/2}/2 = 1/8.
    const std::size_t n = 8, m = 2, d = 9;
    ExtractorParams p;
    p.n = n;
    p.m = m;
    p.d = d;

    oracles::TestRng rng(47);
    std::vector<int> support;
    {
        std::vector<int> all(256);
        for (int i = 0; i < 256; ++i) all[i] = i;
        for (int i = 0; i < 64; ++i) {
            const std::size_t j = i + rng.below(256 - i);
            std::swap(all[i], all[j]);
            support.push_back(all[i]);
        }
    }

    double total_distance = 0.0;
    double averaged[4] = {0, 0, 0, 0};
    for (std::uint32_t seed_val = 0; seed_val < (1u << d); ++seed_val) {
        BitString seed(d);
        for (std::size_t b = 0; b < d; ++b)
            if ((seed_val >> b) & 1) seed.set(b, true);
        int counts[4] = {0, 0, 0, 0};
        for (int value : support) {
            BitString input(n);
            for (std::size_t b = 0; b < n; ++b)
                if ((value >> (n - 1 - b)) & 1) input.set(b, true);
            const auto out = toeplitz_extract(input, ToeplitzSeed{seed}, p);
            ++counts[(out.get(0) ? 2 : 0) | (out.get(1) ? 1 : 0)];
        }
        double dist = 0.0;
        for (int y = 0; y < 4; ++y) {
            const double prob = counts[y] / 64.0;
            dist += std::fabs(prob - 0.25);
            averaged[y] += prob / (1u << d);
        }
        total_distance += 0.5 * dist;
    }
    const double mean_distance = total_distance / (1u << d);
    CHECK(mean_distance <= 0.125);

    double avg_dist = 0.0;
    for (int y = 0; y < 4; ++y) avg_dist += std::fabs(averaged[y] - 0.25);
    CHECK(0.5 * avg_dist <= 0.125);
}

TEST_CASE("stream extraction: exact single block") {
    // 512 8-bit samples = 4096 bits = one block.
    RawSampleStream raw;
    raw.adc = AdcConfig{8, 15.0};
    oracles::TestRng rng(53);
    for (int i = 0; i < 512; ++i)
        raw.samples.push_back(static_cast<std::uint16_t>(rng.below(256)));

    const auto params = output_length(4096, 6.7 / 8.0, 0x1p-100);
    const BitString seed = demo_seed_bits(7, params.d);
    const auto result = stream_extract(raw, params, seed, ExtractorAlgo::toeplitz);
    CHECK(result.blocks == 1);
    CHECK(result.discarded_bits == 0);
    CHECK(result.bits.size() == params.m);
    CHECK(result.seed_fingerprint == fingerprint_hex(seed));
}

TEST_CASE("stream extraction: partition arithmetic and block consistency") {
    // 3-bit samples, n = 9: 7 samples = 21 bits = 2 blocks + 3 discarded.
    RawSampleStream raw;
    raw.adc = AdcConfig{3, 15.0};
    raw.samples = {5, 1, 7, 2, 0, 6, 3};

    ExtractorParams p;
    p.n = 9;
    p.m = 4;
    p.k = 6;
    p.d = 12;
    p.epsilon = 0.25;
    const BitString seed = demo_seed_bits(9, 12);
    const auto result = stream_extract(raw, p, seed, ExtractorAlgo::toeplitz);
    CHECK(result.blocks == 2);
    CHECK(result.discarded_bits == 3);
    CHECK(result.bits.size() == 8);
    CHECK(result.epsilon_per_block == doctest::Approx(0.25));
    CHECK(result.epsilon_total == doctest::Approx(0.5));

    // MSB-first unpacking: codes 101,001,111,010,000,110,011.
    const std::string stream_bits = "101001111010000110011";
    const auto block0 = BitString::from_string(stream_bits.substr(0, 9));
    const auto block1 = BitString::from_string(stream_bits.substr(9, 9));
    const auto expect0 = toeplitz_extract(block0, ToeplitzSeed{seed}, p);
    const auto expect1 = toeplitz_extract(block1, ToeplitzSeed{seed}, p);
    CHECK(result.bits.slice(0, 4) == expect0);
    CHECK(result.bits.slice(4, 4) == expect1);
}

TEST_CASE("stream extraction input shorter than one block") {
    RawSampleStream raw;
    raw.adc = AdcConfig{8, 15.0};
    raw.samples = {1, 2, 3};
    ExtractorParams p;
    p.n = 4096;
    p.m = 16;
    p.d = 4111;
    CHECK_THROWS_AS(stream_extract(raw, p, BitString(4111), ExtractorAlgo::toeplitz),
                    InsufficientData);
}

TEST_CASE("metadata sidecar records the security ledger") {
    RawSampleStream raw;
    raw.adc = AdcConfig{8, 15.0};
    oracles::TestRng rng(59);
    for (int i = 0; i < 1024; ++i)
        raw.samples.push_back(static_cast<std::uint16_t>(rng.below(256)));
    const auto params = output_length(4096, 0.8, 0x1p-64);
    const BitString seed = demo_seed_bits(11, params.d);
    const auto result = stream_extract(raw, params, seed, ExtractorAlgo::toeplitz);
    const auto meta = nlohmann::json::parse(extract_metadata_json(result, params));
    CHECK(meta.at("blocks").get<std::uint64_t>() == 2);
    CHECK(meta.at("seed_fingerprint").get<std::string>() == fingerprint_hex(seed));
    CHECK(meta.at("epsilon_total_seed_reuse").get<double>() ==
          doctest::Approx(2.0 * 0x1p-64));
    CHECK(meta.at("m").get<std::uint64_t>() == params.m);
}

TEST_CASE("extraction is deterministic") {
    oracles::TestRng rng(61);
    RawSampleStream raw;
    raw.adc = AdcConfig{8, 15.0};
    for (int i = 0; i < 2048; ++i)
        raw.samples.push_back(static_cast<std::uint16_t>(rng.below(256)));
    const auto params = output_length(4096, 0.8, 0x1p-40);
    const BitString seed = demo_seed_bits(123, params.d);
    const auto a = stream_extract(raw, params, seed, ExtractorAlgo::toeplitz);
    const auto b = stream_extract(raw, params, seed, ExtractorAlgo::toeplitz);
    CHECK(a.bits == b.bits);
}
