#pragma once

#include <cstdint>
#include <string>

#include "qrng/bitstring.hpp"
#include "qrng/extractors.hpp"
#include "qrng/source_sim.hpp"

namespace qrng {

/// Raw sample file: 16-byte header (magic "QRNGRAW1", bits as one byte,
/// 3 reserved bytes, range_a as little-endian IEEE-754 single), then one
/// byte per sample for bits <= 8, two little-endian bytes otherwise.
void write_raw_file(const std::string& path, const RawSampleStream& stream);
RawSampleStream read_raw_file(const std::string& path);
bool is_raw_file(const std::string& path);

struct SeedFile {
    ExtractorAlgo algo = ExtractorAlgo::toeplitz;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t d = 0;  // seed length in bits
    BitString seed;
};

/// Seed file: magic "QRNGSEED", algorithm tag byte (1 toeplitz,
/// 2 trevisan), n, m, d as 8-byte little-endian unsigned, then the seed
/// bits packed MSB-first.
void write_seed_file(const std::string& path, const SeedFile& seed);
SeedFile read_seed_file(const std::string& path);

/// Extracted output: packed bits, MSB-first, no header. The bit count is
/// recorded in the sidecar metadata; reading without it assumes a whole
/// number of bytes.
void write_bits_file(const std::string& path, const BitString& bits);
BitString read_bits_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace qrng
