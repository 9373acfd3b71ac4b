#pragma once

#include <cstdint>
#include <string>

#include "qrng/bitstring.hpp"
#include "qrng/errors.hpp"
#include "qrng/source_sim.hpp"

namespace qrng {

/// Extractor sizing: n input bits of min-entropy k, m output bits at
/// security epsilon; d is the Toeplitz seed length n+m-1.
struct ExtractorParams {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t m = 0;
    std::uint64_t d = 0;
    double epsilon = 0.0;
};

/// Leftover-hash sizing: k = floor(n·h_min_rate),
/// m = k - ceil(2·log2(1/epsilon)). Values within 1e-9 of an integer are
/// snapped before flooring/ceiling so exact binary powers stay exact.
/// epsilon = 1 is allowed and carries no penalty. Throws EntropyDeficit
/// when m would be non-positive.
ExtractorParams output_length(std::uint64_t n, double h_min_rate, double epsilon);

struct ToeplitzSeed {
    BitString seed;  // length n + m - 1
};

/// Multiply the input by the m×n Toeplitz matrix T[i][j] = seed[i+n-1-j]
/// over GF(2): seed bits 0..n-1 form the first row (reversed) and bits
/// n-1..n+m-2 the first column. Implemented as a carry-less polynomial
/// product; matches the dense matrix definition bit for bit.
BitString toeplitz_extract(const BitString& input, const ToeplitzSeed& seed,
                           const ExtractorParams& params);

enum class ExtractorAlgo { toeplitz, trevisan };

const char* to_string(ExtractorAlgo algo);
ExtractorAlgo algo_from_string(const std::string& name);

struct StreamExtractResult {
    BitString bits;
    std::uint64_t blocks = 0;
    std::uint64_t discarded_bits = 0;
    std::string seed_fingerprint;
    std::string algorithm;
    /// Security ledger: one seed reused across all blocks, so the
    /// composed distance grows linearly in the block count.
    double epsilon_per_block = 0.0;
    double epsilon_total = 0.0;
};

/// Split the raw stream into consecutive n-bit blocks (adc.bits bits per
/// sample, most significant first), extract every block with the same
/// seed, and concatenate. The trailing partial block is discarded and
/// reported.
StreamExtractResult stream_extract(const RawSampleStream& raw, const ExtractorParams& params,
                                   const BitString& seed, ExtractorAlgo algo);

/// Sidecar metadata for an extracted bit file.
std::string extract_metadata_json(const StreamExtractResult& result, const ExtractorParams& params);

}  // namespace qrng
