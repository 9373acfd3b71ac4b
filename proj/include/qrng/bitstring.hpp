#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrng/errors.hpp"

namespace qrng {

/// Ordered sequence of bits. Packing convention is MSB-first within each
/// byte everywhere in the toolkit: bit 0 of the string is the most
/// significant bit of byte 0.
class BitString {
public:
    BitString() = default;

    explicit BitString(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

    /// Unpack from bytes, MSB-first. `length` may cut the last byte short.
    static BitString from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t length);

    /// Parse a string of '0'/'1' characters, bit 0 first.
    static BitString from_string(const std::string& s);

    std::size_t size() const { return length_; }
    bool empty() const { return length_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
    }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    /// 64-bit words holding the bits, MSB-first; trailing bits of the last
    /// word are zero (an invariant maintained by all mutators).
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    /// Pack to bytes, MSB-first; the last byte is zero-padded.
    std::vector<std::uint8_t> to_bytes() const;

    std::string to_string() const;

    /// Contiguous sub-range [pos, pos+count).
    BitString slice(std::size_t pos, std::size_t count) const;

    void append(const BitString& other);
    void push_back(bool v);

    std::size_t count_ones() const;

    BitString operator^(const BitString& rhs) const;

    bool operator==(const BitString& rhs) const { return length_ == rhs.length_ && words_ == rhs.words_; }

    /// Zero out any bits beyond `length_` in the last word.
    void mask_tail();

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

/// FNV-1a 64-bit fingerprint of the packed bytes, as fixed-width hex.
/// Identification only, not collision resistance.
std::string fingerprint_hex(const BitString& bits);

}  // namespace qrng
