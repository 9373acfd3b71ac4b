#include "qrng/bitstring.hpp"

#include <bit>

namespace qrng {

BitString BitString::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t length) {
    if (length > bytes.size() * 8)
        throw LengthMismatch("bit length exceeds byte buffer");
    BitString out(length);
    for (std::size_t i = 0; i < bytes.size() && i * 8 < length; ++i) {
        const std::size_t word = i / 8;
        const unsigned shift = 56 - 8 * (i % 8);
        out.words_[word] |= std::uint64_t{bytes[i]} << shift;
    }
    out.mask_tail();
    return out;
}

BitString BitString::from_string(const std::string& s) {
    BitString out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw FormatError("bit string may contain only '0' and '1'");
        if (s[i] == '1') out.set(i, true);
    }
    return out;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
    std::vector<std::uint8_t> bytes((length_ + 7) / 8, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const std::size_t word = i / 8;
        const unsigned shift = 56 - 8 * (i % 8);
        bytes[i] = static_cast<std::uint8_t>(words_[word] >> shift);
    }
    return bytes;
}

std::string BitString::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitString BitString::slice(std::size_t pos, std::size_t count) const {
    if (pos + count > length_)
        throw LengthMismatch("slice out of range");
    BitString out(count);
    for (std::size_t i = 0; i < count; ++i)
        if (get(pos + i)) out.set(i, true);
    return out;
}

void BitString::append(const BitString& other) {
    const std::size_t old = length_;
    length_ += other.length_;
    words_.resize((length_ + 63) / 64, 0);
    if (old % 64 == 0) {
        for (std::size_t w = 0; w < other.words_.size(); ++w)
            words_[old / 64 + w] = other.words_[w];
    } else {
        for (std::size_t i = 0; i < other.length_; ++i)
            if (other.get(i)) set(old + i, true);
    }
    mask_tail();
}

void BitString::push_back(bool v) {
    ++length_;
    words_.resize((length_ + 63) / 64, 0);
    set(length_ - 1, v);
}

std::size_t BitString::count_ones() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

BitString BitString::operator^(const BitString& rhs) const {
    if (length_ != rhs.length_)
        throw LengthMismatch("xor of unequal-length bit strings");
    BitString out(length_);
    for (std::size_t w = 0; w < words_.size(); ++w)
        out.words_[w] = words_[w] ^ rhs.words_[w];
    return out;
}

void BitString::mask_tail() {
    if (words_.empty()) return;
    const unsigned used = length_ % 64;
    if (used != 0)
        words_.back() &= ~std::uint64_t{0} << (64 - used);
}

std::string fingerprint_hex(const BitString& bits) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint8_t b : bits.to_bytes()) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace qrng
