#include "qrng/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

constexpr char kRawMagic[8] = {'Q', 'R', 'N', 'G', 'R', 'A', 'W', '1'};
constexpr char kSeedMagic[8] = {'Q', 'R', 'N', 'G', 'S', 'E', 'E', 'D'};

void put_u64_le(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    out.write(buf, 8);
}

std::uint64_t get_u64_le(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

void put_f32_le(std::ostream& out, float v) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>(bits >> (8 * i));
    out.write(buf, 4);
}

float get_f32_le(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t bits = 0;
    for (int i = 3; i >= 0; --i) bits = (bits << 8) | buf[i];
    return std::bit_cast<float>(bits);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open for reading: " + path);
    return in;
}

}  // namespace

void write_raw_file(const std::string& path, const RawSampleStream& stream) {
    stream.adc.validate();
    auto out = open_out(path);
    out.write(kRawMagic, 8);
    const char bits = static_cast<char>(stream.adc.bits);
    out.write(&bits, 1);
    const char reserved[3] = {0, 0, 0};
    out.write(reserved, 3);
    put_f32_le(out, static_cast<float>(stream.adc.range_a));
    if (stream.adc.bits <= 8) {
        std::vector<char> buf(stream.samples.size());
        for (std::size_t i = 0; i < stream.samples.size(); ++i)
            buf[i] = static_cast<char>(stream.samples[i]);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    } else {
        std::vector<char> buf(stream.samples.size() * 2);
        for (std::size_t i = 0; i < stream.samples.size(); ++i) {
            buf[2 * i] = static_cast<char>(stream.samples[i] & 0xFF);
            buf[2 * i + 1] = static_cast<char>(stream.samples[i] >> 8);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    if (!out)
        throw FormatError("write failed: " + path);
}

RawSampleStream read_raw_file(const std::string& path) {
    auto in = open_in(path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kRawMagic, 8) != 0)
        throw FormatError("not a raw sample file: " + path);
    char bits = 0;
    in.read(&bits, 1);
    char reserved[3];
    in.read(reserved, 3);
    const float range = get_f32_le(in);
    if (!in)
        throw FormatError("truncated raw header: " + path);
    RawSampleStream stream;
    stream.adc.bits = bits;
    stream.adc.range_a = range;
    stream.adc.validate();

    std::vector<char> body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const int max_code = stream.adc.code_count() - 1;
    if (stream.adc.bits <= 8) {
        stream.samples.resize(body.size());
        for (std::size_t i = 0; i < body.size(); ++i) {
            stream.samples[i] = static_cast<std::uint8_t>(body[i]);
            if (stream.samples[i] > max_code)
                throw FormatError("sample code exceeds ADC resolution");
        }
    } else {
        if (body.size() % 2 != 0)
            throw FormatError("odd body length for 2-byte samples");
        stream.samples.resize(body.size() / 2);
        for (std::size_t i = 0; i < stream.samples.size(); ++i) {
            stream.samples[i] = static_cast<std::uint16_t>(
                static_cast<std::uint8_t>(body[2 * i]) |
                (static_cast<std::uint16_t>(static_cast<std::uint8_t>(body[2 * i + 1])) << 8));
            if (stream.samples[i] > max_code)
                throw FormatError("sample code exceeds ADC resolution");
        }
    }
    return stream;
}

bool is_raw_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    return in && std::memcmp(magic, kRawMagic, 8) == 0;
}

void write_seed_file(const std::string& path, const SeedFile& seed) {
    if (seed.seed.size() != seed.d)
        throw LengthMismatch("seed bit count disagrees with header d");
    auto out = open_out(path);
    out.write(kSeedMagic, 8);
    const char tag = seed.algo == ExtractorAlgo::toeplitz ? 1 : 2;
    out.write(&tag, 1);
    put_u64_le(out, seed.n);
    put_u64_le(out, seed.m);
    put_u64_le(out, seed.d);
    const auto bytes = seed.seed.to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("write failed: " + path);
}

SeedFile read_seed_file(const std::string& path) {
    auto in = open_in(path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kSeedMagic, 8) != 0)
        throw FormatError("not a seed file: " + path);
    char tag = 0;
    in.read(&tag, 1);
    if (tag != 1 && tag != 2)
        throw FormatError("unknown seed algorithm tag");
    SeedFile seed;
    seed.algo = tag == 1 ? ExtractorAlgo::toeplitz : ExtractorAlgo::trevisan;
    seed.n = get_u64_le(in);
    seed.m = get_u64_le(in);
    seed.d = get_u64_le(in);
    if (!in)
        throw FormatError("truncated seed header: " + path);
    std::vector<char> body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (body.size() != (seed.d + 7) / 8)
        throw FormatError("seed body length disagrees with header d");
    std::vector<std::uint8_t> bytes(body.begin(), body.end());
    seed.seed = BitString::from_bytes(bytes, seed.d);
    return seed;
}

void write_bits_file(const std::string& path, const BitString& bits) {
    auto out = open_out(path);
    const auto bytes = bits.to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("write failed: " + path);
}

BitString read_bits_file(const std::string& path) {
    auto in = open_in(path);
    std::vector<char> body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::uint8_t> bytes(body.begin(), body.end());
    return BitString::from_bytes(bytes, bytes.size() * 8);
}

void write_text_file(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw FormatError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    auto in = open_in(path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace qrng
