#pragma once

// Little-endian encode/decode helpers shared by the binary file formats.
// Byte-level composition keeps the formats independent of host endianness.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "wdisc/error.hpp"

namespace wdisc::detail {

inline void encode_u32(std::uint32_t v, unsigned char* p) {
    p[0] = static_cast<unsigned char>(v);
    p[1] = static_cast<unsigned char>(v >> 8);
    p[2] = static_cast<unsigned char>(v >> 16);
    p[3] = static_cast<unsigned char>(v >> 24);
}

inline void encode_u64(std::uint64_t v, unsigned char* p) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline std::uint32_t decode_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint64_t decode_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

inline double decode_f64(const unsigned char* p) {
    return std::bit_cast<double>(decode_u64(p));
}

inline float decode_f32(const unsigned char* p) {
    return std::bit_cast<float>(decode_u32(p));
}

inline std::int32_t decode_i32(const unsigned char* p) {
    return std::bit_cast<std::int32_t>(decode_u32(p));
}

/// Append-only little-endian buffer for the small binary formats (model
/// files); bulk feature payloads stream instead.
class ByteWriter {
public:
    void magic(const char m[4]) {
        buf_.insert(buf_.end(), reinterpret_cast<const unsigned char*>(m),
                    reinterpret_cast<const unsigned char*>(m) + 4);
    }
    void u32(std::uint32_t v) {
        unsigned char p[4];
        encode_u32(v, p);
        buf_.insert(buf_.end(), p, p + 4);
    }
    void u64(std::uint64_t v) {
        unsigned char p[8];
        encode_u64(v, p);
        buf_.insert(buf_.end(), p, p + 8);
    }
    void i32(std::int32_t v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    const std::vector<unsigned char>& bytes() const noexcept { return buf_; }

private:
    std::vector<unsigned char> buf_;
};

/// Checked sequential reader over a fully loaded small file.
class ByteReader {
public:
    ByteReader(const std::vector<unsigned char>& buf, std::string source)
        : buf_(buf), source_(std::move(source)) {}

    void expect_magic(const char m[4]) {
        need(4);
        if (std::memcmp(buf_.data() + pos_, m, 4) != 0) {
            const std::string got(reinterpret_cast<const char*>(buf_.data() + pos_), 4);
            throw Error(ErrorKind::BadMagic, source_ + ": expected magic '" +
                                                 std::string(m, 4) + "', found '" + got +
                                                 "'");
        }
        pos_ += 4;
    }
    std::uint32_t u32() {
        need(4);
        const std::uint32_t v = decode_u32(buf_.data() + pos_);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        const std::uint64_t v = decode_u64(buf_.data() + pos_);
        pos_ += 8;
        return v;
    }
    std::int32_t i32() { return std::bit_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }

    bool exhausted() const noexcept { return pos_ == buf_.size(); }
    const std::string& source() const noexcept { return source_; }

    void need(std::size_t n) const {
        if (buf_.size() - pos_ < n)
            throw Error(ErrorKind::TruncatedPayload,
                        source_ + ": file ends mid-record");
    }

private:
    const std::vector<unsigned char>& buf_;
    std::size_t pos_ = 0;
    std::string source_;
};

}  // namespace wdisc::detail
