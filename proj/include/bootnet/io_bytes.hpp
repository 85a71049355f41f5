#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bootnet {

/// Little-endian append helpers for the binary file formats.
void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_f64(std::vector<std::uint8_t>& out, double v);
void put_bytes(std::vector<std::uint8_t>& out, const void* data, std::size_t n);

/// Cursor over a byte buffer; every read throws TruncatedError when the
/// buffer runs out.
class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& buf, std::string source)
        : buf_(buf), source_(std::move(source)) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    std::string bytes(std::size_t n);
    std::size_t remaining() const { return buf_.size() - pos_; }
    bool at_end() const { return pos_ == buf_.size(); }
    const std::string& source() const { return source_; }

private:
    void need(std::size_t n);
    const std::vector<std::uint8_t>& buf_;
    std::string source_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace bootnet
