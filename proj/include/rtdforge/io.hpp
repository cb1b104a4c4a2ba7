#pragma once

// Little-endian byte buffer readers/writers plus whole-file helpers.
// All binary formats in this library are little-endian regardless of host.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rtdforge/error.hpp"

namespace rtdforge {

inline std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size < 0) throw io_error("cannot stat file: " + path);
  in.seekg(0, std::ios::beg);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw io_error("short read: " + path);
  }
  return bytes;
}

// Write via a sibling temp file and rename, so a failed run leaves no
// half-written artifact behind.
inline void write_file_atomic(const std::string& path,
                              const std::vector<uint8_t>& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot create file: " + tmp);
    if (!bytes.empty()) {
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw io_error("short write: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw io_error("cannot rename " + tmp + " -> " + path + ": " + ec.message());
  }
}

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }

  void u16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v));
    buf_.push_back(static_cast<uint8_t>(v >> 8));
  }

  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }

  void bytes(const void* data, size_t len) {
    const auto* p = static_cast<const uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + len);
  }

  void magic(const char tag[5]) { bytes(tag, 4); }

  size_t size() const { return buf_.size(); }
  const std::vector<uint8_t>& buffer() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  // Borrowing view; the caller keeps `data` alive for the reader's lifetime.
  ByteReader(const uint8_t* data, size_t size, std::string origin = "<buffer>")
      : data_(data), size_(size), origin_(std::move(origin)) {}

  // Owning: takes the buffer, so temporaries (e.g. read_file results) are safe.
  explicit ByteReader(std::vector<uint8_t> bytes, std::string origin = "<buffer>")
      : owned_(std::move(bytes)),
        data_(owned_.data()),
        size_(owned_.size()),
        origin_(std::move(origin)) {}

  // Moving keeps data_ valid (the heap buffer travels with owned_); copying
  // would not, so it is disabled.
  ByteReader(const ByteReader&) = delete;
  ByteReader& operator=(const ByteReader&) = delete;
  ByteReader(ByteReader&&) = default;
  ByteReader& operator=(ByteReader&&) = default;

  size_t offset() const { return pos_; }
  size_t remaining() const { return size_ - pos_; }
  bool at_end() const { return pos_ == size_; }

  uint8_t u8() { return raw(1)[0]; }

  uint16_t u16() {
    const uint8_t* p = raw(2);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }

  uint32_t u32() {
    const uint8_t* p = raw(4);
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
  }

  uint64_t u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | (hi << 32);
  }

  float f32() { return std::bit_cast<float>(u32()); }

  void expect_magic(const char tag[5]) {
    const size_t at = pos_;
    const uint8_t* p = raw(4);
    if (std::memcmp(p, tag, 4) != 0) {
      throw io_error(origin_ + ": bad magic at offset " + std::to_string(at) +
                     " (expected \"" + std::string(tag, 4) + "\")");
    }
  }

  const uint8_t* raw(size_t len) {
    if (len > size_ - pos_) {
      throw io_error(origin_ + ": truncated at offset " + std::to_string(pos_) +
                     " (need " + std::to_string(len) + " bytes, have " +
                     std::to_string(size_ - pos_) + ")");
    }
    const uint8_t* p = data_ + pos_;
    pos_ += len;
    return p;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::vector<uint8_t> owned_;  // empty when borrowing
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  std::string origin_;
};

}  // namespace rtdforge
