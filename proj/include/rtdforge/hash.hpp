#pragma once

// CRC-64/XZ (reflected, poly 0x42F0E1EBA9EA3693, init/xorout all-ones).
// Used both as the payload checksum of binary files and, over canonical
// descriptor strings, as the config/provider binding hash.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace rtdforge {

namespace detail {

constexpr std::array<uint64_t, 256> make_crc64_table() {
  // reflected form of 0x42F0E1EBA9EA3693
  constexpr uint64_t poly = 0xC96C5795D7870F42ULL;
  std::array<uint64_t, 256> table{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint64_t crc = i;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 1) ? (crc >> 1) ^ poly : crc >> 1;
    }
    table[i] = crc;
  }
  return table;
}

inline constexpr std::array<uint64_t, 256> crc64_table = make_crc64_table();

}  // namespace detail

class Crc64 {
 public:
  void update(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      state_ = detail::crc64_table[(state_ ^ p[i]) & 0xFF] ^ (state_ >> 8);
    }
  }

  uint64_t value() const { return state_ ^ 0xFFFFFFFFFFFFFFFFULL; }

 private:
  uint64_t state_ = 0xFFFFFFFFFFFFFFFFULL;
};

inline uint64_t crc64(const void* data, size_t len) {
  Crc64 c;
  c.update(data, len);
  return c.value();
}

inline uint64_t crc64(std::string_view s) { return crc64(s.data(), s.size()); }

}  // namespace rtdforge
