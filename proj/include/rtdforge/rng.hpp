#pragma once

// Counter-based keyed RNG.
//
// Every random decision in the corruption pipeline is keyed by
// (global_seed, epoch, example_index, position, stream, counter) and nothing
// else, so examples can be generated in any order, on any thread, on any
// machine, and still come out bit-identical. The mixing uses the split-mix
// construction: fields are folded one at a time with
//
//   h <- mix64(h + 0x9E3779B97F4A7C15 + field)
//
// where mix64 is the splitmix64 finalizer
//
//   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//   z ^= z >> 27; z *= 0x94D049BB133111EB;
//   z ^= z >> 31;
//
// Draw t of a keyed stream is mix64-folded once more with t, giving an
// arbitrarily long sequence per key without shared state.

#include <cstdint>

namespace rtdforge {

// Distinct decision streams under one (seed, epoch, example, position) key.
enum class RngStream : uint64_t {
  MaskSelect = 1,   // which positions get masked
  TokenDrop = 2,    // which aux-input tokens become UNK
  Replacement = 3,  // the categorical draw for the replacement token
};

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr uint64_t fold(uint64_t h, uint64_t field) {
  return mix64(h + kGolden + field);
}

struct RngKey {
  uint64_t global_seed = 0;
  uint32_t epoch = 0;
  uint64_t example_index = 0;
  uint32_t position = 0;

  constexpr uint64_t state(RngStream stream) const {
    uint64_t h = fold(global_seed, epoch);
    h = fold(h, example_index);
    h = fold(h, position);
    h = fold(h, static_cast<uint64_t>(stream));
    return h;
  }

  constexpr RngKey at_position(uint32_t pos) const {
    return RngKey{global_seed, epoch, example_index, pos};
  }
};

// Stateless sequence of 64-bit draws for one (key, stream) pair.
class KeyedRng {
 public:
  KeyedRng(const RngKey& key, RngStream stream) : base_(key.state(stream)) {}

  uint64_t next() { return fold(base_, counter_++); }

  // Uniform value in [0, 1) with 53 significant bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) via the multiply-shift map. The tiny
  // modulo bias (< 2^-32 for bound < 2^32) is irrelevant here; what matters
  // is that the map is a pure function of the draw.
  uint32_t next_below(uint32_t bound) {
    return static_cast<uint32_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  uint64_t base_;
  uint64_t counter_ = 0;
};

}  // namespace rtdforge
