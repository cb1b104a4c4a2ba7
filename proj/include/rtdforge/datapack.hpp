#pragma once

// Bit-exact per-epoch dump of corrupted examples: the offline artifact that
// replaces running the auxiliary model during training. The header binds each
// file to the seed, epoch, and hashes of the generating configuration; a
// 64-bit checksum over the payload lets any corruption or drifted
// regeneration be detected by byte comparison.
//
// Layout (little-endian):
//   magic "RTDE" | version u16 | global_seed u64 | epoch u32 | total_epochs
//   u32 | vocab u32 | seq_len u32 | example_count u64 | config_hash u64 |
//   provider_hash u64 | payload | checksum u64
// Payload, per example in index order:
//   mask_count u32 | mask positions u32 x K | replaced bitmap, ceil(seq_len/8)
//   bytes LSB-first | corrupted ids u32 x seq_len
// Mask positions are stored explicitly: they are not recoverable from the
// bitmap, since a masked position whose sampled token equals the original has
// bit 0.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtdforge/error.hpp"
#include "rtdforge/hash.hpp"
#include "rtdforge/io.hpp"
#include "rtdforge/rtd.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

inline constexpr char kEpochMagic[4] = {'R', 'T', 'D', 'E'};
inline constexpr uint16_t kEpochVersion = 1;

struct EpochManifest {
  uint16_t version = kEpochVersion;
  uint64_t global_seed = 0;
  uint32_t epoch = 0;
  uint32_t total_epochs = 0;
  uint32_t vocab_size = 0;
  uint32_t seq_len = 0;
  uint64_t example_count = 0;
  uint64_t config_hash = 0;
  uint64_t provider_hash = 0;
  std::vector<uint64_t> shard_offsets = {0};  // payload byte offset per shard
  uint64_t checksum = 0;                      // crc64 over the payload
};

// One example as stored on disk. The original tokens are not serialized;
// training needs only the corrupted input and the targets.
struct PackedExample {
  std::vector<uint32_t> mask_positions;
  std::vector<uint8_t> replaced_bitmap;  // LSB-first, padded with zero bits
  TokenSeq corrupted;

  bool replaced_bit(uint32_t pos) const {
    return (replaced_bitmap[pos >> 3] >> (pos & 7)) & 1;
  }

  bool operator==(const PackedExample& o) const {
    return mask_positions == o.mask_positions && replaced_bitmap == o.replaced_bitmap &&
           corrupted == o.corrupted;
  }
};

inline PackedExample pack_example(const CorruptedExample& ex) {
  PackedExample p;
  p.mask_positions = ex.plan.positions;
  p.corrupted = ex.corrupted;
  p.replaced_bitmap.assign((ex.replaced.size() + 7) / 8, 0);
  for (uint32_t i = 0; i < ex.replaced.size(); ++i) {
    if (ex.replaced[i]) p.replaced_bitmap[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
  }
  return p;
}

namespace detail {

// The single serialization point for one example's payload bytes; the writer
// and the regeneration verifier both go through here, so their byte streams
// cannot drift apart.
inline void append_example_payload(ByteWriter& payload, const PackedExample& p, uint32_t seq_len,
                                   uint32_t vocab_size) {
  if (p.corrupted.size() != seq_len) {
    throw validation_error("example length " + std::to_string(p.corrupted.size()) +
                           " does not match epoch seq_len " + std::to_string(seq_len));
  }
  payload.u32(static_cast<uint32_t>(p.mask_positions.size()));
  uint32_t prev = 0;
  bool first = true;
  for (uint32_t pos : p.mask_positions) {
    if (pos >= seq_len || (!first && pos <= prev)) {
      throw validation_error("mask positions must be strictly increasing and in range");
    }
    payload.u32(pos);
    prev = pos;
    first = false;
  }
  payload.bytes(p.replaced_bitmap.data(), p.replaced_bitmap.size());
  for (uint32_t id : p.corrupted) {
    if (id >= vocab_size) {
      throw validation_error("corrupted token id " + std::to_string(id) +
                             " out of range for vocab " + std::to_string(vocab_size));
    }
    payload.u32(id);
  }
}

}  // namespace detail

// Streams examples into one epoch file. Examples must arrive in
// example-index order starting at 0; the file is written atomically at
// finish(), so a failed run leaves nothing behind.
class EpochWriter {
 public:
  // count, checksum, and shard_offsets of `header` are ignored and recomputed.
  EpochWriter(std::string path, const EpochManifest& header)
      : path_(std::move(path)), manifest_(header) {
    if (manifest_.seq_len == 0 || manifest_.vocab_size == 0) {
      throw validation_error("epoch header needs a positive seq_len and vocab size");
    }
    manifest_.version = kEpochVersion;
    manifest_.example_count = 0;
    manifest_.shard_offsets = {0};
  }

  void add(const CorruptedExample& ex) {
    if (finished_) throw validation_error("epoch writer already finished");
    if (ex.meta.epoch != manifest_.epoch) {
      throw validation_error("example belongs to epoch " + std::to_string(ex.meta.epoch) +
                             ", writer holds epoch " + std::to_string(manifest_.epoch));
    }
    if (ex.meta.example_index != manifest_.example_count) {
      throw validation_error("examples must arrive in index order: expected " +
                             std::to_string(manifest_.example_count) + ", got " +
                             std::to_string(ex.meta.example_index));
    }
    detail::append_example_payload(payload_, pack_example(ex), manifest_.seq_len,
                                   manifest_.vocab_size);
    ++manifest_.example_count;
  }

  // Writes the file and returns the completed manifest.
  EpochManifest finish() {
    if (finished_) throw validation_error("epoch writer already finished");
    finished_ = true;

    const std::vector<uint8_t> payload = payload_.take();
    manifest_.checksum = crc64(payload.data(), payload.size());

    ByteWriter w;
    w.magic(kEpochMagic);
    w.u16(manifest_.version);
    w.u64(manifest_.global_seed);
    w.u32(manifest_.epoch);
    w.u32(manifest_.total_epochs);
    w.u32(manifest_.vocab_size);
    w.u32(manifest_.seq_len);
    w.u64(manifest_.example_count);
    w.u64(manifest_.config_hash);
    w.u64(manifest_.provider_hash);
    w.bytes(payload.data(), payload.size());
    w.u64(manifest_.checksum);
    write_file_atomic(path_, w.take());
    return manifest_;
  }

 private:
  std::string path_;
  EpochManifest manifest_;
  ByteWriter payload_;
  bool finished_ = false;
};

inline EpochManifest write_epoch(const std::vector<CorruptedExample>& examples,
                                 const EpochManifest& header, const std::string& path) {
  EpochWriter w(path, header);
  for (const CorruptedExample& ex : examples) w.add(ex);
  return w.finish();
}

// Reads one epoch file. The whole payload is checksum-validated up front;
// no example is yielded from a corrupt file. Structural defects (bad magic,
// truncation, checksum mismatch, leftover bytes) raise io_error; payload
// content that violates the format's invariants raises validation_error.
class EpochReader {
 public:
  explicit EpochReader(const std::string& path,
                       std::optional<uint32_t> expected_vocab = std::nullopt)
      : origin_(path) {
    ByteReader r(read_file(path), path);
    r.expect_magic(kEpochMagic);
    manifest_.version = r.u16();
    if (manifest_.version != kEpochVersion) {
      throw io_error(path + ": unsupported epoch-file version " +
                     std::to_string(manifest_.version));
    }
    manifest_.global_seed = r.u64();
    manifest_.epoch = r.u32();
    manifest_.total_epochs = r.u32();
    manifest_.vocab_size = r.u32();
    manifest_.seq_len = r.u32();
    manifest_.example_count = r.u64();
    manifest_.config_hash = r.u64();
    manifest_.provider_hash = r.u64();
    if (expected_vocab && manifest_.vocab_size != *expected_vocab) {
      throw validation_error(path + ": epoch file was written for vocab " +
                             std::to_string(manifest_.vocab_size) +
                             " but this session uses vocab " + std::to_string(*expected_vocab));
    }
    if (r.remaining() < 8) throw io_error(path + ": truncated before the checksum");
    const size_t payload_len = r.remaining() - 8;
    const uint8_t* payload_start = r.raw(payload_len);
    std::vector<uint8_t> payload(payload_start, payload_start + payload_len);
    manifest_.checksum = r.u64();
    manifest_.shard_offsets = {0};

    const uint64_t actual = crc64(payload.data(), payload.size());
    if (actual != manifest_.checksum) {
      throw io_error(path + ": payload checksum mismatch (file corrupt or mis-regenerated)");
    }
    cursor_ = std::make_unique<ByteReader>(std::move(payload), path + " payload");
  }

  const EpochManifest& manifest() const { return manifest_; }

  std::optional<PackedExample> next() {
    if (yielded_ == manifest_.example_count) {
      if (cursor_->remaining() != 0) {
        throw io_error(origin_ + ": " + std::to_string(cursor_->remaining()) +
                       " payload bytes left after the last example");
      }
      return std::nullopt;
    }
    PackedExample p;
    const uint32_t mask_count = cursor_->u32();
    if (mask_count > manifest_.seq_len) {
      throw validation_error(origin_ + ": example " + std::to_string(yielded_) +
                     " claims more mask positions than seq_len");
    }
    p.mask_positions.resize(mask_count);
    for (uint32_t i = 0; i < mask_count; ++i) {
      p.mask_positions[i] = cursor_->u32();
      if (p.mask_positions[i] >= manifest_.seq_len ||
          (i > 0 && p.mask_positions[i] <= p.mask_positions[i - 1])) {
        throw validation_error(origin_ + ": example " + std::to_string(yielded_) +
                       " has invalid mask positions");
      }
    }
    const size_t bitmap_len = (manifest_.seq_len + 7) / 8;
    const uint8_t* bitmap = cursor_->raw(bitmap_len);
    p.replaced_bitmap.assign(bitmap, bitmap + bitmap_len);
    p.corrupted.resize(manifest_.seq_len);
    for (uint32_t i = 0; i < manifest_.seq_len; ++i) {
      p.corrupted[i] = cursor_->u32();
      if (p.corrupted[i] >= manifest_.vocab_size) {
        throw validation_error(origin_ + ": example " + std::to_string(yielded_) +
                       " holds an out-of-range token id");
      }
    }
    validate_bits(p);
    ++yielded_;
    return p;
  }

 private:
  // Replaced bits may only appear at mask positions; padding bits past
  // seq_len must be zero.
  void validate_bits(const PackedExample& p) const {
    std::vector<uint8_t> masked(manifest_.seq_len, 0);
    for (uint32_t pos : p.mask_positions) masked[pos] = 1;
    const uint32_t total_bits = static_cast<uint32_t>(p.replaced_bitmap.size() * 8);
    for (uint32_t i = 0; i < total_bits; ++i) {
      const bool bit = (p.replaced_bitmap[i >> 3] >> (i & 7)) & 1;
      if (bit && (i >= manifest_.seq_len || !masked[i])) {
        throw validation_error(origin_ + ": example " + std::to_string(yielded_) +
                       " has a replaced bit outside its mask positions");
      }
    }
  }

  std::string origin_;
  EpochManifest manifest_;
  std::unique_ptr<ByteReader> cursor_;
  uint64_t yielded_ = 0;
};

inline std::pair<EpochManifest, std::vector<PackedExample>> read_epoch(
    const std::string& path, std::optional<uint32_t> expected_vocab = std::nullopt) {
  EpochReader reader(path, expected_vocab);
  std::vector<PackedExample> examples;
  examples.reserve(reader.manifest().example_count);
  while (auto ex = reader.next()) examples.push_back(std::move(*ex));
  return {reader.manifest(), std::move(examples)};
}

}  // namespace rtdforge
