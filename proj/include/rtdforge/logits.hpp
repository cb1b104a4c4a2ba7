#pragma once

// Sparse top-k log-probability files: precomputed per-position predictions
// from some external scorer, stored as (example, position) records each
// holding k (token id, log-probability) pairs. On load each record's entries
// are softmax-renormalized over the k listed ids, so truncated tails never
// leak unnormalized mass into sampling.

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rtdforge/dist.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/io.hpp"
#include "rtdforge/rng.hpp"

namespace rtdforge {

inline constexpr char kLogitsMagic[4] = {'R', 'T', 'D', 'L'};
inline constexpr uint16_t kLogitsVersion = 1;

struct LogitsRecord {
  uint64_t example = 0;
  uint32_t position = 0;
  // (token id, log-probability), sorted by strictly increasing id.
  std::vector<std::pair<uint32_t, float>> entries;
};

inline void dump_logits(const std::string& path, const std::vector<LogitsRecord>& records,
                        uint32_t vocab_size) {
  uint16_t k_max = 0;
  for (const LogitsRecord& r : records) {
    if (r.entries.size() > 0xFFFF) throw validation_error("logits record exceeds 65535 entries");
    k_max = std::max(k_max, static_cast<uint16_t>(r.entries.size()));
  }

  ByteWriter w;
  w.magic(kLogitsMagic);
  w.u16(kLogitsVersion);
  w.u32(vocab_size);
  w.u16(k_max);
  w.u64(records.size());
  for (const LogitsRecord& r : records) {
    w.u64(r.example);
    w.u32(r.position);
    w.u16(static_cast<uint16_t>(r.entries.size()));
    for (const auto& [id, logp] : r.entries) {
      w.u32(id);
      w.f32(logp);
    }
  }
  write_file_atomic(path, w.take());
}

// Loads a logits file into a queryable (example, position) -> distribution
// table. Entries are renormalized at load so lookups are cheap and repeated.
class LogitsTable {
 public:
  static LogitsTable load(const std::string& path, uint32_t expected_vocab) {
    return from_bytes(read_file(path), path, expected_vocab);
  }

  static LogitsTable from_bytes(std::vector<uint8_t> bytes, const std::string& path,
                                uint32_t expected_vocab) {
    ByteReader r(std::move(bytes), path);
    r.expect_magic(kLogitsMagic);
    const uint16_t version = r.u16();
    if (version != kLogitsVersion) {
      throw io_error(path + ": unsupported logits version " + std::to_string(version));
    }
    const uint32_t vocab = r.u32();
    if (vocab != expected_vocab) {
      throw validation_error(path + ": logits cover vocab " + std::to_string(vocab) +
                             " but the run uses vocab " + std::to_string(expected_vocab));
    }
    const uint16_t k_max = r.u16();
    const uint64_t count = r.u64();
    if (count == 0) throw io_error(path + ": logits file holds no records");

    LogitsTable table;
    table.vocab_ = vocab;
    table.dists_.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
      const uint64_t example = r.u64();
      const uint32_t position = r.u32();
      const uint16_t k = r.u16();
      if (k == 0 || k > k_max) {
        throw io_error(path + ": record " + std::to_string(i) + " has invalid entry count " +
                       std::to_string(k));
      }
      std::vector<uint32_t> ids(k);
      std::vector<double> logw(k);
      for (uint16_t j = 0; j < k; ++j) {
        ids[j] = r.u32();
        logw[j] = static_cast<double>(r.f32());
        if (ids[j] >= vocab) {
          throw io_error(path + ": record " + std::to_string(i) + " lists token id " +
                         std::to_string(ids[j]) + " outside vocab " + std::to_string(vocab));
        }
        if (j > 0 && ids[j] <= ids[j - 1]) {
          throw io_error(path + ": record " + std::to_string(i) +
                         " entries are not sorted by increasing token id");
        }
      }
      std::vector<Dist::Entry> entries(k);
      detail::softmax_into(logw, [&](size_t j, double p) { entries[j] = {ids[j], p}; });
      const Key key{example, position};
      if (!table.dists_.emplace(key, Dist::sparse(std::move(entries), vocab)).second) {
        throw io_error(path + ": duplicate record for example " + std::to_string(example) +
                       " position " + std::to_string(position));
      }
    }
    if (r.remaining() != 0) {
      throw io_error(path + ": " + std::to_string(r.remaining()) +
                     " trailing bytes after the last record");
    }
    return table;
  }

  uint32_t vocab_size() const { return vocab_; }
  size_t record_count() const { return dists_.size(); }

  const Dist* find(uint64_t example, uint32_t position) const {
    auto it = dists_.find(Key{example, position});
    return it == dists_.end() ? nullptr : &it->second;
  }

  // Missing records are a data-preparation error, not a soft condition: the
  // mask plan decides which positions need a distribution, and the file must
  // cover every one of them.
  const Dist& at(uint64_t example, uint32_t position) const {
    const Dist* d = find(example, position);
    if (d == nullptr) {
      throw validation_error("logits file has no record for example " + std::to_string(example) +
                             " position " + std::to_string(position));
    }
    return *d;
  }

 private:
  struct Key {
    uint64_t example;
    uint32_t position;
    bool operator==(const Key& o) const {
      return example == o.example && position == o.position;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return static_cast<size_t>(fold(mix64(k.example), k.position));
    }
  };

  uint32_t vocab_ = 0;
  std::unordered_map<Key, Dist, KeyHash> dists_;
};

}  // namespace rtdforge
