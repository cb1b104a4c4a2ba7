#pragma once

// Shared fixtures for the test suite: temp directories, tiny vocabularies,
// and synthetic corpora.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rtdforge/corpus.hpp"
#include "rtdforge/vocab.hpp"

namespace testutil {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rtdforge_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// |V|-token vocabulary with MASK=0, UNK=1, PAD=2.
inline rtdforge::Vocab tiny_vocab(uint32_t size = 16) {
  using rtdforge::SpecialRole;
  return rtdforge::Vocab(size, {{SpecialRole::Mask, 0},
                                {SpecialRole::Unk, 1},
                                {SpecialRole::Pad, 2}});
}

// Deterministic corpus of `docs` documents with lengths in [min_len, max_len]
// and uniformly random non-special tokens.
inline rtdforge::Corpus random_corpus(const rtdforge::Vocab& vocab, size_t docs, size_t min_len,
                                      size_t max_len, uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> len_pick(min_len, max_len);
  std::vector<uint32_t> non_special;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    if (!vocab.is_special(id)) non_special.push_back(id);
  }
  std::uniform_int_distribution<size_t> tok_pick(0, non_special.size() - 1);
  std::vector<rtdforge::Document> out;
  out.reserve(docs);
  for (size_t d = 0; d < docs; ++d) {
    rtdforge::Document doc;
    doc.tokens.resize(len_pick(rng));
    for (auto& t : doc.tokens) t = non_special[tok_pick(rng)];
    out.push_back(std::move(doc));
  }
  return rtdforge::Corpus(vocab, std::move(out));
}

}  // namespace testutil
