#pragma once

// Tokenized-corpus ingestion and statistics. Corpora arrive pre-tokenized as
// id streams; document boundaries are explicit in the file format and are
// never crossed when cutting training sequences.
//
// Token-stream file (little-endian):
//   magic "RTDC" | version u16 = 1 | vocab_size u32 | doc_count u64
//   then per document: length u64, length x u32 token ids.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtdforge/error.hpp"
#include "rtdforge/io.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

inline constexpr char kCorpusMagic[5] = "RTDC";
inline constexpr uint16_t kCorpusVersion = 1;

struct Document {
  TokenSeq tokens;
};

class Corpus {
 public:
  Corpus(Vocab vocab, std::vector<Document> documents)
      : vocab_(std::move(vocab)), documents_(std::move(documents)) {
    if (documents_.empty()) throw validation_error("corpus has no documents");
    for (size_t d = 0; d < documents_.size(); ++d) {
      const auto& doc = documents_[d];
      if (doc.tokens.empty()) {
        throw validation_error("document " + std::to_string(d) + " is empty");
      }
      for (uint32_t id : doc.tokens) {
        if (id >= vocab_.size()) {
          throw validation_error("document " + std::to_string(d) +
                                 " contains out-of-range token id " + std::to_string(id));
        }
      }
    }
  }

  const Vocab& vocab() const { return vocab_; }
  const std::vector<Document>& documents() const { return documents_; }

  uint64_t token_count() const {
    uint64_t n = 0;
    for (const auto& doc : documents_) n += doc.tokens.size();
    return n;
  }

 private:
  Vocab vocab_;
  std::vector<Document> documents_;
};

inline Corpus load_corpus(const std::string& path, const Vocab& vocab) {
  const std::vector<uint8_t> bytes = read_file(path);
  if (bytes.empty()) throw io_error(path + ": empty file");
  ByteReader r(bytes.data(), bytes.size(), path);
  r.expect_magic(kCorpusMagic);
  const uint16_t version = r.u16();
  if (version != kCorpusVersion) {
    throw io_error(path + ": unsupported corpus version " + std::to_string(version));
  }
  const uint32_t file_vocab = r.u32();
  if (file_vocab != vocab.size()) {
    throw validation_error(path + ": vocab mismatch (file " + std::to_string(file_vocab) +
                           ", session " + std::to_string(vocab.size()) + ")");
  }
  const uint64_t doc_count = r.u64();
  if (doc_count == 0) throw validation_error(path + ": corpus has no documents");

  std::vector<Document> docs;
  docs.reserve(doc_count);
  for (uint64_t d = 0; d < doc_count; ++d) {
    const uint64_t len = r.u64();
    if (len == 0) {
      throw validation_error(path + ": document " + std::to_string(d) + " has length 0");
    }
    Document doc;
    doc.tokens.reserve(len);
    for (uint64_t i = 0; i < len; ++i) {
      const size_t at = r.offset();
      const uint32_t id = r.u32();
      if (id >= vocab.size()) {
        throw validation_error(path + ": token id " + std::to_string(id) +
                               " out of range at byte offset " + std::to_string(at));
      }
      doc.tokens.push_back(id);
    }
    docs.push_back(std::move(doc));
  }
  if (!r.at_end()) {
    throw io_error(path + ": " + std::to_string(r.remaining()) +
                   " trailing bytes after last document");
  }
  return Corpus(vocab, std::move(docs));
}

inline void dump_corpus(const Corpus& corpus, const std::string& path) {
  ByteWriter w;
  w.magic(kCorpusMagic);
  w.u16(kCorpusVersion);
  w.u32(corpus.vocab().size());
  w.u64(corpus.documents().size());
  for (const auto& doc : corpus.documents()) {
    w.u64(doc.tokens.size());
    for (uint32_t id : doc.tokens) w.u32(id);
  }
  write_file_atomic(path, w.buffer());
}

struct FreqTable {
  std::vector<uint64_t> counts;  // indexed by token id, size |V|
  uint64_t total = 0;
};

inline FreqTable build_freq_table(const Corpus& corpus, bool exclude_special) {
  FreqTable freq;
  freq.counts.assign(corpus.vocab().size(), 0);
  for (const auto& doc : corpus.documents()) {
    for (uint32_t id : doc.tokens) ++freq.counts[id];
  }
  if (exclude_special) {
    for (uint32_t id : corpus.vocab().special_ids()) freq.counts[id] = 0;
  }
  for (uint64_t c : freq.counts) freq.total += c;
  if (freq.total == 0) {
    throw validation_error("frequency table has empty support" +
                           std::string(exclude_special ? " (corpus is all special tokens)" : ""));
  }
  return freq;
}

struct PackingPolicy {
  // A final chunk shorter than seq_len is kept (padded) only if it has at
  // least this many tokens; shorter tails are dropped.
  uint32_t min_tail_tokens = 8;
};

// Cuts fixed-length training sequences out of a corpus: greedy non-overlapping
// windows from the start of each document, PAD appended to short tails, and no
// sequence ever mixes two documents. Deterministic; one instance per consumer.
class SequenceSampler {
 public:
  SequenceSampler(const Corpus& corpus, uint32_t seq_len, PackingPolicy policy = {})
      : corpus_(corpus), seq_len_(seq_len), policy_(policy) {
    if (seq_len_ < 2) throw validation_error("seq_len must be >= 2");
  }

  std::optional<TokenSeq> next() {
    const auto& docs = corpus_.documents();
    while (doc_ < docs.size()) {
      const TokenSeq& tokens = docs[doc_].tokens;
      if (cursor_ < tokens.size()) {
        const size_t remaining = tokens.size() - cursor_;
        if (remaining >= seq_len_) {
          TokenSeq seq(tokens.begin() + cursor_, tokens.begin() + cursor_ + seq_len_);
          cursor_ += seq_len_;
          emitted_from_doc_ = true;
          return seq;
        }
        if (remaining >= policy_.min_tail_tokens) {
          TokenSeq seq(tokens.begin() + cursor_, tokens.end());
          seq.resize(seq_len_, corpus_.vocab().pad_id());
          cursor_ = tokens.size();
          emitted_from_doc_ = true;
          return seq;
        }
        cursor_ = tokens.size();  // tail too short, dropped
      }
      if (!emitted_from_doc_) ++skipped_documents_;
      ++doc_;
      cursor_ = 0;
      emitted_from_doc_ = false;
    }
    return std::nullopt;
  }

  uint64_t skipped_documents() const { return skipped_documents_; }

 private:
  const Corpus& corpus_;
  uint32_t seq_len_;
  PackingPolicy policy_;
  size_t doc_ = 0;
  size_t cursor_ = 0;
  bool emitted_from_doc_ = false;
  uint64_t skipped_documents_ = 0;
};

inline std::vector<TokenSeq> sample_training_sequences(const Corpus& corpus, uint32_t seq_len,
                                                       PackingPolicy policy = {}) {
  SequenceSampler sampler(corpus, seq_len, policy);
  std::vector<TokenSeq> out;
  while (auto seq = sampler.next()) out.push_back(std::move(*seq));
  return out;
}

}  // namespace rtdforge
