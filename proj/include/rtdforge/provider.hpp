#pragma once

// Pluggable sources of the per-position replacement distribution. A provider
// answers "given this masked sequence and position, what distribution do
// replacement tokens come from?" before any curriculum transform is applied.
// Model-backed predictions arrive as precomputed logits files; the model-free
// kinds need nothing beyond the vocabulary and corpus statistics.

#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "rtdforge/corpus.hpp"
#include "rtdforge/dist.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/hash.hpp"
#include "rtdforge/io.hpp"
#include "rtdforge/logits.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

enum class ProviderKind { Uniform, TermFreq, SmoothedOneHot, FileLogits, LogInterp };

inline const char* provider_kind_name(ProviderKind k) {
  switch (k) {
    case ProviderKind::Uniform: return "uniform";
    case ProviderKind::TermFreq: return "term_freq";
    case ProviderKind::SmoothedOneHot: return "smoothed_one_hot";
    case ProviderKind::FileLogits: return "file_logits";
    case ProviderKind::LogInterp: return "log_interp";
  }
  return "?";
}

// Everything a provider may condition on for one masked position. masked_seq
// is the sequence as the provider sees it: mask symbols applied, plus any
// drop-token corruption.
struct SampleContext {
  uint64_t example_index = 0;
  uint32_t position = 0;
  uint32_t original = 0;  // the token that was masked out
  std::span<const uint32_t> masked_seq;
};

class DistProvider {
 public:
  virtual ~DistProvider() = default;

  virtual ProviderKind kind() const = 0;

  // The distribution for this context before curriculum transforms. For the
  // interpolating kind this is the hard endpoint (the distribution the
  // curriculum anneals toward); use LogInterpProvider::interpolated for a
  // specific mixing coefficient.
  virtual Dist dist(const SampleContext& ctx) const = 0;

  // Canonical description of the provider and its parameters, including
  // content hashes for data-backed kinds. Epoch dumps record a hash of this
  // string so stale data cannot be silently reused after a provider change.
  virtual std::string descriptor() const = 0;
};

using ProviderPtr = std::shared_ptr<const DistProvider>;

class UniformProvider final : public DistProvider {
 public:
  UniformProvider(const Vocab& vocab, bool exclude_special)
      : dist_(uniform_dist(vocab, exclude_special)),
        vocab_size_(vocab.size()),
        exclude_special_(exclude_special) {}

  ProviderKind kind() const override { return ProviderKind::Uniform; }
  Dist dist(const SampleContext&) const override { return dist_; }

  std::string descriptor() const override {
    char buf[96];
    std::snprintf(buf, sizeof buf, "uniform(vocab=%u,exclude_special=%d)", vocab_size_,
                  exclude_special_ ? 1 : 0);
    return buf;
  }

 private:
  Dist dist_;
  uint32_t vocab_size_;
  bool exclude_special_;
};

class TermFreqProvider final : public DistProvider {
 public:
  explicit TermFreqProvider(const FreqTable& freq) : dist_(term_freq_dist(freq)) {
    ByteWriter w;
    for (uint64_t c : freq.counts) w.u64(c);
    const auto bytes = w.take();
    counts_crc_ = crc64(bytes.data(), bytes.size());
    total_ = freq.total;
  }

  ProviderKind kind() const override { return ProviderKind::TermFreq; }
  Dist dist(const SampleContext&) const override { return dist_; }

  std::string descriptor() const override {
    char buf[128];
    std::snprintf(buf, sizeof buf, "term_freq(vocab=%u,total=%llu,crc=%016llx)",
                  dist_.vocab_size(), static_cast<unsigned long long>(total_),
                  static_cast<unsigned long long>(counts_crc_));
    return buf;
  }

 private:
  Dist dist_;
  uint64_t total_ = 0;
  uint64_t counts_crc_ = 0;
};

class SmoothedOneHotProvider final : public DistProvider {
 public:
  SmoothedOneHotProvider(const Vocab& vocab, double alpha, bool exclude_special)
      : vocab_(vocab), alpha_(alpha), exclude_special_(exclude_special) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw config_error("smoothed one-hot alpha must lie in (0, 1)");
    }
  }

  ProviderKind kind() const override { return ProviderKind::SmoothedOneHot; }

  Dist dist(const SampleContext& ctx) const override {
    return smoothed_one_hot(ctx.original, alpha_, vocab_, exclude_special_);
  }

  std::string descriptor() const override {
    char buf[128];
    std::snprintf(buf, sizeof buf, "smoothed_one_hot(vocab=%u,alpha=%.17g,exclude_special=%d)",
                  vocab_.size(), alpha_, exclude_special_ ? 1 : 0);
    return buf;
  }

  double alpha() const { return alpha_; }

 private:
  Vocab vocab_;
  double alpha_;
  bool exclude_special_;
};

class FileLogitsProvider final : public DistProvider {
 public:
  static ProviderPtr open(const std::string& path, uint32_t expected_vocab) {
    auto bytes = read_file(path);
    const uint64_t crc = crc64(bytes.data(), bytes.size());
    auto table = std::make_shared<const LogitsTable>(
        LogitsTable::from_bytes(std::move(bytes), path, expected_vocab));
    return std::make_shared<FileLogitsProvider>(std::move(table), crc);
  }

  FileLogitsProvider(std::shared_ptr<const LogitsTable> table, uint64_t content_crc)
      : table_(std::move(table)), content_crc_(content_crc) {}

  ProviderKind kind() const override { return ProviderKind::FileLogits; }

  Dist dist(const SampleContext& ctx) const override {
    return table_->at(ctx.example_index, ctx.position);
  }

  std::string descriptor() const override {
    char buf[128];
    std::snprintf(buf, sizeof buf, "file_logits(vocab=%u,records=%llu,crc=%016llx)",
                  table_->vocab_size(), static_cast<unsigned long long>(table_->record_count()),
                  static_cast<unsigned long long>(content_crc_));
    return buf;
  }

  const LogitsTable& table() const { return *table_; }

 private:
  std::shared_ptr<const LogitsTable> table_;
  uint64_t content_crc_;
};

// Anneals between an easy distribution a (mixing coefficient gamma = 1) and a
// hard one b (gamma = 0); the gamma schedule decays toward b over training.
class LogInterpProvider final : public DistProvider {
 public:
  LogInterpProvider(ProviderPtr a, ProviderPtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (!a_ || !b_) throw config_error("log_interp needs two endpoint providers");
    if (a_->kind() == ProviderKind::LogInterp || b_->kind() == ProviderKind::LogInterp) {
      throw config_error("log_interp endpoints must not themselves interpolate");
    }
  }

  ProviderKind kind() const override { return ProviderKind::LogInterp; }

  // Hard endpoint: what the curriculum converges to at gamma = 0.
  Dist dist(const SampleContext& ctx) const override { return b_->dist(ctx); }

  Dist interpolated(const SampleContext& ctx, double gamma) const {
    return log_interpolate(a_->dist(ctx), b_->dist(ctx), gamma);
  }

  std::string descriptor() const override {
    return "log_interp(a=" + a_->descriptor() + ",b=" + b_->descriptor() + ")";
  }

  const DistProvider& easy() const { return *a_; }
  const DistProvider& hard() const { return *b_; }

 private:
  ProviderPtr a_;
  ProviderPtr b_;
};

}  // namespace rtdforge
