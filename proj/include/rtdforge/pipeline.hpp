#pragma once

// End-to-end orchestration: a run configuration parsed from one key/value
// file (with flag overrides), provider construction from its config name, parallel
// per-epoch dumping, and verification that an existing dump regenerates
// bit-exactly from (seed, epoch) plus the current configuration.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rtdforge/config.hpp"
#include "rtdforge/corpus.hpp"
#include "rtdforge/curriculum.hpp"
#include "rtdforge/datapack.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/hash.hpp"
#include "rtdforge/provider.hpp"
#include "rtdforge/rtd.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

// Command-line values that take precedence over the config file.
struct CliOverrides {
  std::optional<uint64_t> seed;
  std::optional<uint64_t> epochs;
  std::optional<uint64_t> seq_len;
  std::optional<double> mask_ratio;
  std::optional<std::string> provider;
  std::optional<std::string> curriculum;
  std::optional<std::string> out;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string substitute_epoch(std::string path, uint32_t epoch) {
  const std::string tag = "{epoch}";
  size_t at;
  while ((at = path.find(tag)) != std::string::npos) {
    path.replace(at, tag.size(), std::to_string(epoch));
  }
  return path;
}

}  // namespace detail

// One generation run. Config keys: corpus, out, seed, epochs, seq_len,
// mask_ratio, drop_token_gamma, min_tail_tokens, vocab_size + special_*,
// curriculum (path to a schedule file), provider, provider_alpha,
// provider_exclude_special, provider_logits ("{epoch}" expands to the epoch
// index), provider_a, provider_b.
struct RunConfig {
  std::string corpus_path;
  std::string out_dir = "dump";
  uint64_t global_seed = 0;
  uint32_t epochs = 1;
  uint32_t seq_len = 512;
  double mask_ratio = 0.15;
  std::optional<double> drop_token_gamma;
  PackingPolicy packing;
  Vocab vocab = Vocab(2, {});  // placeholder; load() replaces it
  CurriculumConfig curriculum;

  std::string provider_kind = "uniform";
  double provider_alpha = 0.35;
  std::optional<bool> provider_exclude_special;
  std::string provider_logits;
  std::string provider_a;  // log_interp endpoints, leaf kinds only
  std::string provider_b;

  CorruptOptions corrupt_options() const { return CorruptOptions{mask_ratio, drop_token_gamma}; }

  static RunConfig from_config(KvConfig kv, const CliOverrides& ov = {}) {
    if (ov.seed) kv.set("seed", std::to_string(*ov.seed));
    if (ov.epochs) kv.set("epochs", std::to_string(*ov.epochs));
    if (ov.seq_len) kv.set("seq_len", std::to_string(*ov.seq_len));
    if (ov.mask_ratio) kv.set("mask_ratio", detail::format_double(*ov.mask_ratio));
    if (ov.provider) kv.set("provider", *ov.provider);
    if (ov.curriculum) kv.set("curriculum", *ov.curriculum);
    if (ov.out) kv.set("out", *ov.out);

    RunConfig cfg;
    cfg.corpus_path = kv.get_string("corpus");
    cfg.out_dir = kv.get_string("out", "dump");
    cfg.global_seed = kv.get_u64("seed", 0);
    const uint64_t epochs = kv.get_u64("epochs", 1);
    if (epochs == 0 || epochs > 0xFFFFFFFFULL) {
      throw config_error("epochs must lie in [1, 2^32)");
    }
    cfg.epochs = static_cast<uint32_t>(epochs);
    const uint64_t seq_len = kv.get_u64("seq_len", 512);
    if (seq_len < 2 || seq_len > 0xFFFFFFFFULL) throw config_error("seq_len must be >= 2");
    cfg.seq_len = static_cast<uint32_t>(seq_len);
    cfg.mask_ratio = kv.get_double("mask_ratio", 0.15);
    if (!(cfg.mask_ratio > 0.0 && cfg.mask_ratio < 1.0)) {
      throw config_error("mask_ratio must lie in (0, 1)");
    }
    cfg.drop_token_gamma = kv.get_optional_double("drop_token_gamma");
    if (cfg.drop_token_gamma &&
        !(*cfg.drop_token_gamma >= 0.0 && *cfg.drop_token_gamma <= 1.0)) {
      throw config_error("drop_token_gamma must lie in [0, 1]");
    }
    cfg.packing.min_tail_tokens = static_cast<uint32_t>(kv.get_u64("min_tail_tokens", 8));
    cfg.vocab = Vocab::from_config(kv);
    if (kv.has("curriculum")) {
      cfg.curriculum = CurriculumConfig::load(kv.get_string("curriculum"));
    }

    cfg.provider_kind = kv.get_string("provider", "uniform");
    cfg.provider_alpha = kv.get_double("provider_alpha", 0.35);
    if (kv.has("provider_exclude_special")) {
      cfg.provider_exclude_special = kv.get_bool("provider_exclude_special", false);
    }
    cfg.provider_logits = kv.get_string("provider_logits", "");
    cfg.provider_a = kv.get_string("provider_a", "");
    cfg.provider_b = kv.get_string("provider_b", "");
    if (cfg.provider_kind == "log_interp" &&
        (cfg.provider_a.empty() || cfg.provider_b.empty())) {
      throw config_error("log_interp needs provider_a and provider_b");
    }
    return cfg;
  }

  static RunConfig load(const std::string& path, const CliOverrides& ov = {}) {
    return from_config(KvConfig::load(path), ov);
  }
};

// Canonical rendering of every generation-relevant setting that is not
// already a bound field of the epoch manifest (seed, epoch, total_epochs,
// vocab size, and seq_len are stored and checked directly).
inline std::string generation_descriptor(const RunConfig& cfg) {
  KvConfig c;
  c.set("curriculum", cfg.curriculum.schedule.descriptor());
  c.set("drop_token_gamma",
        cfg.drop_token_gamma ? detail::format_double(*cfg.drop_token_gamma) : "none");
  c.set("mask_ratio", detail::format_double(cfg.mask_ratio));
  c.set("min_tail_tokens", std::to_string(cfg.packing.min_tail_tokens));
  c.set("vocab", cfg.vocab.descriptor());
  return c.canonical();
}

inline uint64_t config_hash(const RunConfig& cfg) { return crc64(generation_descriptor(cfg)); }

inline uint64_t provider_hash(const DistProvider& provider) {
  return crc64(provider.descriptor());
}

namespace detail {

inline ProviderPtr build_leaf_provider(const std::string& kind, const RunConfig& cfg,
                                       const Corpus& corpus, uint32_t epoch) {
  const auto excl = cfg.provider_exclude_special;
  if (kind == "uniform") {
    return std::make_shared<UniformProvider>(cfg.vocab, excl.value_or(false));
  }
  if (kind == "term_freq") {
    return std::make_shared<TermFreqProvider>(build_freq_table(corpus, excl.value_or(true)));
  }
  if (kind == "smoothed_one_hot") {
    return std::make_shared<SmoothedOneHotProvider>(cfg.vocab, cfg.provider_alpha,
                                                    excl.value_or(false));
  }
  if (kind == "file_logits") {
    if (cfg.provider_logits.empty()) {
      throw config_error("provider_logits path is required for the file_logits provider");
    }
    return FileLogitsProvider::open(substitute_epoch(cfg.provider_logits, epoch),
                                    cfg.vocab.size());
  }
  if (kind == "log_interp") {
    throw config_error("log_interp endpoints must be leaf provider kinds");
  }
  throw config_error("unknown provider kind '" + kind +
                     "' (expected uniform, term_freq, smoothed_one_hot, file_logits, or "
                     "log_interp)");
}

}  // namespace detail

inline ProviderPtr build_provider(const RunConfig& cfg, const Corpus& corpus, uint32_t epoch) {
  if (cfg.provider_kind == "log_interp") {
    return std::make_shared<LogInterpProvider>(
        detail::build_leaf_provider(cfg.provider_a, cfg, corpus, epoch),
        detail::build_leaf_provider(cfg.provider_b, cfg, corpus, epoch));
  }
  return detail::build_leaf_provider(cfg.provider_kind, cfg, corpus, epoch);
}

// Worker count: RTD_FORGE_THREADS caps it when set, otherwise the hardware
// concurrency (at least 1).
inline unsigned worker_threads() {
  if (const char* env = std::getenv("RTD_FORGE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0 || v > 1024) {
      throw config_error(std::string("RTD_FORGE_THREADS must be an integer in [1, 1024], got: ") +
                         env);
    }
    return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Corrupts every sequence of one epoch, in parallel, with results in
// example-index order regardless of completion order.
inline std::vector<CorruptedExample> corrupt_all(const RunConfig& cfg,
                                                 const std::vector<TokenSeq>& sequences,
                                                 const DistProvider& provider, uint32_t epoch,
                                                 double u) {
  const uint64_t n = sequences.size();
  std::vector<CorruptedExample> out(n);
  const CorruptOptions opts = cfg.corrupt_options();
  const Schedule& schedule = cfg.curriculum.schedule;

  const unsigned threads =
      static_cast<unsigned>(std::min<uint64_t>(worker_threads(), n == 0 ? 1 : n));
  std::atomic<uint64_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    try {
      constexpr uint64_t kGrain = 64;
      while (!failed.load(std::memory_order_relaxed)) {
        const uint64_t begin = cursor.fetch_add(kGrain);
        if (begin >= n) return;
        const uint64_t end = std::min(n, begin + kGrain);
        for (uint64_t i = begin; i < end; ++i) {
          const RngKey key{cfg.global_seed, epoch, i, 0};
          out[i] = corrupt_example(sequences[i], provider, schedule, u, key, cfg.vocab, opts);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };

  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 0; t + 1 < threads; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

struct EpochDumpInfo {
  std::string path;
  EpochManifest manifest;
  double u = 0.0;
  double sched_value = 0.0;
  double mean_replace_rate = 0.0;
  double seconds = 0.0;  // wall time, reporting only
};

namespace detail {

// Progress denominator: the curriculum horizon when the schedule file fixes
// one, else the number of epochs being dumped. Epoch e maps to u = e/horizon.
inline uint32_t epoch_horizon(const RunConfig& cfg) {
  const uint64_t h = cfg.curriculum.total_epochs.value_or(cfg.epochs);
  if (h == 0 || h > 0xFFFFFFFFULL) throw config_error("total_epochs must lie in [1, 2^32)");
  return static_cast<uint32_t>(h);
}

inline std::string epoch_file_path(const std::string& out_dir, uint32_t epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch_%04u.rtde", epoch);
  return (std::filesystem::path(out_dir) / name).string();
}

inline bool provider_uses_logits(const RunConfig& cfg) {
  return cfg.provider_kind == "file_logits" || cfg.provider_a == "file_logits" ||
         cfg.provider_b == "file_logits";
}

}  // namespace detail

// Generates and writes one epoch file per epoch. All referenced logits files
// are checked up front and each epoch file is written atomically, so a
// failing run leaves no partial artifacts behind.
inline std::vector<EpochDumpInfo> dump_epochs(const RunConfig& cfg) {
  const Corpus corpus = load_corpus(cfg.corpus_path, cfg.vocab);
  const std::vector<TokenSeq> sequences =
      sample_training_sequences(corpus, cfg.seq_len, cfg.packing);
  if (sequences.empty()) {
    throw validation_error("corpus yields no training sequences at seq_len " +
                           std::to_string(cfg.seq_len));
  }
  const uint32_t horizon = detail::epoch_horizon(cfg);
  if (cfg.epochs - 1 > horizon) {
    throw config_error("epochs (" + std::to_string(cfg.epochs) +
                       ") exceed the curriculum horizon (" + std::to_string(horizon) + ")");
  }

  const bool uses_logits = detail::provider_uses_logits(cfg);
  const bool per_epoch_provider =
      uses_logits && cfg.provider_logits.find("{epoch}") != std::string::npos;
  if (uses_logits) {
    for (uint32_t e = 0; e < cfg.epochs; ++e) {
      const std::string path = detail::substitute_epoch(cfg.provider_logits, e);
      if (!std::filesystem::exists(path)) {
        throw io_error("logits file not found: " + path);
      }
      if (!per_epoch_provider) break;
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  const uint64_t cfg_hash = config_hash(cfg);
  ProviderPtr shared_provider;
  if (!per_epoch_provider) shared_provider = build_provider(cfg, corpus, 0);

  std::vector<EpochDumpInfo> infos;
  infos.reserve(cfg.epochs);
  for (uint32_t e = 0; e < cfg.epochs; ++e) {
    const auto started = std::chrono::steady_clock::now();
    const ProviderPtr provider =
        per_epoch_provider ? build_provider(cfg, corpus, e) : shared_provider;
    const double u = static_cast<double>(e) / static_cast<double>(horizon);

    const std::vector<CorruptedExample> examples =
        corrupt_all(cfg, sequences, *provider, e, u);

    EpochManifest header;
    header.global_seed = cfg.global_seed;
    header.epoch = e;
    header.total_epochs = horizon;
    header.vocab_size = cfg.vocab.size();
    header.seq_len = cfg.seq_len;
    header.config_hash = cfg_hash;
    header.provider_hash = provider_hash(*provider);

    EpochDumpInfo info;
    info.path = detail::epoch_file_path(cfg.out_dir, e);
    info.manifest = write_epoch(examples, header, info.path);
    info.u = u;
    info.sched_value = cfg.curriculum.schedule.value(u);
    double rate_sum = 0.0;
    for (const CorruptedExample& ex : examples) rate_sum += replace_rate(ex);
    info.mean_replace_rate = rate_sum / static_cast<double>(examples.size());
    info.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    infos.push_back(std::move(info));
  }
  return infos;
}

// True iff the file is bit-exactly what this configuration would produce for
// the manifest's epoch index: the recorded seed and horizon must equal the
// configuration's, and regenerating the epoch must reproduce the stored
// payload checksum. A configuration whose hashes do not match the manifest is
// a usage error, not a mismatch: the comparison is refused, so stale dumps
// cannot be silently "verified" under a different setup.
inline bool verify_regeneration(const EpochManifest& manifest, const Corpus& corpus,
                                const RunConfig& cfg) {
  if (manifest.version != kEpochVersion) {
    throw validation_error("unsupported epoch-file version " + std::to_string(manifest.version));
  }
  if (config_hash(cfg) != manifest.config_hash) {
    throw validation_error(
        "config hash mismatch: the dump was generated under a different configuration");
  }
  if (manifest.vocab_size != cfg.vocab.size()) {
    throw validation_error("vocab size differs from the dump");
  }
  if (manifest.seq_len != cfg.seq_len) {
    throw validation_error("seq_len differs from the dump");
  }
  if (manifest.total_epochs == 0 || manifest.epoch > manifest.total_epochs) {
    throw validation_error("manifest epoch/total_epochs fields are inconsistent");
  }
  // Seed or horizon drift means "this config would not produce this file":
  // that is a mismatch verdict, not a refusal.
  if (manifest.global_seed != cfg.global_seed) return false;
  if (manifest.total_epochs != detail::epoch_horizon(cfg)) return false;
  const ProviderPtr provider = build_provider(cfg, corpus, manifest.epoch);
  if (provider_hash(*provider) != manifest.provider_hash) {
    throw validation_error(
        "provider hash mismatch: the dump was generated with a different provider");
  }

  const std::vector<TokenSeq> sequences =
      sample_training_sequences(corpus, cfg.seq_len, cfg.packing);
  if (sequences.size() != manifest.example_count) return false;

  const double u =
      static_cast<double>(manifest.epoch) / static_cast<double>(manifest.total_epochs);
  const std::vector<CorruptedExample> examples =
      corrupt_all(cfg, sequences, *provider, manifest.epoch, u);

  ByteWriter payload;
  for (const CorruptedExample& ex : examples) {
    detail::append_example_payload(payload, pack_example(ex), manifest.seq_len,
                                   manifest.vocab_size);
  }
  const auto bytes = payload.take();
  return crc64(bytes.data(), bytes.size()) == manifest.checksum;
}

}  // namespace rtdforge
