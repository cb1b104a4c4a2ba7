#pragma once

// Corrupted-example construction: choose mask positions, sample replacement
// tokens from a curriculum-transformed distribution, and record the binary
// replaced/original targets. Every random choice is keyed by
// (seed, epoch, example, position, stream), so the whole pipeline is a pure
// function of its inputs and examples can be generated in parallel and in any
// order. Also holds the detection/prediction loss evaluators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtdforge/curriculum.hpp"
#include "rtdforge/dist.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/provider.hpp"
#include "rtdforge/rng.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

// Probabilities are clamped into [eps, 1 - eps] inside the losses; the
// formulas are undefined at exactly 0 and 1.
inline constexpr double kLossEps = 1e-7;

struct MaskPlan {
  std::vector<uint32_t> positions;  // strictly increasing

  size_t size() const { return positions.size(); }
};

struct ExampleMeta {
  uint32_t epoch = 0;
  uint64_t example_index = 0;
  double sched_value = 0.0;  // temperature or gamma in effect
};

struct CorruptedExample {
  TokenSeq original;
  TokenSeq corrupted;
  std::vector<uint8_t> replaced;  // per position: 1 iff corrupted differs
  MaskPlan plan;
  ExampleMeta meta;
};

// Round-half-up count for "ratio of n" selections; the single rounding rule
// shared by masking and token dropping so dumps stay reproducible.
inline uint32_t scaled_count(double ratio, size_t n) {
  return static_cast<uint32_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
}

namespace detail {

// First `count` elements of a deterministic partial shuffle, returned sorted.
inline std::vector<uint32_t> pick_positions(std::vector<uint32_t> pool, uint32_t count,
                                            KeyedRng& rng) {
  for (uint32_t i = 0; i < count; ++i) {
    const uint64_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

// Selects round(mask_ratio * #maskable) distinct non-special positions, at
// least one. Only the example-level key fields matter; the position field is
// ignored.
inline MaskPlan make_mask_plan(const TokenSeq& seq, double mask_ratio, const RngKey& key,
                               const Vocab& vocab) {
  if (!(mask_ratio > 0.0 && mask_ratio < 1.0)) {
    throw validation_error("mask_ratio must lie in (0, 1)");
  }
  std::vector<uint32_t> maskable;
  for (uint32_t i = 0; i < seq.size(); ++i) {
    if (!vocab.is_special(seq[i])) maskable.push_back(i);
  }
  if (maskable.empty()) throw validation_error("sequence has no maskable positions");

  const uint32_t count = std::max<uint32_t>(1, scaled_count(mask_ratio, maskable.size()));
  KeyedRng rng(key.at_position(0), RngStream::MaskSelect);
  return MaskPlan{detail::pick_positions(std::move(maskable), count, rng)};
}

inline TokenSeq apply_mask(const TokenSeq& seq, const MaskPlan& plan, const Vocab& vocab) {
  TokenSeq masked = seq;
  uint32_t prev = 0;
  bool first = true;
  for (uint32_t pos : plan.positions) {
    if (pos >= seq.size()) throw validation_error("mask position out of range");
    if (!first && pos <= prev) throw validation_error("mask positions must be strictly increasing");
    masked[pos] = vocab.mask_id();
    prev = pos;
    first = false;
  }
  return masked;
}

// Replaces round(gamma * #eligible) non-special tokens with UNK. Mask symbols
// are special and therefore never dropped; they must reach the provider
// intact. This corrupts only the provider's view, never the training targets.
inline TokenSeq drop_tokens(const TokenSeq& seq_masked, double gamma, const RngKey& key,
                            const Vocab& vocab) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw validation_error("drop gamma must lie in [0, 1]");
  std::vector<uint32_t> eligible;
  for (uint32_t i = 0; i < seq_masked.size(); ++i) {
    if (!vocab.is_special(seq_masked[i])) eligible.push_back(i);
  }
  const uint32_t count = scaled_count(gamma, eligible.size());
  if (count == 0) return seq_masked;

  KeyedRng rng(key.at_position(0), RngStream::TokenDrop);
  TokenSeq dropped = seq_masked;
  for (uint32_t pos : detail::pick_positions(std::move(eligible), count, rng)) {
    dropped[pos] = vocab.unk_id();
  }
  return dropped;
}

// Inverse-CDF choice for a uniform draw in [0, 1): walk the support in
// ascending id order and pick the first id whose cumulative mass exceeds the
// draw. Float roundoff can leave the final cumulative sum a hair below 1; the
// last positive entry absorbs that sliver.
inline uint32_t sample_token_at(const Dist& d, double unit) {
  if (!(unit >= 0.0 && unit < 1.0)) throw validation_error("unit draw must lie in [0, 1)");
  double cum = 0.0;
  std::optional<uint32_t> last_positive;
  if (d.is_dense()) {
    const auto& p = d.dense_probs();
    for (uint32_t id = 0; id < p.size(); ++id) {
      if (p[id] <= 0.0) continue;
      cum += p[id];
      last_positive = id;
      if (unit < cum) return id;
    }
  } else {
    for (const Dist::Entry& e : d.sparse_entries()) {
      if (e.p <= 0.0) continue;
      cum += e.p;
      last_positive = e.id;
      if (unit < cum) return e.id;
    }
  }
  if (!last_positive) throw validation_error("cannot sample from an all-zero distribution");
  return *last_positive;
}

// One keyed 64-bit draw; bit-reproducible for a fixed (key, dist).
inline uint32_t sample_token(const Dist& d, const RngKey& key) {
  KeyedRng rng(key, RngStream::Replacement);
  return sample_token_at(d, rng.next_unit());
}

struct CorruptOptions {
  double mask_ratio = 0.15;
  // Fixed drop-token fraction. When unset and a gamma schedule is paired with
  // a non-interpolating provider, the scheduled gamma(u) drives the drop.
  std::optional<double> drop_token_gamma;
};

// The distribution replacements are actually drawn from at one position:
// temperature schedules scale the provider's output, gamma schedules steer
// the interpolating provider, and any other pairing passes the provider's
// output through untouched (the gamma then acts via drop_tokens instead).
inline Dist replacement_dist(const DistProvider& provider, const Schedule& schedule,
                             double sched_value, const SampleContext& ctx) {
  if (schedule.is_temperature()) {
    return temperature_scale(provider.dist(ctx), sched_value);
  }
  if (provider.kind() == ProviderKind::LogInterp) {
    return static_cast<const LogInterpProvider&>(provider).interpolated(ctx, sched_value);
  }
  return provider.dist(ctx);
}

namespace detail {

inline double effective_drop_gamma(const Schedule& schedule, ProviderKind provider_kind,
                                   double sched_value, const std::optional<double>& fixed) {
  if (fixed) return *fixed;
  if (!schedule.is_temperature() && provider_kind != ProviderKind::LogInterp) return sched_value;
  return 0.0;
}

}  // namespace detail

// Full corruption of one sequence at training progress u. The provider sees
// the masked (and possibly token-dropped) sequence; the emitted example
// differs from the original only at masked positions.
inline CorruptedExample corrupt_example(const TokenSeq& seq, const DistProvider& provider,
                                        const Schedule& schedule, double u, const RngKey& key,
                                        const Vocab& vocab, const CorruptOptions& opts = {}) {
  const double sched_value = schedule.value(u);
  MaskPlan plan = make_mask_plan(seq, opts.mask_ratio, key, vocab);
  TokenSeq masked = apply_mask(seq, plan, vocab);

  const double drop_gamma = detail::effective_drop_gamma(schedule, provider.kind(), sched_value,
                                                         opts.drop_token_gamma);
  const TokenSeq provider_view =
      drop_gamma > 0.0 ? drop_tokens(masked, drop_gamma, key, vocab) : masked;

  CorruptedExample ex;
  ex.original = seq;
  ex.corrupted = seq;
  ex.replaced.assign(seq.size(), 0);
  for (uint32_t pos : plan.positions) {
    const SampleContext ctx{key.example_index, pos, seq[pos], provider_view};
    const Dist d = replacement_dist(provider, schedule, sched_value, ctx);
    const uint32_t sampled = sample_token(d, key.at_position(pos));
    ex.corrupted[pos] = sampled;
    ex.replaced[pos] = sampled != seq[pos] ? 1 : 0;
  }
  ex.plan = std::move(plan);
  ex.meta = ExampleMeta{key.epoch, key.example_index, sched_value};
  return ex;
}

inline double replace_rate(const CorruptedExample& ex) {
  if (ex.replaced.empty()) throw validation_error("replace_rate of an empty example");
  uint64_t replaced = 0;
  for (uint8_t bit : ex.replaced) replaced += bit;
  return static_cast<double>(replaced) / static_cast<double>(ex.replaced.size());
}

// Detection loss: -1(replaced) log p - 1(original) log(1 - p), summed over
// positions (padding excluded when a pad id is supplied). Averaging is the
// caller's concern.
inline double rtd_loss(std::span<const double> pred_replace_prob, const CorruptedExample& ex,
                       std::optional<uint32_t> pad_id = std::nullopt) {
  if (pred_replace_prob.size() != ex.corrupted.size()) {
    throw validation_error("need one replace-probability per position: got " +
                           std::to_string(pred_replace_prob.size()) + " for length " +
                           std::to_string(ex.corrupted.size()));
  }
  double loss = 0.0;
  for (size_t i = 0; i < pred_replace_prob.size(); ++i) {
    if (pad_id && ex.original[i] == *pad_id) continue;
    if (!std::isfinite(pred_replace_prob[i])) {
      throw validation_error("replace-probability at position " + std::to_string(i) +
                             " is not finite");
    }
    const double p = std::clamp(pred_replace_prob[i], kLossEps, 1.0 - kLossEps);
    loss += ex.replaced[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return loss;
}

// Prediction loss at masked positions: negative sum of the model's
// log-probabilities of the original tokens, one value per plan entry.
inline double mlm_loss(std::span<const double> logprob_of_original, const MaskPlan& plan) {
  if (logprob_of_original.size() != plan.size()) {
    throw validation_error("need one log-probability per masked position: got " +
                           std::to_string(logprob_of_original.size()) + " for " +
                           std::to_string(plan.size()) + " positions");
  }
  double loss = 0.0;
  for (double lp : logprob_of_original) {
    if (!(lp <= 0.0)) throw validation_error("log-probabilities must be <= 0");
    loss -= lp;
  }
  return loss;
}

struct TrajectoryRow {
  double u = 0.0;
  double sched_value = 0.0;        // T or gamma at u
  double mean_replace_prob = 0.0;  // expected replaced fraction among masked
  double mean_entropy = 0.0;       // nats, averaged over masked positions
};

// Difficulty trajectory: at each checkpoint u, averages the closed-form
// replacement probability and entropy of the effective distribution over the
// masked positions of a fixed sequence sample. Mask plans are keyed by the
// checkpoint index, so the estimate is Monte-Carlo over plans but exact per
// position.
inline std::vector<TrajectoryRow> trajectory_report(
    const DistProvider& provider, const Schedule& schedule, const Vocab& vocab,
    const std::vector<TokenSeq>& sample, const std::vector<double>& checkpoints,
    uint64_t global_seed, const CorruptOptions& opts = {}) {
  if (checkpoints.empty()) throw validation_error("trajectory needs at least one checkpoint");
  if (sample.empty()) throw validation_error("trajectory needs at least one sequence");

  std::vector<TrajectoryRow> rows;
  rows.reserve(checkpoints.size());
  for (size_t c = 0; c < checkpoints.size(); ++c) {
    const double u = checkpoints[c];
    const double sched_value = schedule.value(u);
    double sum_replace = 0.0;
    double sum_entropy = 0.0;
    uint64_t positions = 0;
    for (size_t i = 0; i < sample.size(); ++i) {
      const TokenSeq& seq = sample[i];
      const RngKey key{global_seed, static_cast<uint32_t>(c), i, 0};
      const MaskPlan plan = make_mask_plan(seq, opts.mask_ratio, key, vocab);
      const TokenSeq masked = apply_mask(seq, plan, vocab);
      const double drop_gamma = detail::effective_drop_gamma(schedule, provider.kind(),
                                                             sched_value, opts.drop_token_gamma);
      const TokenSeq provider_view =
          drop_gamma > 0.0 ? drop_tokens(masked, drop_gamma, key, vocab) : masked;
      for (uint32_t pos : plan.positions) {
        const SampleContext ctx{i, pos, seq[pos], provider_view};
        const Dist d = replacement_dist(provider, schedule, sched_value, ctx);
        sum_replace += expected_replacement_prob(d, seq[pos]);
        sum_entropy += d.entropy();
        ++positions;
      }
    }
    rows.push_back(TrajectoryRow{u, sched_value, sum_replace / static_cast<double>(positions),
                                 sum_entropy / static_cast<double>(positions)});
  }
  return rows;
}

}  // namespace rtdforge
