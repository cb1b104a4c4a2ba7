#pragma once

// Replacement-token probability distributions over a token-id space, either
// dense (one probability per id) or sparse (sorted top-k entries with an
// implicit zero tail). Power transforms run in log space so near-flat
// temperatures over six-figure vocabularies cannot underflow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rtdforge/corpus.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/vocab.hpp"

namespace rtdforge {

inline constexpr double kDistSumTolerance = 1e-9;

class Dist {
 public:
  struct Entry {
    uint32_t id;
    double p;
  };

  static Dist dense(std::vector<double> probs) {
    Dist d;
    d.dense_ = true;
    d.probs_ = std::move(probs);
    d.validate();
    return d;
  }

  // Entries must be sorted by strictly increasing id and already normalized.
  static Dist sparse(std::vector<Entry> entries, uint32_t vocab_size) {
    Dist d;
    d.dense_ = false;
    d.entries_ = std::move(entries);
    d.vocab_size_ = vocab_size;
    d.validate();
    return d;
  }

  // Same, but scales the listed masses to sum to one first.
  static Dist sparse_renormalized(std::vector<Entry> entries, uint32_t vocab_size) {
    double sum = 0.0;
    for (const Entry& e : entries) sum += e.p;
    if (!(sum > 0.0)) throw validation_error("sparse dist has no probability mass");
    for (Entry& e : entries) e.p /= sum;
    return sparse(std::move(entries), vocab_size);
  }

  bool is_dense() const { return dense_; }

  uint32_t vocab_size() const {
    return dense_ ? static_cast<uint32_t>(probs_.size()) : vocab_size_;
  }

  double prob(uint32_t id) const {
    if (dense_) return id < probs_.size() ? probs_[id] : 0.0;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, uint32_t v) { return e.id < v; });
    return (it != entries_.end() && it->id == id) ? it->p : 0.0;
  }

  const std::vector<double>& dense_probs() const { return probs_; }
  const std::vector<Entry>& sparse_entries() const { return entries_; }

  size_t support_size() const {
    if (!dense_) return entries_.size();
    size_t n = 0;
    for (double p : probs_) n += p > 0.0;
    return n;
  }

  // Visits (id, p) over the support in ascending id order.
  template <typename F>
  void for_each(F&& f) const {
    if (dense_) {
      for (uint32_t id = 0; id < probs_.size(); ++id) {
        if (probs_[id] > 0.0) f(id, probs_[id]);
      }
    } else {
      for (const Entry& e : entries_) f(e.id, e.p);
    }
  }

  double entropy() const {  // nats
    double h = 0.0;
    for_each([&](uint32_t, double p) { h -= p * std::log(p); });
    return h;
  }

  uint32_t argmax() const {
    uint32_t best_id = 0;
    double best_p = -1.0;
    for_each([&](uint32_t id, double p) {
      if (p > best_p) {
        best_p = p;
        best_id = id;
      }
    });
    return best_id;
  }

 private:
  void validate() const {
    double sum = 0.0;
    if (dense_) {
      if (probs_.empty()) throw validation_error("dense dist over empty vocab");
      for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw validation_error("dist has a negative or non-finite probability");
        }
        sum += p;
      }
    } else {
      if (entries_.empty()) throw validation_error("sparse dist has no entries");
      uint32_t prev = 0;
      bool first = true;
      for (const Entry& e : entries_) {
        if (!first && e.id <= prev) {
          throw validation_error("sparse dist ids must be strictly increasing");
        }
        if (e.id >= vocab_size_) {
          throw validation_error("sparse dist id " + std::to_string(e.id) +
                                 " out of range for vocab " + std::to_string(vocab_size_));
        }
        if (!(e.p >= 0.0) || !std::isfinite(e.p)) {
          throw validation_error("dist has a negative or non-finite probability");
        }
        sum += e.p;
        prev = e.id;
        first = false;
      }
    }
    if (std::abs(sum - 1.0) > kDistSumTolerance) {
      throw validation_error("dist mass sums to " + std::to_string(sum) + ", not 1");
    }
  }

  bool dense_ = true;
  std::vector<double> probs_;        // dense storage
  std::vector<Entry> entries_;       // sparse storage
  uint32_t vocab_size_ = 0;          // sparse only
};

inline Dist uniform_dist(const Vocab& vocab, bool exclude_special) {
  std::vector<double> p(vocab.size(), 0.0);
  uint32_t included = vocab.size();
  if (exclude_special) included -= static_cast<uint32_t>(vocab.special_count());
  if (included == 0) throw validation_error("uniform dist has empty support");
  const double mass = 1.0 / included;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    if (!exclude_special || !vocab.is_special(id)) p[id] = mass;
  }
  return Dist::dense(std::move(p));
}

inline Dist term_freq_dist(const FreqTable& freq) {
  if (freq.total == 0) throw validation_error("term-frequency dist has empty support");
  std::vector<double> p(freq.counts.size());
  const double inv_total = 1.0 / static_cast<double>(freq.total);
  for (size_t id = 0; id < freq.counts.size(); ++id) {
    p[id] = static_cast<double>(freq.counts[id]) * inv_total;
  }
  return Dist::dense(std::move(p));
}

// Mass 1-alpha on the original token, alpha spread evenly over every other
// id (including special ids unless excluded); alpha plays the role of the
// generator's prediction error rate.
inline Dist smoothed_one_hot(uint32_t original, double alpha, const Vocab& vocab,
                             bool exclude_special = false) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw validation_error("smoothed one-hot needs 0 < alpha < 1");
  }
  if (original >= vocab.size()) {
    throw validation_error("smoothed one-hot original id out of range");
  }
  if (vocab.size() < 2) throw validation_error("smoothed one-hot needs |V| >= 2");

  std::vector<double> p(vocab.size(), 0.0);
  uint32_t others = vocab.size() - 1;
  if (exclude_special) {
    others = 0;
    for (uint32_t id = 0; id < vocab.size(); ++id) {
      if (id != original && !vocab.is_special(id)) ++others;
    }
    if (others == 0) throw validation_error("smoothed one-hot has no replacement candidates");
  }
  const double spread = alpha / others;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    if (id == original) continue;
    if (exclude_special && vocab.is_special(id)) continue;
    p[id] = spread;
  }
  p[original] = 1.0 - alpha;
  return Dist::dense(std::move(p));
}

namespace detail {

// Softmax of weighted log-probabilities over the support described by
// (ids, logw); shared by temperature scaling and log interpolation.
template <typename Out>
inline void softmax_into(const std::vector<double>& logw, Out&& emit) {
  double max_l = -HUGE_VAL;
  for (double l : logw) max_l = std::max(max_l, l);
  double z = 0.0;
  std::vector<double> w(logw.size());
  for (size_t i = 0; i < logw.size(); ++i) {
    w[i] = std::exp(logw[i] - max_l);
    z += w[i];
  }
  for (size_t i = 0; i < logw.size(); ++i) emit(i, w[i] / z);
}

}  // namespace detail

// p'[t] proportional to p[t]^(1/T), renormalized over the support; zero
// entries stay zero and the storage kind is preserved. T = 1 is the identity.
inline Dist temperature_scale(const Dist& d, double temperature) {
  if (!(temperature > 0.0)) throw validation_error("temperature must be > 0");
  if (temperature == 1.0) return d;

  std::vector<uint32_t> ids;
  std::vector<double> logw;
  d.for_each([&](uint32_t id, double p) {
    ids.push_back(id);
    logw.push_back(std::log(p) / temperature);
  });
  if (ids.empty()) throw validation_error("temperature_scale on all-zero support");

  if (d.is_dense()) {
    std::vector<double> out(d.vocab_size(), 0.0);
    detail::softmax_into(logw, [&](size_t i, double p) { out[ids[i]] = p; });
    return Dist::dense(std::move(out));
  }
  std::vector<Dist::Entry> out(ids.size());
  detail::softmax_into(logw, [&](size_t i, double p) { out[i] = {ids[i], p}; });
  return Dist::sparse(std::move(out), d.vocab_size());
}

// Elementwise a^gamma * b^(1-gamma), renormalized over the intersection of
// supports. The endpoints bypass the power computation: gamma = 0 returns b
// and gamma = 1 returns a, exactly.
inline Dist log_interpolate(const Dist& a, const Dist& b, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw validation_error("interpolation coefficient must lie in [0, 1]");
  }
  if (a.vocab_size() != b.vocab_size()) {
    throw validation_error("log_interpolate endpoints cover different vocab sizes");
  }
  if (gamma == 0.0) return b;
  if (gamma == 1.0) return a;

  std::vector<uint32_t> ids;
  std::vector<double> logw;
  a.for_each([&](uint32_t id, double pa) {
    const double pb = b.prob(id);
    if (pb > 0.0) {
      ids.push_back(id);
      logw.push_back(gamma * std::log(pa) + (1.0 - gamma) * std::log(pb));
    }
  });
  if (ids.empty()) throw validation_error("log_interpolate: supports are disjoint");

  if (a.is_dense() && b.is_dense()) {
    std::vector<double> out(a.vocab_size(), 0.0);
    detail::softmax_into(logw, [&](size_t i, double p) { out[ids[i]] = p; });
    return Dist::dense(std::move(out));
  }
  std::vector<Dist::Entry> out(ids.size());
  detail::softmax_into(logw, [&](size_t i, double p) { out[i] = {ids[i], p}; });
  return Dist::sparse(std::move(out), a.vocab_size());
}

// Probability that a draw from d differs from the original token.
inline double expected_replacement_prob(const Dist& d, uint32_t original) {
  return 1.0 - d.prob(original);
}

}  // namespace rtdforge
