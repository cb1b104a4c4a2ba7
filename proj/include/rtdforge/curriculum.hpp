#pragma once

// Difficulty schedules: map training progress u in [0,1] to either a sampling
// temperature T (annealed toward 1, i.e. toward the raw provider
// distribution) or a mixing/drop coefficient gamma (annealed toward 0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "rtdforge/config.hpp"
#include "rtdforge/error.hpp"

namespace rtdforge {

enum class ScheduleKind {
  ExpDecayT,      // T(u) = 1 + (T0 - 1) * exp(-u / tau)
  Constant,       // gamma(u) = gamma0
  PolyDecay,      // gamma(u) = gamma_max * (1 - u)^tau
  StepDecay,      // gamma(u) = gamma_max * (1 - floor(u * tau) / tau)
  ExpDecayGamma,  // gamma(u) = gamma_max * exp(-u / tau)
};

inline const char* schedule_kind_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::ExpDecayT: return "exp_decay_t";
    case ScheduleKind::Constant: return "constant";
    case ScheduleKind::PolyDecay: return "poly_decay";
    case ScheduleKind::StepDecay: return "step_decay";
    case ScheduleKind::ExpDecayGamma: return "exp_decay_gamma";
  }
  return "?";
}

class Schedule {
 public:
  static Schedule exp_decay_t(double t0 = 2.0, double tau = 0.1) {
    if (!(t0 >= 1.0)) throw config_error("schedule T0 must be >= 1");
    require_tau(tau);
    Schedule s(ScheduleKind::ExpDecayT);
    s.t0_ = t0;
    s.tau_ = tau;
    return s;
  }

  static Schedule constant(double gamma0) {
    require_unit("gamma0", gamma0);
    Schedule s(ScheduleKind::Constant);
    s.gamma0_ = gamma0;
    return s;
  }

  static Schedule poly_decay(double gamma_max, double tau) {
    require_unit("gamma_max", gamma_max);
    require_tau(tau);
    Schedule s(ScheduleKind::PolyDecay);
    s.gamma_max_ = gamma_max;
    s.tau_ = tau;
    return s;
  }

  static Schedule step_decay(double gamma_max, double tau) {
    require_unit("gamma_max", gamma_max);
    require_tau(tau);
    Schedule s(ScheduleKind::StepDecay);
    s.gamma_max_ = gamma_max;
    s.tau_ = tau;
    return s;
  }

  static Schedule exp_decay_gamma(double gamma_max, double tau) {
    require_unit("gamma_max", gamma_max);
    require_tau(tau);
    Schedule s(ScheduleKind::ExpDecayGamma);
    s.gamma_max_ = gamma_max;
    s.tau_ = tau;
    return s;
  }

  ScheduleKind kind() const { return kind_; }
  bool is_temperature() const { return kind_ == ScheduleKind::ExpDecayT; }

  double eval_temperature(double u) const {
    require_progress(u);
    if (!is_temperature()) {
      throw validation_error(std::string("schedule kind ") + schedule_kind_name(kind_) +
                             " does not produce a temperature");
    }
    return 1.0 + (t0_ - 1.0) * std::exp(-u / tau_);
  }

  double eval_gamma(double u) const {
    require_progress(u);
    double g;
    switch (kind_) {
      case ScheduleKind::Constant:
        return gamma0_;
      case ScheduleKind::PolyDecay:
        g = gamma_max_ * std::pow(1.0 - u, tau_);
        break;
      case ScheduleKind::StepDecay:
        g = gamma_max_ * (1.0 - std::floor(u * tau_) / tau_);
        break;
      case ScheduleKind::ExpDecayGamma:
        g = gamma_max_ * std::exp(-u / tau_);
        break;
      case ScheduleKind::ExpDecayT:
        throw validation_error("temperature schedule does not produce a mixing coefficient");
    }
    return std::clamp(g, 0.0, gamma_max_);
  }

  // Schedule value at u in the kind's native unit (T or gamma).
  double value(double u) const {
    return is_temperature() ? eval_temperature(u) : eval_gamma(u);
  }

  // Canonical parameter rendering, used for config hashing and reports.
  std::string descriptor() const {
    char buf[160];
    switch (kind_) {
      case ScheduleKind::ExpDecayT:
        std::snprintf(buf, sizeof buf, "exp_decay_t(T0=%.17g,tau=%.17g)", t0_, tau_);
        break;
      case ScheduleKind::Constant:
        std::snprintf(buf, sizeof buf, "constant(gamma0=%.17g)", gamma0_);
        break;
      case ScheduleKind::PolyDecay:
        std::snprintf(buf, sizeof buf, "poly_decay(gamma_max=%.17g,tau=%.17g)", gamma_max_, tau_);
        break;
      case ScheduleKind::StepDecay:
        std::snprintf(buf, sizeof buf, "step_decay(gamma_max=%.17g,tau=%.17g)", gamma_max_, tau_);
        break;
      case ScheduleKind::ExpDecayGamma:
        std::snprintf(buf, sizeof buf, "exp_decay_gamma(gamma_max=%.17g,tau=%.17g)", gamma_max_,
                      tau_);
        break;
    }
    return buf;
  }

  double t0() const { return t0_; }
  double tau() const { return tau_; }
  double gamma0() const { return gamma0_; }
  double gamma_max() const { return gamma_max_; }

 private:
  explicit Schedule(ScheduleKind kind) : kind_(kind) {}

  static void require_tau(double tau) {
    if (!(tau > 0.0)) throw config_error("schedule tau must be > 0");
  }
  static void require_unit(const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw config_error(std::string("schedule ") + name + " must lie in [0, 1]");
    }
  }
  static void require_progress(double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw validation_error("training progress must lie in [0, 1], got " + std::to_string(u));
    }
  }

  ScheduleKind kind_;
  double t0_ = 2.0;
  double tau_ = 0.1;
  double gamma0_ = 0.0;
  double gamma_max_ = 0.0;
};

inline double progress_from_counters(uint64_t step, uint64_t total_steps) {
  if (total_steps == 0) throw validation_error("total_steps must be > 0");
  if (step > total_steps) {
    throw validation_error("step " + std::to_string(step) + " exceeds total_steps " +
                           std::to_string(total_steps));
  }
  return static_cast<double>(step) / static_cast<double>(total_steps);
}

// A parsed curriculum file: the schedule plus the training horizon used to
// turn step or epoch counters into progress u.
struct CurriculumConfig {
  Schedule schedule = Schedule::exp_decay_t();
  std::optional<uint64_t> total_steps;
  std::optional<uint64_t> total_epochs;

  // Keys: kind, T0, gamma0, gamma_max, tau, total_steps, total_epochs.
  static CurriculumConfig parse(const KvConfig& kv) {
    CurriculumConfig out;
    const std::string kind = kv.get_string("kind");
    if (kind == "exp_decay_t") {
      out.schedule = Schedule::exp_decay_t(kv.get_double("T0", 2.0), kv.get_double("tau", 0.1));
    } else if (kind == "constant") {
      out.schedule = Schedule::constant(kv.get_double("gamma0"));
    } else if (kind == "poly_decay") {
      out.schedule = Schedule::poly_decay(kv.get_double("gamma_max"), kv.get_double("tau"));
    } else if (kind == "step_decay") {
      out.schedule = Schedule::step_decay(kv.get_double("gamma_max"), kv.get_double("tau"));
    } else if (kind == "exp_decay_gamma") {
      out.schedule = Schedule::exp_decay_gamma(kv.get_double("gamma_max"), kv.get_double("tau"));
    } else {
      throw config_error("unknown schedule kind '" + kind +
                         "' (expected exp_decay_t, constant, poly_decay, step_decay, or "
                         "exp_decay_gamma)");
    }
    if (auto v = kv.get_optional_u64("total_steps")) out.total_steps = *v;
    if (auto v = kv.get_optional_u64("total_epochs")) out.total_epochs = *v;
    return out;
  }

  static CurriculumConfig load(const std::string& path) {
    return parse(KvConfig::load(path));
  }
};

}  // namespace rtdforge
