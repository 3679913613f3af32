#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "mobcon/rng.hpp"

namespace mobcon {

constexpr int64_t kSecondsPerDay = 86400;

// Sampled stage lengths are floored here by resampling: a near-zero or
// negative normal draw would give a zero-length infectious period, which
// breaks reproduction-number accounting.
constexpr double kMinStageDays = 0.5;

// Population-average infectious duration (days) under the default stage
// parameters; used when deriving a transmission probability from R0.
constexpr double kMeanInfectiousDays = 9.55;

// Epidemiological constants of the transmission model. Defaults are the
// COVID-19 parameterization: incubation N(6,1) days, presymptomatic
// infectious N(5,1), in-care N(13,1), asymptomatic infectious N(18,1),
// 35% asymptomatic, 48 h venue infection window.
struct DiseaseParams {
  double beta = 0.75;  // per-exposure transmission probability

  double incubation_mean = 6.0;
  double incubation_std = 1.0;
  double presymptomatic_infectious_mean = 5.0;
  double presymptomatic_infectious_std = 1.0;
  double in_care_mean = 13.0;
  double in_care_std = 1.0;
  double asymptomatic_infectious_mean = 18.0;
  double asymptomatic_infectious_std = 1.0;

  double asymptomatic_fraction = 0.35;
  int64_t venue_window_seconds = 48 * 3600;

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    };
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + " must be >= 0");
    };
    prob(beta, "beta");
    prob(asymptomatic_fraction, "asymptomatic_fraction");
    positive(incubation_mean, "incubation_mean");
    positive(presymptomatic_infectious_mean, "presymptomatic_infectious_mean");
    positive(in_care_mean, "in_care_mean");
    positive(asymptomatic_infectious_mean, "asymptomatic_infectious_mean");
    nonneg(incubation_std, "incubation_std");
    nonneg(presymptomatic_infectious_std, "presymptomatic_infectious_std");
    nonneg(in_care_std, "in_care_std");
    nonneg(asymptomatic_infectious_std, "asymptomatic_infectious_std");
    if (venue_window_seconds <= 0)
      throw std::invalid_argument("venue_window_seconds must be > 0");
  }
};

// Per-infection stage lengths in days. in_care_days is absent for
// asymptomatic agents (they never enter care).
struct StageDurations {
  double incubation_days = 0.0;
  double infectious_days = 0.0;
  std::optional<double> in_care_days;
};

namespace detail {
inline double sample_stage(double mean, double stddev, RngHandle& rng) {
  double d;
  do {
    d = rng.normal(mean, stddev);
  } while (d < kMinStageDays);
  return d;
}
}  // namespace detail

// Symptomatic/asymptomatic is decided once, at infection time.
// Returns true for symptomatic.
inline bool assign_symptomatic(const DiseaseParams& params, RngHandle& rng) {
  return !rng.bernoulli(params.asymptomatic_fraction);
}

inline StageDurations sample_stage_durations(const DiseaseParams& params, bool symptomatic,
                                             RngHandle& rng) {
  StageDurations d;
  d.incubation_days = detail::sample_stage(params.incubation_mean, params.incubation_std, rng);
  if (symptomatic) {
    d.infectious_days = detail::sample_stage(params.presymptomatic_infectious_mean,
                                             params.presymptomatic_infectious_std, rng);
    d.in_care_days = detail::sample_stage(params.in_care_mean, params.in_care_std, rng);
  } else {
    d.infectious_days = detail::sample_stage(params.asymptomatic_infectious_mean,
                                             params.asymptomatic_infectious_std, rng);
  }
  return d;
}

// beta from R0 = c * beta * T.
inline double derive_beta(double r0, double avg_daily_contacts_c, double infectious_days_t) {
  if (!(avg_daily_contacts_c > 0.0)) throw std::invalid_argument("derive_beta: c must be > 0");
  if (!(infectious_days_t > 0.0)) throw std::invalid_argument("derive_beta: T must be > 0");
  if (r0 < 0.0) throw std::invalid_argument("derive_beta: R0 must be >= 0");
  const double beta = r0 / (avg_daily_contacts_c * infectious_days_t);
  if (beta > 1.0)
    throw std::invalid_argument("derive_beta: inconsistent inputs, R0/(c*T) exceeds 1");
  return beta;
}

// Agent disease progression: susceptible -> exposed -> infectious ->
// (in_care ->) recovered. Transitions are monotone; no state is revisited.
enum class Stage : uint8_t { susceptible, exposed, infectious, in_care, recovered };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::susceptible: return "susceptible";
    case Stage::exposed: return "exposed";
    case Stage::infectious: return "infectious";
    case Stage::in_care: return "in_care";
    case Stage::recovered: return "recovered";
  }
  return "?";
}

// Transition times are fixed when the agent is infected, so advancing is a
// pure function of (state, now). Exposed and in-care agents never transmit;
// only Stage::infectious does.
struct AgentState {
  Stage stage = Stage::susceptible;
  bool symptomatic = false;
  int64_t infectious_at = 0;       // exposed -> infectious
  int64_t infectious_ends_at = 0;  // infectious -> in_care (symptomatic) or recovered
  int64_t recovered_at = 0;        // final transition

  // Fill transition clocks for an infection at time t and enter exposed.
  void infect(int64_t t, bool symptomatic_flag, const StageDurations& d) {
    stage = Stage::exposed;
    symptomatic = symptomatic_flag;
    infectious_at = t + static_cast<int64_t>(std::llround(d.incubation_days * kSecondsPerDay));
    infectious_ends_at =
        infectious_at + static_cast<int64_t>(std::llround(d.infectious_days * kSecondsPerDay));
    recovered_at = symptomatic_flag
                       ? infectious_ends_at +
                             static_cast<int64_t>(std::llround(*d.in_care_days * kSecondsPerDay))
                       : infectious_ends_at;
  }

  // Seeds start infectious at t with no incubation.
  void seed(int64_t t, bool symptomatic_flag, const StageDurations& d) {
    stage = Stage::infectious;
    symptomatic = symptomatic_flag;
    infectious_at = t;
    infectious_ends_at = t + static_cast<int64_t>(std::llround(d.infectious_days * kSecondsPerDay));
    recovered_at = symptomatic_flag
                       ? infectious_ends_at +
                             static_cast<int64_t>(std::llround(*d.in_care_days * kSecondsPerDay))
                       : infectious_ends_at;
  }
};

// Apply all transitions due at or before `now`.
inline void advance_agent(AgentState& a, int64_t now) {
  if (a.stage == Stage::exposed && now >= a.infectious_at) a.stage = Stage::infectious;
  if (a.stage == Stage::infectious && now >= a.infectious_ends_at)
    a.stage = a.symptomatic ? Stage::in_care : Stage::recovered;
  if (a.stage == Stage::in_care && now >= a.recovered_at) a.stage = Stage::recovered;
}

}  // namespace mobcon
