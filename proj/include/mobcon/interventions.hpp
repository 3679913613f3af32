#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mobcon/errors.hpp"
#include "mobcon/rng.hpp"
#include "mobcon/sim.hpp"
#include "mobcon/stream_ops.hpp"

namespace mobcon {

enum class TargetMode : uint8_t { top, random };

inline const char* target_name(TargetMode m) { return m == TargetMode::top ? "top" : "random"; }

// A rewritten stream plus the throughput cost of rewriting it.
struct InterventionResult {
  EventStream stream;
  CostReport cost;
  std::string description = "none";
};

namespace detail {
inline size_t fraction_to_count(double fraction, size_t n, const char* what) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument(std::string(what) + ": fraction must be in [0,1]");
  return std::min(n, static_cast<size_t>(std::ceil(fraction * static_cast<double>(n))));
}

inline InterventionResult filter_events(const EventStream& in, const auto& keep_event,
                                        std::string description) {
  InterventionResult out;
  out.stream = in;
  out.stream.events.clear();
  out.cost.input_events = in.events.size();
  for (const Event& e : in.events) {
    if (!keep_event(e)) continue;
    out.stream.events.push_back(e);
  }
  out.cost.output_events = out.stream.events.size();
  out.stream.finalize();
  // Closing part of the stream must not shrink the simulated period.
  out.stream.horizon_days = in.horizon_days;
  out.stream.t0 = in.events.empty() ? out.stream.t0 : in.t0;
  out.description = std::move(description);
  return out;
}
}  // namespace detail

// Remove every check-in at the given venues. Meetings are untouched and the
// rosters keep their size, so results stay comparable with the baseline.
inline InterventionResult close_venue_set(const EventStream& in,
                                          const std::vector<uint32_t>& venue_ids,
                                          std::string description = "close_venue_set") {
  std::unordered_set<uint32_t> closed(venue_ids.begin(), venue_ids.end());
  return detail::filter_events(
      in,
      [&](const Event& e) {
        return e.kind != EventKind::checkin || closed.find(e.b) == closed.end();
      },
      std::move(description));
}

// Close ceil(fraction * n_venues) venues, either the most popular ones or a
// uniform random draw.
inline InterventionResult close_venues(const EventStream& in, double fraction, TargetMode mode,
                                       RngHandle& rng) {
  const size_t k = detail::fraction_to_count(fraction, in.n_venues(), "close_venues");
  std::vector<uint32_t> chosen;
  if (mode == TargetMode::top) {
    std::vector<uint32_t> ranked = popularity_ranking(in);
    chosen.assign(ranked.begin(), ranked.begin() + k);
  } else {
    std::vector<uint32_t> pool(in.n_venues());
    for (uint32_t i = 0; i < pool.size(); ++i) pool[i] = i;
    chosen = mobcon::detail::sample_without_replacement(std::move(pool), k, rng);
  }
  std::ostringstream desc;
  desc << "close_venues(" << target_name(mode) << "," << fraction << ")";
  return close_venue_set(in, chosen, desc.str());
}

// Remove every event a protected agent takes part in, as if they stayed
// home for the whole period. Rosters keep their size.
inline InterventionResult protect_agent_set(const EventStream& in,
                                            const std::vector<uint32_t>& agent_ids,
                                            std::string description = "protect_agent_set") {
  std::unordered_set<uint32_t> shielded(agent_ids.begin(), agent_ids.end());
  return detail::filter_events(
      in,
      [&](const Event& e) {
        if (shielded.find(e.a) != shielded.end()) return false;
        return e.kind != EventKind::meeting || shielded.find(e.b) == shielded.end();
      },
      std::move(description));
}

// Shield ceil(fraction * n_agents) agents, either the most active ones or a
// uniform random draw.
inline InterventionResult protect_agents(const EventStream& in, double fraction, TargetMode mode,
                                         RngHandle& rng) {
  const size_t k = detail::fraction_to_count(fraction, in.n_agents(), "protect_agents");
  std::vector<uint32_t> chosen;
  if (mode == TargetMode::top) {
    std::vector<uint32_t> ranked = activity_ranking(in);
    chosen.assign(ranked.begin(), ranked.begin() + k);
  } else {
    std::vector<uint32_t> pool(in.n_agents());
    for (uint32_t i = 0; i < pool.size(); ++i) pool[i] = i;
    chosen = mobcon::detail::sample_without_replacement(std::move(pool), k, rng);
  }
  std::ostringstream desc;
  desc << "protect_agents(" << target_name(mode) << "," << fraction << ")";
  return protect_agent_set(in, chosen, desc.str());
}

// Label each agent with a uniform random cohort in [0, k).
inline EventStream assign_cohorts(const EventStream& in, int k, RngHandle& rng) {
  if (k < 1) throw std::invalid_argument("assign_cohorts: k must be >= 1");
  EventStream out = in;
  out.cohort_k = k;
  out.cohort_of.resize(in.n_agents());
  for (size_t i = 0; i < out.cohort_of.size(); ++i)
    out.cohort_of[i] = static_cast<uint32_t>(rng.uniform_below(static_cast<uint64_t>(k)));
  return out;
}

// Enforce the cohort split on the stream: meetings across cohorts cannot
// happen and are removed. Check-ins all stay; the venue engine keeps venue
// infection state per (venue, cohort), so cohorts never contaminate each
// other's shifts.
inline InterventionResult apply_cohorts(const EventStream& in) {
  if (in.cohort_k <= 0) throw std::invalid_argument("apply_cohorts: stream has no cohorts");
  std::ostringstream desc;
  desc << "cohorts(" << in.cohort_k << ")";
  return detail::filter_events(
      in,
      [&](const Event& e) {
        return e.kind != EventKind::meeting || in.cohort_of[e.a] == in.cohort_of[e.b];
      },
      desc.str());
}

// Blanket mobility reduction that switches on mid-epidemic: once the
// ever-infected share reaches trigger_fraction, every event inside the
// following duration_days window is dropped with probability drop_prob.
// duration_days <= 0 keeps it active to the end of the stream.
struct LockdownSpec {
  double drop_prob = 0.0;
  double trigger_fraction = 0.0;
  int duration_days = 0;
};

class UniformLockdown final : public EventPolicy {
 public:
  UniformLockdown(LockdownSpec spec, size_t n_agents, RngHandle rng)
      : spec_(spec), n_agents_(n_agents), rng_(std::move(rng)) {
    if (!(spec.drop_prob >= 0.0 && spec.drop_prob <= 1.0))
      throw std::invalid_argument("lockdown: drop_prob must be in [0,1]");
    if (!(spec.trigger_fraction >= 0.0 && spec.trigger_fraction <= 1.0))
      throw std::invalid_argument("lockdown: trigger_fraction must be in [0,1]");
  }

  bool admit(const Event& e, size_t infected_total) override {
    if (!active_ && !expired_) {
      const double share =
          n_agents_ == 0 ? 0.0
                         : static_cast<double>(infected_total) / static_cast<double>(n_agents_);
      if (share >= spec_.trigger_fraction) {
        active_ = true;
        started_at_ = e.t;
      }
    }
    if (active_ && spec_.duration_days > 0 &&
        e.t > started_at_ + static_cast<int64_t>(spec_.duration_days) * 86400) {
      active_ = false;
      expired_ = true;  // one-shot policy, never re-arms
    }
    if (!active_) return true;
    return !rng_.bernoulli(spec_.drop_prob);
  }

  bool triggered() const { return active_ || expired_; }
  int64_t started_at() const { return started_at_; }

 private:
  LockdownSpec spec_;
  size_t n_agents_ = 0;
  RngHandle rng_;
  bool active_ = false;
  bool expired_ = false;
  int64_t started_at_ = 0;
};

inline UniformLockdown lockdown_policy(const LockdownSpec& spec, size_t n_agents, RngHandle rng) {
  return UniformLockdown(spec, n_agents, std::move(rng));
}

// Fractional reduction in outcome x relative to baseline y. Can go negative
// when the intervention made things worse; that is information, not an error.
inline double health_value(double x, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("health_value: baseline must be > 0");
  return 1.0 - x / y;
}

// Uniform description of an intervention request, as read from a config
// file. The runner turns it into the transforms/policies above.
struct InterventionSpec {
  std::string kind = "none";  // none|lockdown|close_venues|protect_agents|cohorts
  double drop_prob = 0.0;
  double trigger_fraction = 0.0;
  int duration_days = 0;
  std::string target = "top";  // close_venues/protect_agents: top|random
  double fraction = 0.0;
  int k = 2;  // cohorts
};

}  // namespace mobcon
