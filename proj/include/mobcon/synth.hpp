#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mobcon/events.hpp"
#include "mobcon/rng.hpp"

namespace mobcon {

// Draws ranks 0..n-1 with probability proportional to 1/(rank+1)^s.
// Rank 0 is the most popular.
class ZipfSampler {
 public:
  ZipfSampler(size_t n, double s) : cdf_(n) {
    double c = 0.0;
    for (size_t i = 0; i < n; ++i) {
      c += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cdf_[i] = c;
    }
    for (double& v : cdf_) v /= c;
  }

  size_t operator()(RngHandle& rng) const {
    const double u = rng.uniform();
    size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (cdf_[mid] < u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

 private:
  std::vector<double> cdf_;
};

struct SynthConfig {
  size_t n_agents = 2000;
  size_t n_venues = 500;
  int days = 90;
  double events_per_agent_per_day = 3.0;
  double agent_exponent = 1.0;  // how skewed agent activity is
  double venue_exponent = 1.0;  // how skewed venue popularity is
};

// Check-in stream with Zipf-distributed agent activity and venue
// popularity, event times uniform within each day.
inline EventStream synth_checkin_stream(const SynthConfig& cfg, RngHandle& rng) {
  EventStream out;
  // intern up front so ids are dense and stable regardless of draw order
  for (size_t i = 0; i < cfg.n_agents; ++i) out.agents.intern("a" + std::to_string(i));
  for (size_t i = 0; i < cfg.n_venues; ++i) out.venues.intern("v" + std::to_string(i));
  const ZipfSampler agent_z(cfg.n_agents, cfg.agent_exponent);
  const ZipfSampler venue_z(cfg.n_venues, cfg.venue_exponent);
  const size_t per_day = static_cast<size_t>(
      std::llround(cfg.events_per_agent_per_day * static_cast<double>(cfg.n_agents)));
  for (int d = 0; d < cfg.days; ++d) {
    for (size_t i = 0; i < per_day; ++i) {
      Event e;
      e.a = static_cast<uint32_t>(agent_z(rng));
      e.b = static_cast<uint32_t>(venue_z(rng));
      e.t = static_cast<int64_t>(d) * 86400 + static_cast<int64_t>(rng.uniform_below(86400));
      e.t_end = e.t;
      e.kind = EventKind::checkin;
      out.events.push_back(e);
    }
  }
  out.finalize();
  return out;
}

// Meeting stream with Zipf-distributed agent sociability; pairs are drawn
// independently per meeting, times uniform within each day, a nominal
// half-hour long.
inline EventStream synth_meeting_stream(const SynthConfig& cfg, RngHandle& rng) {
  EventStream out;
  for (size_t i = 0; i < cfg.n_agents; ++i) out.agents.intern("a" + std::to_string(i));
  const ZipfSampler agent_z(cfg.n_agents, cfg.agent_exponent);
  const size_t per_day = static_cast<size_t>(
      std::llround(cfg.events_per_agent_per_day * static_cast<double>(cfg.n_agents) / 2.0));
  for (int d = 0; d < cfg.days; ++d) {
    for (size_t i = 0; i < per_day; ++i) {
      uint32_t a = static_cast<uint32_t>(agent_z(rng));
      uint32_t b = static_cast<uint32_t>(agent_z(rng));
      while (b == a) b = static_cast<uint32_t>(agent_z(rng));
      if (b < a) std::swap(a, b);
      Event e;
      e.a = a;
      e.b = b;
      e.t = static_cast<int64_t>(d) * 86400 + static_cast<int64_t>(rng.uniform_below(84600));
      e.t_end = e.t + 1800;
      e.kind = EventKind::meeting;
      out.events.push_back(e);
    }
  }
  out.finalize();
  return out;
}

// Stationary uniform mixing: every meeting pairs two uniform agents. The
// daily contact structure has no hubs and no temporal drift.
inline EventStream synth_uniform_meeting_stream(size_t n_agents, int days,
                                                double meetings_per_agent_per_day,
                                                RngHandle& rng) {
  SynthConfig cfg;
  cfg.n_agents = n_agents;
  cfg.days = days;
  cfg.events_per_agent_per_day = meetings_per_agent_per_day;
  cfg.agent_exponent = 0.0;  // Zipf with s=0 is uniform
  return synth_meeting_stream(cfg, rng);
}

// Small random instance for property testing: a handful of agents, venues,
// check-ins and meetings over up to ten days.
inline EventStream random_micro_instance(RngHandle& rng) {
  EventStream out;
  const size_t n_agents = 2 + rng.uniform_below(7);
  const size_t n_venues = 1 + rng.uniform_below(4);
  for (size_t i = 0; i < n_agents; ++i) out.agents.intern("a" + std::to_string(i));
  for (size_t i = 0; i < n_venues; ++i) out.venues.intern("v" + std::to_string(i));
  const int64_t span = 10 * 86400;
  const size_t n_checkins = 5 + rng.uniform_below(36);
  for (size_t i = 0; i < n_checkins; ++i) {
    Event e;
    e.a = static_cast<uint32_t>(rng.uniform_below(n_agents));
    e.b = static_cast<uint32_t>(rng.uniform_below(n_venues));
    e.t = static_cast<int64_t>(rng.uniform_below(span));
    e.t_end = e.t;
    e.kind = EventKind::checkin;
    out.events.push_back(e);
  }
  const size_t n_meetings = rng.uniform_below(16);
  for (size_t i = 0; i < n_meetings && n_agents >= 2; ++i) {
    uint32_t a = static_cast<uint32_t>(rng.uniform_below(n_agents));
    uint32_t b = static_cast<uint32_t>(rng.uniform_below(n_agents));
    while (b == a) b = static_cast<uint32_t>(rng.uniform_below(n_agents));
    if (b < a) std::swap(a, b);
    Event e;
    e.a = a;
    e.b = b;
    e.t = static_cast<int64_t>(rng.uniform_below(span));
    e.t_end = e.t + 600;
    e.kind = EventKind::meeting;
    out.events.push_back(e);
  }
  out.finalize();
  return out;
}

}  // namespace mobcon
