#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mobcon/disease.hpp"
#include "mobcon/events.hpp"
#include "mobcon/rng.hpp"
#include "mobcon/sim.hpp"

namespace mobcon {

// Well-mixed baseline: no venues, no structure, just floor(N*c/2) uniform
// random pairings per day. Comparable to a mobility run with the same N and
// average contact rate.
struct HomogeneousConfig {
  size_t n_agents = 1000;
  int days = 120;
  double contacts_per_day = 2.0;  // c: average daily contacts per agent
  int n_seeds = 10;
  uint64_t rng_seed = 0;
  uint64_t rng_stream = 0;
};

// Average daily person contacts implied by a meeting stream. Each meeting
// contributes a contact to both sides.
inline double estimate_c(const EventStream& stream) {
  if (stream.n_agents() == 0 || stream.horizon_days <= 0)
    throw std::invalid_argument("estimate_c: empty stream");
  uint64_t meetings = 0;
  for (const Event& e : stream.events) meetings += e.kind == EventKind::meeting;
  return 2.0 * static_cast<double>(meetings) /
         (static_cast<double>(stream.n_agents()) * static_cast<double>(stream.horizon_days));
}

// The materialized pairing schedule: day r (1-based) hosts its contacts at
// t = r*86400, so infections can appear on day 1 at the earliest.
inline EventStream homogeneous_stream(const HomogeneousConfig& cfg, RngHandle& rng) {
  if (cfg.n_agents < 2) throw std::invalid_argument("homogeneous_stream: need >= 2 agents");
  if (cfg.days < 1) throw std::invalid_argument("homogeneous_stream: days must be >= 1");
  if (!(cfg.contacts_per_day >= 0.0))
    throw std::invalid_argument("homogeneous_stream: c must be >= 0");

  EventStream out;
  for (size_t i = 0; i < cfg.n_agents; ++i) out.agents.intern("h" + std::to_string(i));
  const size_t pairs_per_day = static_cast<size_t>(
      std::floor(static_cast<double>(cfg.n_agents) * cfg.contacts_per_day / 2.0));
  for (int d = 1; d <= cfg.days; ++d) {
    const int64_t t = static_cast<int64_t>(d) * kSecondsPerDay;
    for (size_t i = 0; i < pairs_per_day; ++i) {
      uint32_t a = static_cast<uint32_t>(rng.uniform_below(cfg.n_agents));
      uint32_t b = static_cast<uint32_t>(rng.uniform_below(cfg.n_agents));
      while (b == a) b = static_cast<uint32_t>(rng.uniform_below(cfg.n_agents));
      if (b < a) std::swap(a, b);
      Event e;
      e.a = a;
      e.b = b;
      e.t = t;
      e.t_end = t;
      e.kind = EventKind::meeting;
      out.events.push_back(e);
    }
  }
  out.finalize();
  // day 0 belongs to the frame even though pairings start on day 1
  out.t0 = 0;
  out.horizon_days = cfg.days + 1;
  return out;
}

inline TransmissionLog run_homogeneous(const HomogeneousConfig& cfg, const DiseaseParams& params) {
  RngHandle master(cfg.rng_seed, cfg.rng_stream);
  RngHandle pair_rng = master.split("pairings");
  const EventStream stream = homogeneous_stream(cfg, pair_rng);
  SimulationConfig sc;
  sc.mode = SimMode::meeting;
  sc.params = params;
  sc.n_seeds = cfg.n_seeds;
  sc.rng_seed = cfg.rng_seed;
  sc.rng_stream = cfg.rng_stream;
  return run_meeting_simulation(stream, sc);
}

}  // namespace mobcon
