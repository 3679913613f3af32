#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mobcon/disease.hpp"
#include "mobcon/errors.hpp"
#include "mobcon/events.hpp"
#include "mobcon/rng.hpp"

namespace mobcon {

enum class SimMode : uint8_t { venue, meeting };

inline const char* mode_name(SimMode m) { return m == SimMode::venue ? "venue" : "meeting"; }

// Contamination state of one venue (per cohort when cohorts are active).
// An infectious check-in stamps infected_until = now + window and records
// who stamped it; a later infectious check-in resets the clock. Susceptible
// check-ins strictly before infected_until draw one transmission Bernoulli.
struct VenueState {
  int64_t infected_until = 0;
  uint32_t setter = 0;  // agent whose check-in set/reset the window
};

enum class SourceKind : uint8_t { seed, agent, venue };

struct InfectionRecord {
  uint32_t infectee = 0;
  SourceKind source_kind = SourceKind::seed;
  uint32_t source = 0;     // infecting agent, or venue id for venue spread
  uint32_t via_agent = 0;  // agent responsible (venue spread: last setter)
  int64_t t = 0;
};

// Full transition timeline of one infected agent. Times are absolute;
// asymptomatic agents have recovered_at == infectious_ends_at.
struct StageEvent {
  uint32_t agent = 0;
  bool symptomatic = false;
  int64_t infected_at = 0;
  int64_t infectious_at = 0;
  int64_t infectious_ends_at = 0;
  int64_t recovered_at = 0;
};

// Event-throughput accounting for an intervention: social value is the
// fraction of mobility events that survived it.
struct CostReport {
  uint64_t input_events = 0;
  uint64_t output_events = 0;

  double social_value() const {
    if (input_events == 0) return 1.0;
    return static_cast<double>(output_events) / static_cast<double>(input_events);
  }
};

// Everything a run produces: who got infected, by whom, through what, and
// when each stage transition happened. Rosters are copied in so the log is
// self-describing after the input stream is gone.
struct TransmissionLog {
  Roster agents;
  Roster venues;
  size_t n_agents = 0;

  std::vector<uint32_t> seeds;
  std::vector<InfectionRecord> infections;  // seeds excluded
  std::vector<StageEvent> stages;           // seeds included, infection order

  int64_t t0 = 0;
  int horizon_days = 0;
  SimMode mode = SimMode::venue;
  uint64_t rng_seed = 0;
  uint64_t rng_stream = 0;
  DiseaseParams params;
  std::string intervention = "none";
  std::optional<CostReport> cost;

  size_t total_infected() const { return seeds.size() + infections.size(); }
};

struct SimulationConfig {
  SimMode mode = SimMode::venue;
  DiseaseParams params;
  int n_seeds = 10;
  uint64_t rng_seed = 0;
  uint64_t rng_stream = 0;

  // Explicit seed candidates. Set by callers whose population is defined by
  // a stream other than the one replayed, e.g. a run whose intervention
  // already removed events: the intervention changes mobility, not who
  // exists. Empty means "agents with at least one event in the stream".
  std::vector<uint32_t> seed_pool;
};

// Hook for interventions that act while the epidemic unfolds. admit() is
// called once per mode-relevant event in replay order, before the event
// takes effect; returning false erases the event from the run. infected_total
// counts everyone ever infected so far, seeds included.
class EventPolicy {
 public:
  virtual ~EventPolicy() = default;
  virtual bool admit(const Event& e, size_t infected_total) = 0;
};

namespace detail {

// Draw k distinct items from `pool` by partial Fisher-Yates. Order of the
// draw is part of the reproducible sequence.
inline std::vector<uint32_t> sample_without_replacement(std::vector<uint32_t> pool, size_t k,
                                                        RngHandle& rng) {
  std::vector<uint32_t> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

inline TransmissionLog run_simulation(const EventStream& stream, const SimulationConfig& cfg,
                                      EventPolicy* policy) {
  cfg.params.validate();
  if (cfg.n_seeds < 0) throw SeedError("n_seeds must be >= 0");

  RngHandle master(cfg.rng_seed, cfg.rng_stream);
  RngHandle seed_rng = master.split("seeds");
  RngHandle disease_rng = master.split("disease");
  RngHandle trans_rng = master.split("transmission");

  TransmissionLog log;
  log.agents = stream.agents;
  log.venues = stream.venues;
  log.n_agents = stream.n_agents();
  log.t0 = stream.t0;
  log.horizon_days = stream.horizon_days;
  log.mode = cfg.mode;
  log.rng_seed = cfg.rng_seed;
  log.rng_stream = cfg.rng_stream;
  log.params = cfg.params;
  if (policy) log.cost = CostReport{};

  std::vector<AgentState> state(stream.n_agents());

  // Seeds: infectious at t0, drawn uniformly from agents that appear in the
  // stream at all (or from the caller's explicit pool). Silent agents can
  // never transmit or be reached.
  if (cfg.n_seeds > 0) {
    std::vector<uint32_t> eligible =
        cfg.seed_pool.empty() ? stream.active_agents() : cfg.seed_pool;
    if (static_cast<size_t>(cfg.n_seeds) > eligible.size())
      throw SeedError("n_seeds exceeds number of agents with events (" +
                      std::to_string(eligible.size()) + ")");
    log.seeds = sample_without_replacement(std::move(eligible), cfg.n_seeds, seed_rng);
    for (uint32_t agent : log.seeds) {
      const bool symptomatic = assign_symptomatic(cfg.params, disease_rng);
      const StageDurations d = sample_stage_durations(cfg.params, symptomatic, disease_rng);
      state[agent].seed(stream.t0, symptomatic, d);
      StageEvent se;
      se.agent = agent;
      se.symptomatic = symptomatic;
      se.infected_at = stream.t0;
      se.infectious_at = state[agent].infectious_at;
      se.infectious_ends_at = state[agent].infectious_ends_at;
      se.recovered_at = state[agent].recovered_at;
      log.stages.push_back(se);
    }
  }

  size_t infected_total = log.seeds.size();

  auto infect = [&](uint32_t agent, SourceKind kind, uint32_t source, uint32_t via, int64_t now) {
    const bool symptomatic = assign_symptomatic(cfg.params, disease_rng);
    const StageDurations d = sample_stage_durations(cfg.params, symptomatic, disease_rng);
    state[agent].infect(now, symptomatic, d);
    log.infections.push_back({agent, kind, source, via, now});
    StageEvent se;
    se.agent = agent;
    se.symptomatic = symptomatic;
    se.infected_at = now;
    se.infectious_at = state[agent].infectious_at;
    se.infectious_ends_at = state[agent].infectious_ends_at;
    se.recovered_at = state[agent].recovered_at;
    log.stages.push_back(se);
    ++infected_total;
  };

  const int cohort_k = stream.cohort_k > 0 ? stream.cohort_k : 1;
  auto venue_key = [&](uint32_t venue, uint32_t agent) -> uint64_t {
    const uint32_t cohort =
        stream.cohort_k > 0 ? stream.cohort_of[agent] : 0;
    return static_cast<uint64_t>(venue) * cohort_k + cohort;
  };
  std::unordered_map<uint64_t, VenueState> venue_state;

  const EventKind relevant = cfg.mode == SimMode::venue ? EventKind::checkin : EventKind::meeting;

  for (const Event& e : stream.events) {
    if (e.kind != relevant) continue;
    if (log.cost) ++log.cost->input_events;
    if (policy && !policy->admit(e, infected_total)) continue;
    if (log.cost) ++log.cost->output_events;

    const int64_t now = e.t;
    if (cfg.mode == SimMode::venue) {
      AgentState& ag = state[e.a];
      advance_agent(ag, now);
      if (ag.stage == Stage::in_care) continue;  // in care = not actually visiting
      VenueState& cell = venue_state[venue_key(e.b, e.a)];
      if (ag.stage == Stage::infectious) {
        cell.infected_until = now + cfg.params.venue_window_seconds;
        cell.setter = e.a;
      } else if (ag.stage == Stage::susceptible && now < cell.infected_until) {
        if (trans_rng.bernoulli(cfg.params.beta))
          infect(e.a, SourceKind::venue, e.b, cell.setter, now);
      }
    } else {
      AgentState& pa = state[e.a];
      AgentState& pb = state[e.b];
      advance_agent(pa, now);
      advance_agent(pb, now);
      if (pa.stage == Stage::infectious && pb.stage == Stage::susceptible) {
        if (trans_rng.bernoulli(cfg.params.beta)) infect(e.b, SourceKind::agent, e.a, e.a, now);
      } else if (pb.stage == Stage::infectious && pa.stage == Stage::susceptible) {
        if (trans_rng.bernoulli(cfg.params.beta)) infect(e.a, SourceKind::agent, e.b, e.b, now);
      }
    }
  }

  return log;
}

}  // namespace detail

// Venue-mediated spread over check-in events. Meetings in the stream are
// ignored in this mode.
inline TransmissionLog run_venue_simulation(const EventStream& stream, const SimulationConfig& cfg,
                                            EventPolicy* policy = nullptr) {
  SimulationConfig c = cfg;
  c.mode = SimMode::venue;
  return detail::run_simulation(stream, c, policy);
}

// Direct person-to-person spread over meeting events: one transmission
// Bernoulli per meeting, at its start time, when exactly one side is
// infectious and the other susceptible.
inline TransmissionLog run_meeting_simulation(const EventStream& stream,
                                              const SimulationConfig& cfg,
                                              EventPolicy* policy = nullptr) {
  SimulationConfig c = cfg;
  c.mode = SimMode::meeting;
  return detail::run_simulation(stream, c, policy);
}

inline TransmissionLog run_simulation(const EventStream& stream, const SimulationConfig& cfg,
                                      EventPolicy* policy = nullptr) {
  return detail::run_simulation(stream, cfg, policy);
}

}  // namespace mobcon
