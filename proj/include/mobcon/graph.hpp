#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mobcon/disease.hpp"
#include "mobcon/errors.hpp"
#include "mobcon/events.hpp"
#include "mobcon/rng.hpp"
#include "mobcon/sim.hpp"

namespace mobcon {

// Static contact network: nodes are agents, an edge connects agents who met
// at least once, weighted by their average meetings per day.
struct PersonGraph {
  Roster agents;
  std::vector<std::vector<std::pair<uint32_t, double>>> adj;  // sorted by neighbor
  int days = 0;

  double node_strength(uint32_t u) const {
    double s = 0;
    for (const auto& [v, w] : adj[u]) s += w;
    return s;
  }
};

// Agent-venue network: edges connect an agent to venues they visited,
// weighted by average daily visits.
struct BipartiteGraph {
  Roster agents;
  Roster venues;
  std::vector<std::vector<std::pair<uint32_t, double>>> agent_adj;  // agent -> (venue, w)
  std::vector<std::vector<std::pair<uint32_t, double>>> venue_adj;  // venue -> (agent, w)
  int days = 0;

  double agent_strength(uint32_t a) const {
    double s = 0;
    for (const auto& [v, w] : agent_adj[a]) s += w;
    return s;
  }
};

inline PersonGraph build_person_graph(const EventStream& stream) {
  PersonGraph g;
  g.agents = stream.agents;
  g.days = std::max(1, stream.horizon_days);
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> counts;
  for (const Event& e : stream.events)
    if (e.kind == EventKind::meeting)
      ++counts[{std::min(e.a, e.b), std::max(e.a, e.b)}];
  g.adj.resize(g.agents.size());
  for (const auto& [pair, c] : counts) {
    const double w = static_cast<double>(c) / g.days;
    g.adj[pair.first].push_back({pair.second, w});
    g.adj[pair.second].push_back({pair.first, w});
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

inline BipartiteGraph build_bipartite_graph(const EventStream& stream) {
  BipartiteGraph g;
  g.agents = stream.agents;
  g.venues = stream.venues;
  g.days = std::max(1, stream.horizon_days);
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> counts;  // (agent, venue)
  for (const Event& e : stream.events)
    if (e.kind == EventKind::checkin) ++counts[{e.a, e.b}];
  g.agent_adj.resize(g.agents.size());
  g.venue_adj.resize(g.venues.size());
  for (const auto& [pair, c] : counts) {
    const double w = static_cast<double>(c) / g.days;
    g.agent_adj[pair.first].push_back({pair.second, w});
    g.venue_adj[pair.second].push_back({pair.first, w});
  }
  for (auto& nb : g.agent_adj) std::sort(nb.begin(), nb.end());
  for (auto& nb : g.venue_adj) std::sort(nb.begin(), nb.end());
  return g;
}

struct GraphSimConfig {
  DiseaseParams params;
  int n_seeds = 10;
  int rounds = 120;  // one round = one day
  uint64_t rng_seed = 0;
  uint64_t rng_stream = 0;
};

namespace detail {

// Whole-day stage clock used by the round-based simulation; durations are
// rounded to days, never below one.
struct NodeClock {
  int infected_round = -1;  // -1 = never infected
  bool seeded = false;
  bool symptomatic = false;
  int infectious_from = 0;
  int infectious_until = 0;  // exclusive
  int recovered_from = 0;

  bool infected() const { return infected_round >= 0; }

  Stage stage_at(int r) const {
    if (!infected()) return Stage::susceptible;
    if (r >= recovered_from) return Stage::recovered;
    if (r >= infectious_until) return symptomatic ? Stage::in_care : Stage::recovered;
    if (r >= infectious_from) return Stage::infectious;
    return Stage::exposed;
  }

  void set(int round, bool seed, bool sym, const StageDurations& d) {
    infected_round = round;
    seeded = seed;
    symptomatic = sym;
    const int inc = seed ? 0 : std::max<int>(1, std::llround(d.incubation_days));
    const int inf = std::max<int>(1, std::llround(d.infectious_days));
    infectious_from = round + inc;
    infectious_until = infectious_from + inf;
    recovered_from =
        sym ? infectious_until + std::max<int>(1, std::llround(*d.in_care_days))
            : infectious_until;
  }

  StageEvent to_stage_event(uint32_t agent) const {
    StageEvent se;
    se.agent = agent;
    se.symptomatic = symptomatic;
    se.infected_at = static_cast<int64_t>(infected_round) * kSecondsPerDay;
    se.infectious_at = static_cast<int64_t>(infectious_from) * kSecondsPerDay;
    se.infectious_ends_at = static_cast<int64_t>(infectious_until) * kSecondsPerDay;
    se.recovered_at = static_cast<int64_t>(recovered_from) * kSecondsPerDay;
    return se;
  }
};

inline double edge_probability(double beta, double w) {
  return 1.0 - std::pow(1.0 - beta, w);
}

inline std::vector<uint32_t> draw_graph_seeds(std::vector<uint32_t> eligible, int n_seeds,
                                              RngHandle& rng) {
  if (n_seeds < 0) throw SeedError("n_seeds must be >= 0");
  if (static_cast<size_t>(n_seeds) > eligible.size())
    throw SeedError("n_seeds exceeds number of connected nodes (" +
                    std::to_string(eligible.size()) + ")");
  return sample_without_replacement(std::move(eligible), n_seeds, rng);
}

}  // namespace detail

// Synchronous round-based contagion on the person graph: each round every
// infectious node tries each susceptible neighbor once with probability
// 1-(1-beta)^w. Susceptibility is judged against the start-of-round state,
// and a node infected this round cannot be re-infected by a later edge.
inline TransmissionLog run_graph_simulation(const PersonGraph& g, const GraphSimConfig& cfg) {
  cfg.params.validate();
  RngHandle master(cfg.rng_seed, cfg.rng_stream);
  RngHandle seed_rng = master.split("seeds");
  RngHandle disease_rng = master.split("disease");
  RngHandle trans_rng = master.split("transmission");

  TransmissionLog log;
  log.agents = g.agents;
  log.n_agents = g.agents.size();
  log.t0 = 0;
  log.horizon_days = cfg.rounds + 1;
  log.mode = SimMode::meeting;
  log.rng_seed = cfg.rng_seed;
  log.rng_stream = cfg.rng_stream;
  log.params = cfg.params;

  std::vector<detail::NodeClock> clock(g.agents.size());

  std::vector<uint32_t> eligible;
  for (uint32_t u = 0; u < g.adj.size(); ++u)
    if (!g.adj[u].empty()) eligible.push_back(u);
  log.seeds = detail::draw_graph_seeds(eligible, cfg.n_seeds, seed_rng);
  for (uint32_t s : log.seeds) {
    const bool sym = assign_symptomatic(cfg.params, disease_rng);
    clock[s].set(0, true, sym, sample_stage_durations(cfg.params, sym, disease_rng));
    log.stages.push_back(clock[s].to_stage_event(s));
  }

  for (int r = 1; r <= cfg.rounds; ++r) {
    std::vector<std::pair<uint32_t, uint32_t>> new_infections;  // (victim, source)
    std::vector<char> hit(g.agents.size(), 0);
    for (uint32_t u = 0; u < g.adj.size(); ++u) {
      if (clock[u].stage_at(r - 1) != Stage::infectious) continue;
      for (const auto& [v, w] : g.adj[u]) {
        if (clock[v].stage_at(r - 1) != Stage::susceptible || hit[v]) continue;
        if (trans_rng.bernoulli(detail::edge_probability(cfg.params.beta, w))) {
          hit[v] = 1;
          new_infections.push_back({v, u});
        }
      }
    }
    for (const auto& [v, u] : new_infections) {
      const bool sym = assign_symptomatic(cfg.params, disease_rng);
      clock[v].set(r, false, sym, sample_stage_durations(cfg.params, sym, disease_rng));
      log.infections.push_back(
          {v, SourceKind::agent, u, u, static_cast<int64_t>(r) * kSecondsPerDay});
      log.stages.push_back(clock[v].to_stage_event(v));
    }
  }
  return log;
}

// Same discipline on the bipartite graph. Venues hold infection for two
// rounds. Ordering within a round: venues infected in earlier rounds expose
// their susceptible visitors first, then today's infectious agents stamp
// venues; an agent-to-venue stamp never pays off in the round it happens.
inline TransmissionLog run_graph_simulation(const BipartiteGraph& g, const GraphSimConfig& cfg) {
  cfg.params.validate();
  RngHandle master(cfg.rng_seed, cfg.rng_stream);
  RngHandle seed_rng = master.split("seeds");
  RngHandle disease_rng = master.split("disease");
  RngHandle trans_rng = master.split("transmission");

  TransmissionLog log;
  log.agents = g.agents;
  log.venues = g.venues;
  log.n_agents = g.agents.size();
  log.t0 = 0;
  log.horizon_days = cfg.rounds + 1;
  log.mode = SimMode::venue;
  log.rng_seed = cfg.rng_seed;
  log.rng_stream = cfg.rng_stream;
  log.params = cfg.params;

  std::vector<detail::NodeClock> clock(g.agents.size());
  std::vector<int> venue_until(g.venues.size(), -1);  // last round still infected
  std::vector<uint32_t> venue_setter(g.venues.size(), 0);

  std::vector<uint32_t> eligible;
  for (uint32_t u = 0; u < g.agent_adj.size(); ++u)
    if (!g.agent_adj[u].empty()) eligible.push_back(u);
  log.seeds = detail::draw_graph_seeds(eligible, cfg.n_seeds, seed_rng);
  for (uint32_t s : log.seeds) {
    const bool sym = assign_symptomatic(cfg.params, disease_rng);
    clock[s].set(0, true, sym, sample_stage_durations(cfg.params, sym, disease_rng));
    log.stages.push_back(clock[s].to_stage_event(s));
  }

  for (int r = 1; r <= cfg.rounds; ++r) {
    // venue -> agent, against venues stamped in previous rounds
    std::vector<std::pair<uint32_t, std::pair<uint32_t, uint32_t>>> new_inf;  // victim,(venue,via)
    std::vector<char> hit(g.agents.size(), 0);
    for (uint32_t v = 0; v < g.venue_adj.size(); ++v) {
      if (venue_until[v] < r) continue;
      for (const auto& [a, w] : g.venue_adj[v]) {
        if (clock[a].stage_at(r - 1) != Stage::susceptible || hit[a]) continue;
        if (trans_rng.bernoulli(detail::edge_probability(cfg.params.beta, w))) {
          hit[a] = 1;
          new_inf.push_back({a, {v, venue_setter[v]}});
        }
      }
    }
    // agent -> venue: infectious visitors stamp the venue for two rounds
    for (uint32_t a = 0; a < g.agent_adj.size(); ++a) {
      if (clock[a].stage_at(r - 1) != Stage::infectious) continue;
      for (const auto& [v, w] : g.agent_adj[a]) {
        if (trans_rng.bernoulli(std::min(1.0, w))) {
          venue_until[v] = r + 2;
          venue_setter[v] = a;
        }
      }
    }
    for (const auto& [a, src] : new_inf) {
      const bool sym = assign_symptomatic(cfg.params, disease_rng);
      clock[a].set(r, false, sym, sample_stage_durations(cfg.params, sym, disease_rng));
      log.infections.push_back({a, SourceKind::venue, src.first, src.second,
                                static_cast<int64_t>(r) * kSecondsPerDay});
      log.stages.push_back(clock[a].to_stage_event(a));
    }
  }
  return log;
}

// Staying home with per-meeting skip probability alpha collapses, on the
// static graph, to deleting the whole edge with probability 1-(1-alpha)^w.
inline PersonGraph graph_lockdown(const PersonGraph& g, double alpha, RngHandle& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("graph_lockdown: alpha must be in [0,1]");
  PersonGraph out;
  out.agents = g.agents;
  out.days = g.days;
  out.adj.resize(g.adj.size());
  for (uint32_t u = 0; u < g.adj.size(); ++u) {
    for (const auto& [v, w] : g.adj[u]) {
      if (u > v) continue;  // decide each undirected edge once
      const double p_remove = 1.0 - std::pow(1.0 - alpha, w);
      if (rng.bernoulli(p_remove)) continue;
      out.adj[u].push_back({v, w});
      out.adj[v].push_back({u, w});
    }
  }
  for (auto& nb : out.adj) std::sort(nb.begin(), nb.end());
  return out;
}

// Protecting the most active people removes the ceil(fraction*N) nodes of
// highest strength (sum of incident weights) from the graph.
inline PersonGraph graph_protect_top(const PersonGraph& g, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("graph_protect_top: fraction must be in [0,1]");
  const size_t n = g.agents.size();
  const size_t k = std::min(n, static_cast<size_t>(std::ceil(fraction * static_cast<double>(n))));
  std::vector<uint32_t> ids(n);
  for (uint32_t i = 0; i < n; ++i) ids[i] = i;
  std::vector<double> strength(n);
  for (uint32_t i = 0; i < n; ++i) strength[i] = g.node_strength(i);
  std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    if (strength[a] != strength[b]) return strength[a] > strength[b];
    return g.agents.name(a) < g.agents.name(b);
  });
  std::vector<char> removed(n, 0);
  for (size_t i = 0; i < k; ++i) removed[ids[i]] = 1;

  PersonGraph out;
  out.agents = g.agents;
  out.days = g.days;
  out.adj.resize(n);
  for (uint32_t u = 0; u < n; ++u) {
    if (removed[u]) continue;
    for (const auto& [v, w] : g.adj[u])
      if (!removed[v]) out.adj[u].push_back({v, w});
  }
  return out;
}

// Random k-way split of the population; edges across groups are cut.
inline PersonGraph graph_cohorts(const PersonGraph& g, int k, RngHandle& rng) {
  if (k < 1) throw std::invalid_argument("graph_cohorts: k must be >= 1");
  std::vector<uint32_t> cohort(g.agents.size());
  for (auto& c : cohort) c = static_cast<uint32_t>(rng.uniform_below(static_cast<uint64_t>(k)));
  PersonGraph out;
  out.agents = g.agents;
  out.days = g.days;
  out.adj.resize(g.adj.size());
  for (uint32_t u = 0; u < g.adj.size(); ++u)
    for (const auto& [v, w] : g.adj[u])
      if (cohort[u] == cohort[v]) out.adj[u].push_back({v, w});
  return out;
}

// Head-to-head of the event replay and its static-graph abstraction on the
// same stream: median final size of each over an ensemble, their relative
// gap, and the Jaccard similarity of the sets of agents ever infected.
struct ModelComparison {
  double mobility_final = 0.0;
  double graph_final = 0.0;
  double relative_diff = 0.0;
  double jaccard = 0.0;
};

inline ModelComparison compare_with_mobility(const EventStream& stream, SimMode mode,
                                             const DiseaseParams& params, int n_seeds,
                                             int ensemble_size, uint64_t rng_seed) {
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  std::vector<double> mob_final, gr_final;
  std::set<uint32_t> mob_set, gr_set;
  for (int i = 0; i < ensemble_size; ++i) {
    SimulationConfig sc;
    sc.mode = mode;
    sc.params = params;
    sc.n_seeds = n_seeds;
    sc.rng_seed = rng_seed;
    sc.rng_stream = static_cast<uint64_t>(i);
    const TransmissionLog mlog = run_simulation(stream, sc);
    mob_final.push_back(static_cast<double>(mlog.total_infected()));
    for (const StageEvent& se : mlog.stages) mob_set.insert(se.agent);

    GraphSimConfig gc;
    gc.params = params;
    gc.n_seeds = n_seeds;
    gc.rounds = std::max(1, stream.horizon_days - 1);
    gc.rng_seed = rng_seed;
    gc.rng_stream = static_cast<uint64_t>(i);
    const TransmissionLog glog = mode == SimMode::venue
                                     ? run_graph_simulation(build_bipartite_graph(stream), gc)
                                     : run_graph_simulation(build_person_graph(stream), gc);
    gr_final.push_back(static_cast<double>(glog.total_infected()));
    for (const StageEvent& se : glog.stages) gr_set.insert(se.agent);
  }

  ModelComparison out;
  out.mobility_final = median(mob_final);
  out.graph_final = median(gr_final);
  out.relative_diff = out.mobility_final > 0
                          ? std::abs(out.graph_final - out.mobility_final) / out.mobility_final
                          : 0.0;
  size_t inter = 0;
  for (uint32_t a : mob_set) inter += gr_set.count(a);
  const size_t uni = mob_set.size() + gr_set.size() - inter;
  out.jaccard = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  return out;
}

}  // namespace mobcon
