// Release gate: one line per acceptance criterion, nonzero exit when any
// fails. Each criterion is checked against an independent oracle or a stated
// tolerance, never against the engine's own output. Pass criterion numbers as
// arguments to run a subset, e.g. `mobcon_acceptance 6 7`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mobcon/mobcon.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mobcon;

namespace {

int hardware_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 2 : static_cast<int>(n);
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

struct Result {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

Result pass(std::string detail) { return {true, false, std::move(detail)}; }
Result fail(std::string detail) { return {false, false, std::move(detail)}; }
Result skip(std::string detail) { return {false, true, std::move(detail)}; }

struct Gate {
  int failures = 0;

  template <typename Fn>
  void run(int id, const std::string& name, double budget_seconds, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.pass && budget_seconds > 0.0 && secs > budget_seconds)
      r = fail(r.detail + "; exceeded " + fmt("%.0f", budget_seconds) + " s budget");
    const char* verdict = r.skipped ? "SKIPPED" : (r.pass ? "PASS" : "FAIL");
    std::printf("CRITERION %2d %s — %s: %s (%.1f s)\n", id, verdict, name.c_str(),
                r.detail.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass && !r.skipped) ++failures;
  }
};

// Random instance spanning the full criterion envelope: up to 50 agents, 20
// venues, 30 days, with both check-ins and meetings.
EventStream micro_instance(RngHandle& rng) {
  EventStream s;
  const size_t n_agents = 2 + rng.uniform_below(49);
  const size_t n_venues = 1 + rng.uniform_below(20);
  const int days = 1 + static_cast<int>(rng.uniform_below(30));
  const int64_t span = static_cast<int64_t>(days) * kSecondsPerDay;
  for (size_t i = 0; i < n_agents; ++i) s.agents.intern("a" + std::to_string(i));
  for (size_t i = 0; i < n_venues; ++i) s.venues.intern("v" + std::to_string(i));
  const size_t n_checkins = 1 + rng.uniform_below(150);
  for (size_t i = 0; i < n_checkins; ++i) {
    Event e;
    e.a = static_cast<uint32_t>(rng.uniform_below(n_agents));
    e.b = static_cast<uint32_t>(rng.uniform_below(n_venues));
    e.t = static_cast<int64_t>(rng.uniform_below(span));
    e.t_end = e.t;
    e.kind = EventKind::checkin;
    s.events.push_back(e);
  }
  const size_t n_meetings = rng.uniform_below(80);
  for (size_t i = 0; i < n_meetings; ++i) {
    Event e;
    e.a = static_cast<uint32_t>(rng.uniform_below(n_agents));
    do {
      e.b = static_cast<uint32_t>(rng.uniform_below(n_agents));
    } while (e.b == e.a);
    e.t = static_cast<int64_t>(rng.uniform_below(span));
    e.t_end = e.t + 1 + static_cast<int64_t>(rng.uniform_below(7200));
    e.kind = EventKind::meeting;
    s.events.push_back(e);
  }
  s.finalize();
  return s;
}

DiseaseParams degenerate(double beta) {
  DiseaseParams p;
  p.beta = beta;
  p.incubation_std = 0.0;
  p.presymptomatic_infectious_std = 0.0;
  p.in_care_std = 0.0;
  p.asymptomatic_infectious_std = 0.0;
  p.asymptomatic_fraction = 0.0;
  return p;
}

bool close_or_both_missing(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= tol;
}

bool same_series(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!close_or_both_missing(a[i], b[i], tol)) return false;
  return true;
}

double median_of(std::vector<double> xs) { return percentile(std::move(xs), 50.0); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------
// 1. Conservation, single infection, monotone counts, and causality replay on
//    1,000 random micro-instances in both modes.
Result criterion1() {
  const int instances = 1000;
  for (int inst = 0; inst < instances; ++inst) {
    RngHandle gen(50000 + inst);
    const EventStream s = micro_instance(gen);
    const auto eligible = s.active_agents();
    SimulationConfig c;
    c.mode = (inst % 2 == 0) ? SimMode::venue : SimMode::meeting;
    c.params.beta = 0.05 + 0.009 * static_cast<double>(gen.uniform_below(100));
    c.n_seeds = 1 + static_cast<int>(gen.uniform_below(std::min<uint64_t>(eligible.size(), 3)));
    c.rng_seed = 7000;
    c.rng_stream = static_cast<uint64_t>(inst);
    const TransmissionLog log = run_simulation(s, c);

    const std::string replay = oracles::replay_violations(s, log);
    if (!replay.empty())
      return fail("instance " + std::to_string(inst) + ": " + replay);

    if (log.seeds.size() != static_cast<size_t>(c.n_seeds))
      return fail("instance " + std::to_string(inst) + ": seed count mismatch");
    std::set<uint32_t> infected(log.seeds.begin(), log.seeds.end());
    if (infected.size() != log.seeds.size())
      return fail("instance " + std::to_string(inst) + ": duplicate seed");
    for (const auto& r : log.infections)
      if (!infected.insert(r.infectee).second)
        return fail("instance " + std::to_string(inst) + ": agent " +
                    std::to_string(r.infectee) + " infected twice");
    if (log.total_infected() != infected.size() || infected.size() > s.n_agents())
      return fail("instance " + std::to_string(inst) + ": head count not conserved");

    const DailySeries ds = daily_series(log);
    for (size_t d = 1; d < ds.total.size(); ++d)
      if (ds.total[d] < ds.total[d - 1])
        return fail("instance " + std::to_string(inst) + ": cumulative count decreased on day " +
                    std::to_string(d));
    if (!ds.total.empty() && ds.total.back() > static_cast<double>(log.total_infected()))
      return fail("instance " + std::to_string(inst) + ": daily total exceeds final count");
  }
  return pass(std::to_string(instances) + " instances, both modes, all invariants hold");
}

// ---------------------------------------------------------------------------
// 2. Null dynamics: beta=0 leaves only the seeds infected, and so do a
//    drop-everything lockdown and a close-every-venue intervention.
Result criterion2() {
  ExperimentConfig base;
  base.dataset.format = "synth_checkins";
  base.dataset.n_agents = 300;
  base.dataset.n_venues = 60;
  base.dataset.days = 40;
  base.dataset.events_per_agent_per_day = 3.0;
  base.dataset.dataset_seed = 11;
  base.model.mode = SimMode::venue;
  base.seeds.n_seeds = 8;
  base.seeds.rng_seed = 99;
  base.seeds.n_runs = 5;

  auto all_final_equal = [](const ExperimentResult& r, double want) {
    return std::all_of(r.run.final_totals.begin(), r.run.final_totals.end(),
                       [&](double x) { return x == want; });
  };

  {
    ExperimentConfig c = base;
    c.model.params.beta = 0.0;
    if (!all_final_equal(run_experiment(c), 8.0))
      return fail("beta=0 venue run infected more than the seeds");
  }
  {
    ExperimentConfig c = base;
    c.dataset.format = "synth_meetings";
    c.model.mode = SimMode::meeting;
    c.model.params.beta = 0.0;
    if (!all_final_equal(run_experiment(c), 8.0))
      return fail("beta=0 meeting run infected more than the seeds");
  }
  {
    ExperimentConfig c = base;
    c.model.params.beta = 0.75;
    c.intervention.kind = "lockdown";
    c.intervention.drop_prob = 1.0;
    c.intervention.trigger_fraction = 0.0;
    c.intervention.duration_days = 0;
    const ExperimentResult r = run_experiment(c);
    if (!all_final_equal(r, 8.0))
      return fail("full-horizon drop-all lockdown still produced secondary infections");
    if (r.social_value != 0.0)
      return fail("drop-all lockdown should have social value 0, got " +
                  fmt("%.4f", r.social_value));
  }
  {
    ExperimentConfig c = base;
    c.model.params.beta = 0.75;
    c.intervention.kind = "close_venues";
    c.intervention.fraction = 1.0;
    c.intervention.target = "top";
    const ExperimentResult r = run_experiment(c);
    if (!all_final_equal(r, 8.0))
      return fail("closing every venue still produced secondary infections");
    if (r.social_value != 0.0)
      return fail("closing every venue should have social value 0, got " +
                  fmt("%.4f", r.social_value));
  }
  return pass("beta=0 (both modes), drop-all lockdown, and full closure all end at 8 seeds");
}

// ---------------------------------------------------------------------------
// 3. Monte-Carlo final-size distribution matches the exhaustive outcome tree
//    on a fixed 5-agent, 3-venue, 3-day instance, in both modes.
Result criterion3() {
  EventStream s;
  s.add_checkin("a0", "v0", 1000);
  s.add_checkin("a1", "v0", 5000);
  s.add_checkin("a2", "v1", 9000);
  s.add_checkin("a1", "v1", 86400);
  s.add_checkin("a3", "v0", 90000);
  s.add_checkin("a4", "v2", 95000);
  s.add_checkin("a2", "v2", 172800);
  s.add_checkin("a4", "v0", 180000);
  s.add_meeting("a0", "a3", 2000, 2600);
  s.add_meeting("a1", "a2", 50000, 50600);
  s.add_meeting("a3", "a4", 91000, 91600);
  s.add_meeting("a0", "a2", 175000, 175600);
  s.finalize();

  const double beta = 0.5;
  const int runs = 10000;
  std::string detail;
  for (SimMode mode : {SimMode::venue, SimMode::meeting}) {
    const auto want =
        oracles::OutcomeTree(s, beta, DiseaseParams{}.venue_window_seconds, mode)
            .final_size_distribution();
    std::map<size_t, double> got;
    for (int st = 0; st < runs; ++st) {
      SimulationConfig c;
      c.mode = mode;
      c.params = degenerate(beta);
      c.n_seeds = 1;
      c.rng_seed = 400;
      c.rng_stream = static_cast<uint64_t>(st);
      got[run_simulation(s, c).total_infected()] += 1.0 / runs;
    }
    double tv = 0.0;
    for (const auto& [k, p] : want) tv += std::abs(p - (got.count(k) ? got.at(k) : 0.0));
    for (const auto& [k, p] : got)
      if (!want.count(k)) tv += p;
    tv /= 2.0;
    detail += std::string(mode == SimMode::venue ? "venue" : "meeting") + " TV=" +
              fmt("%.4f", tv) + " ";
    if (tv > 0.02)
      return fail(detail + "(limit 0.02)");
  }
  return pass(detail + "(limit 0.02, 10000 runs per mode)");
}

// ---------------------------------------------------------------------------
// 4. The kd-tree proximity join returns exactly the meetings of the
//    brute-force all-pairs oracle on 100 random GPS instances.
Result criterion4() {
  const double radius_m = 8.0;
  const int64_t min_duration_s = 60;
  const int64_t step_s = 15;
  int with_meetings = 0;
  size_t total_meetings = 0;
  for (int inst = 0; inst < 100; ++inst) {
    RngHandle gen(32000 + inst);
    const size_t n_agents = 2 + gen.uniform_below(19);
    const size_t per_agent_cap = std::max<size_t>(1, 1000 / n_agents);
    std::vector<AgentTrack> tracks;
    size_t total_points = 0;
    for (size_t a = 0; a < n_agents; ++a) {
      AgentTrack tr;
      tr.agent = "g" + std::to_string(a);
      const size_t n_pts = 1 + gen.uniform_below(per_agent_cap);
      double x = gen.uniform() * 60.0;
      double y = gen.uniform() * 60.0;
      int64_t t = static_cast<int64_t>(gen.uniform_below(600));
      for (size_t p = 0; p < n_pts && total_points < 1000; ++p) {
        tr.points.push_back({x, y, t});
        ++total_points;
        x += (gen.uniform() - 0.5) * 12.0;
        y += (gen.uniform() - 0.5) * 12.0;
        t += 5 + static_cast<int64_t>(gen.uniform_below(120));
      }
      tracks.push_back(std::move(tr));
    }
    const auto got =
        oracles::meeting_set(extract_meetings_proximity(tracks, radius_m, min_duration_s, step_s));
    const auto want = oracles::meeting_set(
        oracles::meetings_proximity_bruteforce(tracks, radius_m, min_duration_s, step_s));
    if (got != want)
      return fail("instance " + std::to_string(inst) + ": kd-tree join disagrees (" +
                  std::to_string(got.size()) + " vs " + std::to_string(want.size()) +
                  " meetings)");
    if (!want.empty()) ++with_meetings;
    total_meetings += want.size();
  }
  if (with_meetings < 20)
    return fail("only " + std::to_string(with_meetings) +
                " of 100 instances produced meetings; test is too vacuous");
  return pass("100 instances exact, " + std::to_string(total_meetings) + " meetings across " +
              std::to_string(with_meetings) + " instances");
}

// ---------------------------------------------------------------------------
// 5. Weighted-edge probabilities: closed form to 1e-12 and Monte-Carlo
//    frequencies within 0.01 at 1e5 trials, for both transmission and
//    lockdown edge removal.
Result criterion5() {
  double worst = 0.0;
  for (int bi = 0; bi <= 100; ++bi) {
    const double beta = bi / 100.0;
    for (int wi = 0; wi <= 80; ++wi) {
      const double w = wi / 10.0;
      const double independent = (w == 0.0) ? 0.0 : 1.0 - std::exp(w * std::log1p(-beta));
      worst = std::max(worst, std::abs(detail::edge_probability(beta, w) - independent));
    }
  }
  if (worst > 1e-12)
    return fail("closed-form deviation " + fmt("%.3g", worst) + " exceeds 1e-12");

  const int trials = 100000;
  const struct {
    double p;
    double w;
  } cases[] = {{0.3, 1.7}, {0.7, 0.6}, {0.5, 2.5}};

  double worst_mc = 0.0;
  for (const auto& c : cases) {
    PersonGraph g;
    g.agents.intern("x");
    g.agents.intern("y");
    g.adj = {{{1, c.w}}, {{0, c.w}}};
    g.days = 2;
    GraphSimConfig gc;
    gc.params = degenerate(c.p);
    gc.n_seeds = 1;
    gc.rounds = 1;
    gc.rng_seed = 9100;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      gc.rng_stream = static_cast<uint64_t>(t);
      hits += run_graph_simulation(g, gc).total_infected() == 2 ? 1 : 0;
    }
    const double err =
        std::abs(static_cast<double>(hits) / trials - detail::edge_probability(c.p, c.w));
    worst_mc = std::max(worst_mc, err);
    if (err > 0.01)
      return fail("transmission MC off by " + fmt("%.4f", err) + " at beta=" + fmt("%.2f", c.p) +
                  " w=" + fmt("%.2f", c.w));
  }

  const struct {
    double alpha;
    double w;
  } removals[] = {{0.3, 1.7}, {0.8, 0.5}, {0.5, 2.0}};
  for (const auto& c : removals) {
    PersonGraph g;
    g.agents.intern("x");
    g.agents.intern("y");
    g.adj = {{{1, c.w}}, {{0, c.w}}};
    g.days = 2;
    int removed = 0;
    for (int t = 0; t < trials; ++t) {
      RngHandle rng(9200, static_cast<uint64_t>(t));
      removed += graph_lockdown(g, c.alpha, rng).adj[0].empty() ? 1 : 0;
    }
    const double err =
        std::abs(static_cast<double>(removed) / trials - detail::edge_probability(c.alpha, c.w));
    worst_mc = std::max(worst_mc, err);
    if (err > 0.01)
      return fail("edge-removal MC off by " + fmt("%.4f", err) + " at alpha=" +
                  fmt("%.2f", c.alpha) + " w=" + fmt("%.2f", c.w));
  }
  return pass("closed form within " + fmt("%.2g", worst) + ", MC within " + fmt("%.4f", worst_mc) +
              " at 100000 trials");
}

// Shared heavy-tail meeting stream for criteria 6 and 7.
const EventStream& zipf_meeting_stream() {
  static const EventStream s = [] {
    SynthConfig cfg;
    cfg.n_agents = 2000;
    cfg.n_venues = 300;
    cfg.days = 60;
    cfg.events_per_agent_per_day = 2.0;
    cfg.agent_exponent = 1.4;
    RngHandle rng(20260816);
    return synth_meeting_stream(cfg, rng);
  }();
  return s;
}

// ---------------------------------------------------------------------------
// 6. Ensemble-median final size is non-decreasing in beta on a 2,000-agent
//    heavy-tailed stream.
Result criterion6() {
  const EventStream& s = zipf_meeting_stream();
  SeedConfig seeds;
  seeds.n_seeds = 10;
  seeds.rng_seed = 606;
  seeds.n_runs = 10;
  const double betas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> medians;
  for (double beta : betas) {
    DiseaseParams p;
    p.beta = beta;
    EnsembleRun er =
        run_ensemble(s, SimMode::meeting, p, seeds, std::nullopt, hardware_workers());
    medians.push_back(median_of(er.final_totals));
  }
  std::string detail = "medians";
  for (double m : medians) detail += " " + fmt("%.0f", m);
  if (medians.front() != static_cast<double>(seeds.n_seeds))
    return fail(detail + "; beta=0 median is not the seed count");
  for (size_t i = 1; i < medians.size(); ++i)
    if (medians[i] < medians[i - 1])
      return fail(detail + "; decreased between beta=" + fmt("%.2f", betas[i - 1]) + " and " +
                  fmt("%.2f", betas[i]));
  return pass(detail + " over beta 0..1");
}

// ---------------------------------------------------------------------------
// 7. Against the homogeneous benchmark on the same stream: larger final size,
//    later active-infection peak, but a smaller maximum secondary-infection
//    count than the mobility model. Ordering only.
Result criterion7() {
  const EventStream& s = zipf_meeting_stream();
  DiseaseParams p;
  p.beta = 0.5;
  SeedConfig seeds;
  seeds.n_seeds = 10;
  seeds.rng_seed = 606;
  seeds.n_runs = 10;
  const EnsembleRun mob =
      run_ensemble(s, SimMode::meeting, p, seeds, std::nullopt, hardware_workers());

  HomogeneousConfig hc;
  hc.n_agents = s.n_agents();
  hc.days = std::max(1, s.horizon_days - 1);
  hc.contacts_per_day = estimate_c(s);
  hc.n_seeds = seeds.n_seeds;
  hc.rng_seed = seeds.rng_seed;
  std::vector<double> homo_final, homo_peak_day, homo_max_secondary;
  std::vector<double> mob_max_secondary;
  for (int i = 0; i < seeds.n_runs; ++i) {
    hc.rng_stream = static_cast<uint64_t>(i);
    const TransmissionLog log = run_homogeneous(hc, p);
    homo_final.push_back(static_cast<double>(log.total_infected()));
    const DailySeries ds = daily_series(log);
    size_t peak = 0;
    for (size_t d = 1; d < ds.active.size(); ++d)
      if (ds.active[d] > ds.active[peak]) peak = d;
    homo_peak_day.push_back(static_cast<double>(peak));
    homo_max_secondary.push_back(static_cast<double>(max_secondary_infections(log)));
    mob_max_secondary.push_back(static_cast<double>(max_secondary_infections(mob.logs[i])));
  }

  const double mob_final = median_of(mob.final_totals);
  const double homo_final_med = median_of(homo_final);
  const double mob_peak = median_of(mob.peak_days);
  const double homo_peak = median_of(homo_peak_day);
  const double mob_sec = median_of(mob_max_secondary);
  const double homo_sec = median_of(homo_max_secondary);
  const std::string detail = "final " + fmt("%.0f", homo_final_med) + " vs " +
                             fmt("%.0f", mob_final) + ", peak day " + fmt("%.1f", homo_peak) +
                             " vs " + fmt("%.1f", mob_peak) + ", max secondary " +
                             fmt("%.0f", homo_sec) + " vs " + fmt("%.0f", mob_sec) +
                             " (homogeneous vs mobility)";
  if (!(homo_final_med > mob_final))
    return fail(detail + "; homogeneous final size should exceed mobility's");
  if (!(homo_peak > mob_peak))
    return fail(detail + "; homogeneous peak should come later");
  if (!(mob_sec > homo_sec))
    return fail(detail + "; mobility should show the larger superspreading maximum");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 8. Targeting the most active ten percent beats a random ten percent, for
//    both agent protection and venue closure, by ensemble-median health value.
Result criterion8() {
  ExperimentConfig base;
  base.dataset.format = "synth_checkins";
  base.dataset.n_agents = 2000;
  base.dataset.n_venues = 300;
  base.dataset.days = 60;
  base.dataset.events_per_agent_per_day = 2.0;
  base.dataset.agent_exponent = 1.4;
  base.dataset.venue_exponent = 1.2;
  base.dataset.dataset_seed = 88;
  base.model.mode = SimMode::venue;
  base.model.params.beta = 0.5;
  base.seeds.n_seeds = 10;
  base.seeds.rng_seed = 808;
  base.seeds.n_runs = 10;

  auto health_of = [&](const char* kind, const char* target) {
    ExperimentConfig c = base;
    c.intervention.kind = kind;
    c.intervention.fraction = 0.10;
    c.intervention.target = target;
    const ExperimentResult r = run_experiment(c, hardware_workers());
    if (!r.health) throw std::runtime_error("health value missing for " + std::string(kind));
    return *r.health;
  };

  const double protect_top = health_of("protect_agents", "top");
  const double protect_random = health_of("protect_agents", "random");
  const double close_top = health_of("close_venues", "top");
  const double close_random = health_of("close_venues", "random");
  const std::string detail = "protect top " + fmt("%.3f", protect_top) + " vs random " +
                             fmt("%.3f", protect_random) + "; close top " + fmt("%.3f", close_top) +
                             " vs random " + fmt("%.3f", close_random);
  if (!(protect_top > protect_random))
    return fail(detail + "; activity-ranked protection should win strictly");
  if (!(close_top > close_random))
    return fail(detail + "; popularity-ranked closure should win strictly");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 9. On a stationary uniform stream the mobility model and the aggregated
//    contact-graph model agree on median final size within ten percent.
Result criterion9() {
  RngHandle rng(909);
  const EventStream s = synth_uniform_meeting_stream(600, 60, 2.0, rng);
  DiseaseParams p;
  p.beta = 0.09;
  const ModelComparison mc = compare_with_mobility(s, SimMode::meeting, p, 10, 10, 909);
  const std::string detail = "mobility " + fmt("%.0f", mc.mobility_final) + " vs graph " +
                             fmt("%.0f", mc.graph_final) + ", relative diff " +
                             fmt("%.3f", mc.relative_diff);
  if (!(mc.relative_diff < 0.10))
    return fail(detail + " (limit 0.10)");
  return pass(detail + " (limit 0.10)");
}

// ---------------------------------------------------------------------------
// 10. Published-corpus behavior on the NYC check-in table, when provided via
//     MOBCON_NYC_CHECKINS. Every ensemble must finish within five minutes.
Result criterion10() {
  const char* env = std::getenv("MOBCON_NYC_CHECKINS");
  if (env == nullptr || *env == '\0')
    return skip("set MOBCON_NYC_CHECKINS to the prepared check-in table to enable");

  DatasetConfig d;
  d.path = env;
  d.format = "checkins";
  const EventStream nyc = load_dataset(d, SimMode::venue);
  const double n = static_cast<double>(nyc.n_agents());
  const int workers = hardware_workers();
  SeedConfig seeds;
  seeds.n_seeds = 10;
  seeds.rng_seed = 1021;
  seeds.n_runs = 10;

  double slowest = 0.0;
  auto timed_ensemble = [&](const EventStream& s, const DiseaseParams& p,
                            const std::optional<LockdownSpec>& ld,
                            const std::vector<uint32_t>& pool = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    EnsembleRun er = run_ensemble(s, SimMode::venue, p, seeds, ld, workers, pool);
    slowest = std::max(
        slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return er;
  };

  DiseaseParams p75;
  p75.beta = 0.75;
  DiseaseParams p25;
  p25.beta = 0.25;
  const EnsembleRun base75 = timed_ensemble(nyc, p75, std::nullopt);
  const EnsembleRun base25 = timed_ensemble(nyc, p25, std::nullopt);
  const double attack75 = median_of(base75.final_totals) / n;
  const double attack25 = median_of(base25.final_totals) / n;
  std::string detail = "attack " + fmt("%.2f", attack75) + " @0.75, " + fmt("%.2f", attack25) +
                       " @0.25";
  if (attack75 < 0.58 || attack75 > 0.78)
    return fail(detail + "; beta=0.75 attack rate outside 0.68 +/- 0.10");
  if (attack25 < 0.24 || attack25 > 0.44)
    return fail(detail + "; beta=0.25 attack rate outside 0.34 +/- 0.10");

  RngHandle irng(1021);
  const InterventionResult closed = close_venues(nyc, 0.01, TargetMode::top, irng);
  const double removed = 1.0 - closed.cost.social_value();
  const EnsembleRun closed_run =
      timed_ensemble(closed.stream, p75, std::nullopt, nyc.active_agents());
  const double reduction = 1.0 - median_of(closed_run.final_totals) / median_of(base75.final_totals);
  detail += "; top-1% closure removes " + fmt("%.2f", removed) + " of check-ins, cuts infections " +
            fmt("%.2f", reduction);
  if (removed < 0.15 || removed > 0.25)
    return fail(detail + "; removed share outside 0.20 +/- 0.05");
  if (reduction < 0.40)
    return fail(detail + "; infection reduction below 0.40");

  LockdownSpec ld;
  ld.drop_prob = 0.8;
  ld.trigger_fraction = 0.05;
  ld.duration_days = 15;
  const EnsembleRun locked = timed_ensemble(nyc, p75, ld);
  const double delay = median_of(locked.peak_days) - median_of(base75.peak_days);
  detail += "; lockdown delays peak " + fmt("%.1f", delay) + " d";
  if (delay < 8.0 || delay > 14.0)
    return fail(detail + "; peak delay outside 8..14 days");

  std::vector<double> top_share;
  for (const TransmissionLog& log : base75.logs)
    top_share.push_back(share_of_top_venues(infections_per_venue(log), 0.0005));
  const double share = median_of(top_share);
  detail += "; top 0.05% venues carry " + fmt("%.2f", share);
  if (share < 0.35 || share > 0.65)
    return fail(detail + "; top-venue share outside 0.50 +/- 0.15");

  const auto tcmp = std::chrono::steady_clock::now();
  const ModelComparison mc = compare_with_mobility(nyc, SimMode::venue, p75, 10, 10, 1021);
  slowest = std::max(
      slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - tcmp).count());
  detail += "; graph jaccard " + fmt("%.2f", mc.jaccard);
  if (mc.jaccard < 0.60)
    return fail(detail + "; top-2% agent agreement below 0.60");

  detail += "; slowest ensemble " + fmt("%.0f", slowest) + " s";
  if (slowest > 300.0)
    return fail(detail + "; an ensemble exceeded five minutes");
  return pass(detail);
}

// ---------------------------------------------------------------------------
// 11. Metric pipeline against brute-force oracles on 100 random inputs:
//     growth rate, reproduction number, rolling average, Gaussian smoothing,
//     and percentiles.
std::vector<double> growth_oracle(const std::vector<double>& fresh) {
  std::vector<double> out(fresh.size(), missing());
  for (size_t d = 1; d < fresh.size(); ++d)
    if (fresh[d - 1] != 0.0) out[d] = fresh[d] / fresh[d - 1];
  return out;
}

std::vector<double> gaussian_oracle(const std::vector<double>& xs, double sigma) {
  const int reach = static_cast<int>(std::ceil(4.0 * sigma));
  const int n = static_cast<int>(xs.size());
  std::vector<double> out(xs.size(), missing());
  for (int i = 0; i < n; ++i) {
    if (std::isnan(xs[i])) continue;
    double acc = 0.0, mass = 0.0;
    for (int j = std::max(0, i - reach); j <= std::min(n - 1, i + reach); ++j) {
      if (std::isnan(xs[j])) continue;
      const double k = std::exp(-0.5 * (i - j) * (i - j) / (sigma * sigma));
      acc += k * xs[j];
      mass += k;
    }
    out[i] = acc / mass;
  }
  return out;
}

Result criterion11() {
  int inputs = 0;
  for (int i = 0; i < 40; ++i, ++inputs) {
    RngHandle gen(11000 + i);
    const EventStream s = micro_instance(gen);
    const auto eligible = s.active_agents();
    SimulationConfig c;
    c.mode = (i % 2 == 0) ? SimMode::venue : SimMode::meeting;
    c.params.beta = 0.6;
    c.n_seeds = 1 + static_cast<int>(gen.uniform_below(std::min<uint64_t>(eligible.size(), 3)));
    c.rng_seed = 7100;
    c.rng_stream = static_cast<uint64_t>(i);
    const TransmissionLog log = run_simulation(s, c);

    const DailySeries ds = daily_series(log);
    const oracles::DailyOracle want = oracles::daily_series_bruteforce(log);
    if (!same_series(ds.total, want.total, 0.0) || !same_series(ds.active, want.active, 0.0) ||
        !same_series(ds.fresh, want.fresh, 0.0))
      return fail("log " + std::to_string(i) + ": daily series disagrees with oracle");
    if (!same_series(growth_rate(ds.fresh), growth_oracle(want.fresh), 1e-12))
      return fail("log " + std::to_string(i) + ": growth rate disagrees with oracle");
    if (!same_series(reproduction_number(log), oracles::reproduction_number_bruteforce(log), 1e-9))
      return fail("log " + std::to_string(i) + ": reproduction number disagrees with oracle");
  }

  for (int i = 0; i < 60; ++i, ++inputs) {
    RngHandle gen(12000 + i);
    const size_t len = 1 + gen.uniform_below(60);
    std::vector<double> xs(len);
    for (double& x : xs)
      x = gen.bernoulli(0.15) ? missing() : (gen.uniform() - 0.5) * 100.0;

    for (int window : {1, 3, 7})
      if (!same_series(rolling_average(xs, window), oracles::rolling_average_bruteforce(xs, window),
                       1e-9))
        return fail("series " + std::to_string(i) + ": rolling average disagrees, window " +
                    std::to_string(window));
    for (double sigma : {0.7, 2.0})
      if (!same_series(gaussian_smooth(xs, sigma), gaussian_oracle(xs, sigma), 1e-9))
        return fail("series " + std::to_string(i) + ": gaussian smoothing disagrees, sigma " +
                    fmt("%.1f", sigma));
    for (double p : {0.0, 17.5, 25.0, 50.0, 75.0, 100.0})
      if (!close_or_both_missing(percentile(xs, p), oracles::percentile_bruteforce(xs, p), 1e-9))
        return fail("series " + std::to_string(i) + ": percentile " + fmt("%.1f", p) +
                    " disagrees");
  }
  return pass(std::to_string(inputs) + " random inputs across five metric families");
}

// ---------------------------------------------------------------------------
// 12. Running the same experiment twice produces byte-identical output files.
Result criterion12() {
  const fs::path root = fs::temp_directory_path() / "mobcon_acceptance_c12";
  fs::remove_all(root);
  fs::create_directories(root);

  const std::string text =
      "[dataset]\n"
      "format = synth_checkins\n"
      "n_agents = 400\n"
      "n_venues = 80\n"
      "days = 40\n"
      "dataset_seed = 5\n"
      "[model]\n"
      "beta = 0.5\n"
      "[seeds]\n"
      "n_seeds = 6\n"
      "rng_seed = 44\n"
      "n_runs = 4\n"
      "[intervention]\n"
      "kind = lockdown\n"
      "drop_prob = 0.5\n"
      "trigger_fraction = 0.02\n"
      "duration_days = 10\n"
      "[outputs]\n"
      "directory = " +
      (root / "A").string() + "\n";
  const ExperimentConfig cfg = parse_experiment_config(text);

  RunnerOptions opts;
  opts.quiet = true;
  opts.workers = 3;
  opts.out_dir = (root / "A").string();
  cmd_run(cfg, opts);
  opts.out_dir = (root / "B").string();
  cmd_run(cfg, opts);

  const char* names[] = {"summary.json",    "total_infected.csv", "active_infected.csv",
                         "new_infected.csv", "growth_rate.csv",    "reproduction_number.csv"};
  for (const char* name : names) {
    const std::string a = slurp(root / "A" / name);
    const std::string b = slurp(root / "B" / name);
    if (a.empty())
      return fail(std::string(name) + " is empty or missing");
    if (a != b)
      return fail(std::string(name) + " differs between identical runs");
  }
  fs::remove_all(root);
  return pass("all six output files byte-identical across reruns");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto wanted = [&](int k) { return only.empty() || only.count(k) > 0; };

  Gate gate;
  if (wanted(1)) gate.run(1, "invariants on random micro-instances", 60.0, criterion1);
  if (wanted(2)) gate.run(2, "null dynamics leave only the seeds", 0.0, criterion2);
  if (wanted(3)) gate.run(3, "final-size distribution vs outcome tree", 120.0, criterion3);
  if (wanted(4)) gate.run(4, "proximity join vs all-pairs oracle", 0.0, criterion4);
  if (wanted(5)) gate.run(5, "weighted-edge probability formulas", 0.0, criterion5);
  if (wanted(6)) gate.run(6, "final size monotone in beta", 180.0, criterion6);
  if (wanted(7)) gate.run(7, "homogeneous benchmark orderings", 0.0, criterion7);
  if (wanted(8)) gate.run(8, "targeted beats random interventions", 0.0, criterion8);
  if (wanted(9)) gate.run(9, "contact-graph fidelity on stationary stream", 0.0, criterion9);
  if (wanted(10)) gate.run(10, "published-corpus behavior", 0.0, criterion10);
  if (wanted(11)) gate.run(11, "metrics vs brute-force oracles", 0.0, criterion11);
  if (wanted(12)) gate.run(12, "byte-identical reruns", 0.0, criterion12);

  if (gate.failures == 0) {
    std::printf("ACCEPTANCE PASS\n");
    return 0;
  }
  std::printf("ACCEPTANCE FAIL (%d criterion%s)\n", gate.failures,
              gate.failures == 1 ? "" : "s");
  return 1;
}
