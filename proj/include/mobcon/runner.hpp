#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mobcon/config.hpp"
#include "mobcon/disease.hpp"
#include "mobcon/errors.hpp"
#include "mobcon/events.hpp"
#include "mobcon/graph.hpp"
#include "mobcon/homogeneous.hpp"
#include "mobcon/ingest.hpp"
#include "mobcon/interventions.hpp"
#include "mobcon/meetings.hpp"
#include "mobcon/metrics.hpp"
#include "mobcon/sim.hpp"
#include "mobcon/staypoints.hpp"
#include "mobcon/stream_ops.hpp"
#include "mobcon/synth.hpp"

namespace mobcon {

struct RunnerOptions {
  std::optional<std::string> out_dir;    // overrides [outputs] directory
  std::optional<uint64_t> rng_seed;      // overrides [seeds] rng_seed
  int workers = 1;                       // threads across ensemble members
  bool quiet = false;
};

namespace detail {

inline std::string hex64(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// CSV cell for a metric value; missing values print as empty cells.
inline std::string csv_number(double x) {
  if (is_missing(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct Quartiles {
  double median = missing();
  double p25 = missing();
  double p75 = missing();
};

inline Quartiles quartiles(const std::vector<double>& xs) {
  return {percentile(xs, 50.0), percentile(xs, 25.0), percentile(xs, 75.0)};
}

}  // namespace detail

// Turns the [dataset] section into a replayable stream compatible with the
// requested simulation mode. Check-in style inputs feed the venue model,
// interval style inputs the meeting model; stays and gps traces can feed
// either side through the staypoint/meeting extractors.
inline EventStream load_dataset(const DatasetConfig& d, SimMode mode) {
  if (d.format == "synth_checkins" || d.format == "synth_meetings") {
    SynthConfig sc;
    sc.n_agents = d.n_agents;
    sc.n_venues = d.n_venues;
    sc.days = d.days;
    sc.events_per_agent_per_day = d.events_per_agent_per_day;
    sc.agent_exponent = d.agent_exponent;
    sc.venue_exponent = d.venue_exponent;
    RngHandle rng(d.dataset_seed);
    if (d.format == "synth_checkins") {
      if (mode != SimMode::venue)
        throw ConfigError("meeting mode cannot run on a check-in dataset (format " + d.format +
                          ")");
      return synth_checkin_stream(sc, rng);
    }
    if (mode != SimMode::meeting)
      throw ConfigError("venue mode cannot run on a meeting dataset (format " + d.format + ")");
    return synth_meeting_stream(sc, rng);
  }

  TableOptions table;
  table.delimiter = d.delimiter;
  if (d.format == "checkins") {
    if (mode != SimMode::venue)
      throw ConfigError("meeting mode cannot run on a check-in dataset; use stays, gps or "
                        "meetings input");
    auto in = open_input(d.path);
    CheckinSchema schema;
    schema.table = table;
    return parse_checkins(in, schema);
  }
  if (d.format == "meetings") {
    if (mode != SimMode::meeting)
      throw ConfigError("venue mode cannot run on a meeting dataset; use checkins, stays or "
                        "gps input");
    auto in = open_input(d.path);
    return parse_meetings(in, table);
  }
  if (d.format == "stays") {
    auto in = open_input(d.path);
    const std::vector<AgentStays> stays = parse_stays(in, table);
    if (mode == SimMode::venue) return stays_to_checkins(stays);
    return meetings_to_stream(extract_meetings_colocation(stays));
  }
  // gps
  GpsOptions gps;
  gps.table = table;
  gps.origin = d.origin;
  auto in = open_input(d.path);
  const std::vector<AgentTrack> tracks = parse_gps(in, gps);
  if (mode == SimMode::venue)
    return stays_to_checkins(detect_stay_points(tracks, d.stay_radius_m, d.stay_min_duration_s));
  if (d.gps_join == "colocation")
    return meetings_to_stream(extract_meetings_colocation(
        detect_stay_points(tracks, d.stay_radius_m, d.stay_min_duration_s)));
  return meetings_to_stream(
      extract_meetings_proximity(tracks, d.meeting_radius_m, d.meeting_min_duration_s,
                                 d.meeting_step_s));
}

// Stream after repeat/subsample plus the disease parameters the ensemble
// actually runs with (r0 configs resolve beta here, against this stream).
struct PreparedInput {
  EventStream stream;
  DiseaseParams params;
};

inline PreparedInput prepare_input(const ExperimentConfig& cfg) {
  EventStream s = load_dataset(cfg.dataset, cfg.model.mode);
  if (cfg.dataset.repeat_to_days) s = repeat_stream(s, *cfg.dataset.repeat_to_days);
  if (cfg.dataset.subsample_fraction) {
    RngHandle rng = RngHandle(cfg.seeds.rng_seed).split("subsample");
    s = subsample_agents(s, *cfg.dataset.subsample_fraction, rng);
  }
  DiseaseParams params = cfg.model.params;
  if (cfg.model.r0) {
    double c = 0.0;
    try {
      c = estimate_c(s);
      params.beta = derive_beta(*cfg.model.r0, c, kMeanInfectiousDays);
    } catch (const std::invalid_argument& e) {
      throw DataError("cannot derive beta from r0: " + std::string(e.what()));
    }
  }
  return {std::move(s), params};
}

// The intervention as applied to one experiment. Stream rewrites happen
// once, up front; a lockdown instead rides along as a per-member policy.
struct InterventionPlan {
  EventStream stream;
  std::string description = "none";
  std::optional<CostReport> cost;  // rewrite cost; lockdown costs are per member
  std::optional<LockdownSpec> lockdown;
};

inline InterventionPlan plan_intervention(const EventStream& base, const InterventionSpec& spec,
                                          uint64_t rng_seed) {
  InterventionPlan plan;
  if (spec.kind == "none") {
    plan.stream = base;
    return plan;
  }
  RngHandle rng = RngHandle(rng_seed).split("intervention");
  const TargetMode target = spec.target == "top" ? TargetMode::top : TargetMode::random;
  if (spec.kind == "close_venues") {
    InterventionResult r = close_venues(base, spec.fraction, target, rng);
    plan.stream = std::move(r.stream);
    plan.cost = r.cost;
    plan.description = std::move(r.description);
  } else if (spec.kind == "protect_agents") {
    InterventionResult r = protect_agents(base, spec.fraction, target, rng);
    plan.stream = std::move(r.stream);
    plan.cost = r.cost;
    plan.description = std::move(r.description);
  } else if (spec.kind == "cohorts") {
    InterventionResult r = apply_cohorts(assign_cohorts(base, spec.k, rng));
    plan.stream = std::move(r.stream);
    plan.cost = r.cost;
    plan.description = std::move(r.description);
  } else if (spec.kind == "lockdown") {
    plan.stream = base;
    plan.lockdown = LockdownSpec{spec.drop_prob, spec.trigger_fraction, spec.duration_days};
    std::ostringstream desc;
    desc << "lockdown(drop=" << spec.drop_prob << ",trigger=" << spec.trigger_fraction
         << ",days=" << spec.duration_days << ")";
    plan.description = desc.str();
  } else {
    throw ConfigError("unknown intervention kind '" + spec.kind + "'");
  }
  return plan;
}

// One ensemble: n_runs independent replays of the same stream, member i
// using rng_stream = i. Curves are summarized pointwise across members.
struct EnsembleRun {
  std::vector<TransmissionLog> logs;
  EnsembleSummary total, active, fresh, growth, reproduction;
  std::vector<double> final_totals;
  std::vector<double> peak_heights;
  std::vector<double> peak_days;
};

inline EnsembleRun run_ensemble(const EventStream& stream, SimMode mode,
                                const DiseaseParams& params, const SeedConfig& seeds,
                                const std::optional<LockdownSpec>& lockdown, int workers,
                                const std::vector<uint32_t>& seed_pool = {}) {
  const int n_runs = seeds.n_runs;
  EnsembleRun out;
  out.logs.resize(n_runs);

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < n_runs;) {
      try {
        SimulationConfig sc;
        sc.mode = mode;
        sc.params = params;
        sc.n_seeds = seeds.n_seeds;
        sc.rng_seed = seeds.rng_seed;
        sc.rng_stream = static_cast<uint64_t>(i);
        sc.seed_pool = seed_pool;
        if (lockdown) {
          UniformLockdown policy = lockdown_policy(
              *lockdown, stream.n_agents(),
              RngHandle(seeds.rng_seed, static_cast<uint64_t>(i)).split("lockdown"));
          out.logs[i] = run_simulation(stream, sc, &policy);
        } else {
          out.logs[i] = run_simulation(stream, sc, nullptr);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n_workers = std::clamp(workers, 1, n_runs);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<std::vector<double>> totals(n_runs), actives(n_runs), freshes(n_runs),
      growths(n_runs), reproductions(n_runs);
  for (int i = 0; i < n_runs; ++i) {
    const DailySeries ds = daily_series(out.logs[i]);
    totals[i] = ds.total;
    actives[i] = ds.active;
    freshes[i] = ds.fresh;
    growths[i] = growth_rate(ds.fresh);
    reproductions[i] = reproduction_number(out.logs[i]);
    out.final_totals.push_back(ds.total.empty() ? 0.0 : ds.total.back());
    const auto peak = std::max_element(ds.active.begin(), ds.active.end());
    out.peak_heights.push_back(peak == ds.active.end() ? 0.0 : *peak);
    out.peak_days.push_back(
        peak == ds.active.end() ? 0.0 : static_cast<double>(peak - ds.active.begin()));
  }
  out.total = ensemble(totals);
  out.active = ensemble(actives);
  out.fresh = ensemble(freshes);
  out.growth = ensemble(growths);
  out.reproduction = ensemble(reproductions);
  return out;
}

// Everything one experiment produces, before any file is written. Wall
// clock stays out of summary so reruns with equal configs byte-match.
struct ExperimentResult {
  ExperimentConfig cfg;
  DiseaseParams params;  // beta resolved
  EnsembleRun run;
  std::optional<EnsembleRun> baseline;  // same run without the intervention
  std::string intervention_desc = "none";
  double social_value = 1.0;
  std::optional<double> health;
  nlohmann::ordered_json summary;
  double elapsed_seconds = 0.0;
};

namespace detail {

inline nlohmann::ordered_json quartiles_json(const Quartiles& q) {
  nlohmann::ordered_json j;
  j["median"] = q.median;
  j["p25"] = q.p25;
  j["p75"] = q.p75;
  return j;
}

inline nlohmann::ordered_json build_summary(const ExperimentResult& res,
                                            const EventStream& stream) {
  using nlohmann::ordered_json;
  const ExperimentConfig& cfg = res.cfg;
  const EnsembleRun& run = res.run;
  const size_t days = run.total.days();

  ordered_json j;
  j["mode"] = mode_name(cfg.model.mode);
  j["n_agents"] = stream.n_agents();
  j["n_venues"] = stream.n_venues();
  j["n_events"] = stream.events.size();
  j["horizon_days"] = days;
  j["t0"] = stream.t0;
  j["beta"] = res.params.beta;
  if (cfg.model.r0) j["r0"] = *cfg.model.r0;
  j["n_seeds"] = cfg.seeds.n_seeds;
  j["n_runs"] = cfg.seeds.n_runs;
  j["rng_seed"] = cfg.seeds.rng_seed;
  j["config_hash"] = hex64(cfg.config_hash);

  ordered_json iv;
  iv["kind"] = cfg.intervention.kind;
  iv["description"] = res.intervention_desc;
  iv["social_value"] = res.social_value;
  iv["health_value"] = res.health ? ordered_json(*res.health) : ordered_json(nullptr);
  if (res.baseline)
    iv["baseline_final_total_median"] = percentile(res.baseline->final_totals, 50.0);
  j["intervention"] = iv;

  j["final_total"] = quartiles_json(quartiles(run.final_totals));
  std::vector<double> rates;
  for (double t : run.final_totals)
    rates.push_back(stream.n_agents() ? t / static_cast<double>(stream.n_agents()) : 0.0);
  j["attack_rate"] = quartiles_json(quartiles(rates));
  ordered_json peak;
  peak["height"] = quartiles_json(quartiles(run.peak_heights));
  peak["day"] = quartiles_json(quartiles(run.peak_days));
  j["peak_active"] = peak;

  // Day indices this close to the horizon still accumulate infections, so
  // growth and reproduction values there are biased low.
  j["censored_from_day"] =
      std::max(0, static_cast<int>(std::ceil(static_cast<double>(days) - kMeanInfectiousDays)));

  if (cfg.model.mode == SimMode::venue && stream.n_venues() > 0) {
    std::vector<double> top_005, top_1, top_10;
    std::vector<uint64_t> pooled(stream.n_venues(), 0);
    for (const TransmissionLog& log : run.logs) {
      const std::vector<uint64_t> counts = infections_per_venue(log);
      top_005.push_back(share_of_top_venues(counts, 0.0005));
      top_1.push_back(share_of_top_venues(counts, 0.01));
      top_10.push_back(share_of_top_venues(counts, 0.1));
      for (size_t v = 0; v < counts.size(); ++v) pooled[v] += counts[v];
    }
    ordered_json shares;
    shares["top_0.05%"] = percentile(top_005, 50.0);
    shares["top_1%"] = percentile(top_1, 50.0);
    shares["top_10%"] = percentile(top_10, 50.0);
    j["venue_infection_shares"] = shares;

    ordered_json rows = ordered_json::array();
    for (const VenueRankRow& row : venue_rank_distribution(pooled, stream.venues)) {
      if (row.rank > 20) break;
      ordered_json r;
      r["rank"] = row.rank;
      r["venue"] = stream.venues.name(row.venue);
      r["count"] = row.count;
      r["cumulative_share"] = row.cumulative_share;
      rows.push_back(r);
    }
    j["top_venues"] = rows;
  }
  return j;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1) {
  const auto t_begin = std::chrono::steady_clock::now();
  PreparedInput input = prepare_input(cfg);
  InterventionPlan plan = plan_intervention(input.stream, cfg.intervention, cfg.seeds.rng_seed);

  ExperimentResult res;
  res.cfg = cfg;
  res.params = input.params;
  res.intervention_desc = plan.description;
  // Seeds come from the pre-intervention population, so an intervention run
  // and its baseline infect the same initial agents under the same rng.
  const std::vector<uint32_t> seed_pool = input.stream.active_agents();
  res.run = run_ensemble(plan.stream, cfg.model.mode, input.params, cfg.seeds, plan.lockdown,
                         workers, seed_pool);
  for (TransmissionLog& log : res.run.logs) log.intervention = plan.description;

  if (plan.lockdown) {
    std::vector<double> socials;
    for (const TransmissionLog& log : res.run.logs)
      socials.push_back(log.cost ? log.cost->social_value() : 1.0);
    res.social_value = percentile(socials, 50.0);
  } else if (plan.cost) {
    res.social_value = plan.cost->social_value();
  }

  if (cfg.intervention.kind != "none") {
    res.baseline = run_ensemble(input.stream, cfg.model.mode, input.params, cfg.seeds,
                                std::nullopt, workers, seed_pool);
    const double baseline_median = percentile(res.baseline->final_totals, 50.0);
    const double intervened_median = percentile(res.run.final_totals, 50.0);
    if (baseline_median > 0.0) res.health = health_value(intervened_median, baseline_median);
  }

  res.summary = detail::build_summary(res, plan.stream);
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return res;
}

// Output files -------------------------------------------------------------

namespace detail {

inline void write_series_csv(const std::string& path, const EnsembleSummary& s,
                             std::optional<double> censor_from) {
  std::ofstream out = open_output(path);
  out << "day,value,p25,p75";
  if (censor_from) out << ",censored";
  out << "\n";
  for (size_t d = 0; d < s.days(); ++d) {
    out << d << ',' << csv_number(s.median[d]) << ',' << csv_number(s.p25[d]) << ','
        << csv_number(s.p75[d]);
    if (censor_from) out << ',' << (static_cast<double>(d) >= *censor_from ? 1 : 0);
    out << "\n";
  }
}

}  // namespace detail

// The fixed per-run output set: one JSON summary plus five daily series.
inline void write_run_outputs(const ExperimentResult& res, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory: " + dir);

  {
    std::ofstream out = open_output(dir + "/summary.json");
    out << res.summary.dump(2) << "\n";
  }
  const double censor_from =
      static_cast<double>(res.run.total.days()) - kMeanInfectiousDays;
  detail::write_series_csv(dir + "/total_infected.csv", res.run.total, std::nullopt);
  detail::write_series_csv(dir + "/active_infected.csv", res.run.active, std::nullopt);
  detail::write_series_csv(dir + "/new_infected.csv", res.run.fresh, std::nullopt);
  detail::write_series_csv(dir + "/growth_rate.csv", res.run.growth, censor_from);
  detail::write_series_csv(dir + "/reproduction_number.csv", res.run.reproduction, censor_from);
}

inline void apply_overrides(ExperimentConfig& cfg, const RunnerOptions& opts) {
  if (opts.rng_seed) cfg.seeds.rng_seed = *opts.rng_seed;
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
}

inline ExperimentResult cmd_run(ExperimentConfig cfg, const RunnerOptions& opts = {}) {
  apply_overrides(cfg, opts);
  ExperimentResult res = run_experiment(cfg, opts.workers);
  write_run_outputs(res, cfg.output_dir);
  if (!opts.quiet) {
    const nlohmann::ordered_json& j = res.summary;
    std::cout << "run: " << j["n_agents"] << " agents, " << j["n_venues"] << " venues, "
              << j["horizon_days"] << " days, " << cfg.seeds.n_runs << " members\n";
    std::cout << "final total median " << j["final_total"]["median"] << ", peak day median "
              << j["peak_active"]["day"]["median"] << "\n";
    if (cfg.intervention.kind != "none") {
      std::cout << "intervention " << res.intervention_desc << ": social value "
                << res.social_value << ", health value "
                << (res.health ? std::to_string(*res.health) : std::string("n/a")) << "\n";
    }
    std::cout << "outputs in " << cfg.output_dir << "\n";
    std::cout << "wall clock: " << res.elapsed_seconds << " s\n";
  }
  return res;
}

// Sweep ---------------------------------------------------------------------

struct SweepPoint {
  double value = 0.0;
  ExperimentResult result;
};

inline std::vector<SweepPoint> cmd_sweep(ExperimentConfig cfg, const RunnerOptions& opts = {}) {
  apply_overrides(cfg, opts);
  if (!cfg.sweep) throw ConfigError("sweep requires a [sweep] section");
  const SweepConfig sweep = *cfg.sweep;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + cfg.output_dir);

  std::vector<SweepPoint> points;
  std::ofstream csv = open_output(cfg.output_dir + "/sweep.csv");
  csv << "value,final_total_median,final_total_p25,final_total_p75,peak_height_median,"
         "peak_day_median,social_value,health_value\n";
  for (const double value : sweep.values) {
    ExperimentConfig point_cfg = cfg;
    point_cfg.sweep.reset();
    apply_sweep_value(point_cfg, sweep.parameter, value);
    point_cfg.output_dir =
        cfg.output_dir + "/" + sweep.parameter + "_" + detail::csv_number(value);
    ExperimentResult res = run_experiment(point_cfg, opts.workers);
    write_run_outputs(res, point_cfg.output_dir);

    const detail::Quartiles fin = detail::quartiles(res.run.final_totals);
    csv << detail::csv_number(value) << ',' << detail::csv_number(fin.median) << ','
        << detail::csv_number(fin.p25) << ',' << detail::csv_number(fin.p75) << ','
        << detail::csv_number(percentile(res.run.peak_heights, 50.0)) << ','
        << detail::csv_number(percentile(res.run.peak_days, 50.0)) << ','
        << detail::csv_number(res.social_value) << ','
        << (res.health ? detail::csv_number(*res.health) : std::string()) << "\n";
    if (!opts.quiet)
      std::cout << "sweep " << sweep.parameter << " = " << value << ": final total median "
                << fin.median << "\n";
    points.push_back({value, std::move(res)});
  }
  if (!opts.quiet)
    std::cout << "sweep outputs in " << cfg.output_dir << " (" << points.size() << " points)\n";
  return points;
}

// Model comparison ------------------------------------------------------------

inline nlohmann::ordered_json cmd_compare(ExperimentConfig cfg, const RunnerOptions& opts = {}) {
  apply_overrides(cfg, opts);
  if (!cfg.comparisons.contact_graph && !cfg.comparisons.homogeneous)
    throw ConfigError("compare requires contact_graph and/or homogeneous in [comparisons]");

  PreparedInput input = prepare_input(cfg);
  const EnsembleRun mobility = run_ensemble(input.stream, cfg.model.mode, input.params,
                                            cfg.seeds, std::nullopt, opts.workers);

  using nlohmann::ordered_json;
  ordered_json j;
  j["mode"] = mode_name(cfg.model.mode);
  j["n_agents"] = input.stream.n_agents();
  j["horizon_days"] = mobility.total.days();
  j["config_hash"] = detail::hex64(cfg.config_hash);
  ordered_json mob;
  mob["final_total_median"] = percentile(mobility.final_totals, 50.0);
  mob["peak_day_median"] = percentile(mobility.peak_days, 50.0);
  std::vector<double> mob_max_secondary;
  for (const TransmissionLog& log : mobility.logs)
    mob_max_secondary.push_back(static_cast<double>(max_secondary_infections(log)));
  mob["max_secondary_median"] = percentile(mob_max_secondary, 50.0);
  j["mobility"] = mob;

  if (cfg.comparisons.contact_graph) {
    const ModelComparison mc =
        compare_with_mobility(input.stream, cfg.model.mode, input.params, cfg.seeds.n_seeds,
                              cfg.seeds.n_runs, cfg.seeds.rng_seed);
    ordered_json g;
    g["mobility_final_median"] = mc.mobility_final;
    g["graph_final_median"] = mc.graph_final;
    g["relative_diff"] = mc.relative_diff;
    g["jaccard_top_2pct_agents"] = mc.jaccard;
    j["contact_graph"] = g;
  }

  if (cfg.comparisons.homogeneous) {
    if (cfg.model.mode != SimMode::meeting)
      throw ConfigError("homogeneous comparison needs mode = meeting (contact rate c comes from "
                        "meetings)");
    HomogeneousConfig hc;
    hc.n_agents = input.stream.n_agents();
    hc.days = std::max(1, input.stream.horizon_days - 1);
    hc.contacts_per_day = estimate_c(input.stream);
    hc.n_seeds = cfg.seeds.n_seeds;
    hc.rng_seed = cfg.seeds.rng_seed;
    std::vector<double> finals, peaks, max_secondary;
    for (int i = 0; i < cfg.seeds.n_runs; ++i) {
      hc.rng_stream = static_cast<uint64_t>(i);
      const TransmissionLog log = run_homogeneous(hc, input.params);
      const DailySeries ds = daily_series(log);
      finals.push_back(ds.total.empty() ? 0.0 : ds.total.back());
      const auto peak = std::max_element(ds.active.begin(), ds.active.end());
      peaks.push_back(peak == ds.active.end() ? 0.0
                                              : static_cast<double>(peak - ds.active.begin()));
      max_secondary.push_back(static_cast<double>(max_secondary_infections(log)));
    }
    ordered_json h;
    h["contacts_per_day"] = hc.contacts_per_day;
    h["final_total_median"] = percentile(finals, 50.0);
    h["peak_day_median"] = percentile(peaks, 50.0);
    h["max_secondary_median"] = percentile(max_secondary, 50.0);
    j["homogeneous"] = h;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + cfg.output_dir);
  {
    std::ofstream out = open_output(cfg.output_dir + "/comparison.json");
    out << j.dump(2) << "\n";
  }
  if (!opts.quiet) std::cout << "comparison written to " << cfg.output_dir << "/comparison.json\n";
  return j;
}

// Ingest ----------------------------------------------------------------------

// Normalizes raw input into the toolkit's own formats: every run leaves a
// stream file that parses back losslessly, plus derived stays/meetings
// where the input carries enough structure to extract them.
inline nlohmann::ordered_json cmd_ingest(ExperimentConfig cfg, const RunnerOptions& opts = {}) {
  apply_overrides(cfg, opts);
  const DatasetConfig& d = cfg.dataset;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + cfg.output_dir);

  IngestReport report;
  std::vector<std::string> files;
  size_t n_agents = 0, n_venues = 0, n_events = 0;
  int horizon_days = 0;
  int64_t t0 = 0;
  auto note_stream = [&](const EventStream& s) {
    n_agents = s.n_agents();
    n_venues = s.n_venues();
    n_events = s.events.size();
    horizon_days = s.horizon_days;
    t0 = s.t0;
  };
  auto emit_checkins = [&](const EventStream& s) {
    std::ofstream out = open_output(cfg.output_dir + "/checkins.tsv");
    write_checkins(out, s);
    files.push_back("checkins.tsv");
  };
  auto emit_meetings = [&](const EventStream& s) {
    std::ofstream out = open_output(cfg.output_dir + "/meetings.tsv");
    write_meetings(out, s);
    files.push_back("meetings.tsv");
  };
  auto emit_stays = [&](const std::vector<AgentStays>& stays) {
    std::ofstream out = open_output(cfg.output_dir + "/stays.tsv");
    write_stays(out, stays);
    files.push_back("stays.tsv");
  };

  TableOptions table;
  table.delimiter = d.delimiter;
  if (d.format == "checkins") {
    auto in = open_input(d.path);
    CheckinSchema schema;
    schema.table = table;
    const EventStream s = parse_checkins(in, schema, &report);
    note_stream(s);
    emit_checkins(s);
  } else if (d.format == "meetings") {
    auto in = open_input(d.path);
    const EventStream s = parse_meetings(in, table, &report);
    note_stream(s);
    emit_meetings(s);
  } else if (d.format == "stays") {
    auto in = open_input(d.path);
    const std::vector<AgentStays> stays = parse_stays(in, table, &report);
    emit_stays(stays);
    const EventStream checkins = stays_to_checkins(stays);
    note_stream(checkins);
    emit_checkins(checkins);
    emit_meetings(meetings_to_stream(extract_meetings_colocation(stays)));
  } else if (d.format == "gps") {
    auto in = open_input(d.path);
    GpsOptions gps;
    gps.table = table;
    gps.origin = d.origin;
    const std::vector<AgentTrack> tracks = parse_gps(in, gps, &report);
    const std::vector<AgentStays> stays =
        detect_stay_points(tracks, d.stay_radius_m, d.stay_min_duration_s);
    emit_stays(stays);
    const EventStream checkins = stays_to_checkins(stays);
    note_stream(checkins);
    emit_checkins(checkins);
    if (d.gps_join == "colocation")
      emit_meetings(meetings_to_stream(extract_meetings_colocation(stays)));
    else
      emit_meetings(meetings_to_stream(extract_meetings_proximity(
          tracks, d.meeting_radius_m, d.meeting_min_duration_s, d.meeting_step_s)));
  } else {  // synth_*
    const EventStream s = load_dataset(d, d.format == "synth_checkins" ? SimMode::venue
                                                                       : SimMode::meeting);
    note_stream(s);
    report.rows = s.events.size();
    if (d.format == "synth_checkins")
      emit_checkins(s);
    else
      emit_meetings(s);
  }

  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = d.format;
  j["rows"] = report.rows;
  j["skipped"] = report.skipped;
  j["n_agents"] = n_agents;
  j["n_venues"] = n_venues;
  j["n_events"] = n_events;
  j["horizon_days"] = horizon_days;
  j["t0"] = t0;
  j["files"] = files;
  {
    std::ofstream out = open_output(cfg.output_dir + "/ingest.json");
    out << j.dump(2) << "\n";
  }
  if (!opts.quiet)
    std::cout << "ingested " << report.rows << " rows (" << report.skipped << " skipped) into "
              << cfg.output_dir << "\n";
  return j;
}

}  // namespace mobcon
