#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mobcon/sim.hpp"

namespace mobcon {

// NaN marks a missing point (undefined growth rate, empty cohort, ...).
// Every routine here treats NaN as "absent", never as zero.
inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double x) { return std::isnan(x); }

inline int day_index(int64_t t, int64_t t0) {
  return static_cast<int>((t - t0) / kSecondsPerDay);
}

// Per-day epidemic curves over the run's horizon. total is cumulative ever
// infected, active excludes the recovered, fresh counts that day's new
// infections (day 0 includes the seeds).
struct DailySeries {
  std::vector<double> total;
  std::vector<double> active;
  std::vector<double> fresh;

  size_t days() const { return total.size(); }
};

inline DailySeries daily_series(const TransmissionLog& log) {
  const int days = std::max(log.horizon_days, 1);
  DailySeries out;
  out.total.assign(days, 0.0);
  out.active.assign(days, 0.0);
  out.fresh.assign(days, 0.0);
  for (const StageEvent& se : log.stages) {
    const int d_inf = day_index(se.infected_at, log.t0);
    const int d_rec = day_index(se.recovered_at, log.t0);
    if (d_inf >= 0 && d_inf < days) out.fresh[d_inf] += 1.0;
    for (int d = std::max(d_inf, 0); d < days; ++d) {
      out.total[d] += 1.0;
      if (d < d_rec) out.active[d] += 1.0;
    }
  }
  return out;
}

// Daily growth factor: new infections today over new infections yesterday.
// Undefined on day 0 and wherever yesterday saw none.
inline std::vector<double> growth_rate(const std::vector<double>& fresh) {
  std::vector<double> out(fresh.size(), missing());
  for (size_t d = 1; d < fresh.size(); ++d)
    if (fresh[d - 1] > 0.0) out[d] = fresh[d] / fresh[d - 1];
  return out;
}

// Average offspring count of the agents first infected on each day. An
// infection is credited to the agent that caused it; for venue transmission
// that is the check-in that last set the venue's window. Days with no new
// infections have no cohort and no value.
inline std::vector<double> reproduction_number(const TransmissionLog& log) {
  const int days = std::max(log.horizon_days, 1);
  std::vector<double> children(log.n_agents, 0.0);
  for (const InfectionRecord& r : log.infections) children[r.via_agent] += 1.0;

  std::vector<double> sum(days, 0.0);
  std::vector<double> cohort(days, 0.0);
  for (const StageEvent& se : log.stages) {
    const int d = day_index(se.infected_at, log.t0);
    if (d < 0 || d >= days) continue;
    cohort[d] += 1.0;
    sum[d] += children[se.agent];
  }
  std::vector<double> out(days, missing());
  for (int d = 0; d < days; ++d)
    if (cohort[d] > 0.0) out[d] = sum[d] / cohort[d];
  return out;
}

// Centered moving average with shrinking windows at the edges. Missing
// points neither contribute nor block their neighbors.
inline std::vector<double> rolling_average(const std::vector<double>& xs, int window = 7) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("rolling_average: window must be odd and positive");
  const int half = window / 2;
  const int n = static_cast<int>(xs.size());
  std::vector<double> out(xs.size(), missing());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    int cnt = 0;
    for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j) {
      if (is_missing(xs[j])) continue;
      acc += xs[j];
      ++cnt;
    }
    if (cnt > 0) out[i] = acc / cnt;
  }
  return out;
}

// Gaussian kernel smoother (truncated at 4 sigma, renormalized over the
// points actually present). Missing inputs stay missing in the output.
inline std::vector<double> gaussian_smooth(const std::vector<double>& xs, double sigma = 2.0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_smooth: sigma must be > 0");
  const int reach = static_cast<int>(std::ceil(4.0 * sigma));
  const int n = static_cast<int>(xs.size());
  std::vector<double> kernel(2 * reach + 1);
  for (int k = -reach; k <= reach; ++k)
    kernel[k + reach] = std::exp(-0.5 * (k * k) / (sigma * sigma));
  std::vector<double> out(xs.size(), missing());
  for (int i = 0; i < n; ++i) {
    if (is_missing(xs[i])) continue;
    double acc = 0.0, mass = 0.0;
    for (int k = -reach; k <= reach; ++k) {
      const int j = i + k;
      if (j < 0 || j >= n || is_missing(xs[j])) continue;
      acc += kernel[k + reach] * xs[j];
      mass += kernel[k + reach];
    }
    out[i] = acc / mass;
  }
  return out;
}

// Linear-interpolation percentile of the non-missing values; p in [0,100].
inline double percentile(std::vector<double> xs, double p) {
  xs.erase(std::remove_if(xs.begin(), xs.end(), [](double x) { return is_missing(x); }),
           xs.end());
  if (xs.empty()) return missing();
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile: p out of range");
  std::sort(xs.begin(), xs.end());
  const double rank = p / 100.0 * static_cast<double>(xs.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

// Pointwise median and quartile band across ensemble members. Members must
// share a horizon; missing values drop out pointwise.
struct EnsembleSummary {
  std::vector<double> median;
  std::vector<double> p25;
  std::vector<double> p75;

  size_t days() const { return median.size(); }
};

inline EnsembleSummary ensemble(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw std::invalid_argument("ensemble: need at least one member");
  const size_t len = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != len) throw std::invalid_argument("ensemble: mismatched horizons");
  EnsembleSummary out;
  out.median.assign(len, missing());
  out.p25.assign(len, missing());
  out.p75.assign(len, missing());
  std::vector<double> column;
  for (size_t i = 0; i < len; ++i) {
    column.clear();
    for (const auto& c : curves) column.push_back(c[i]);
    out.median[i] = percentile(column, 50.0);
    out.p25[i] = percentile(column, 25.0);
    out.p75[i] = percentile(column, 75.0);
  }
  return out;
}

// How many infections each venue transmitted (by record, seeds have none).
inline std::vector<uint64_t> infections_per_venue(const TransmissionLog& log) {
  std::vector<uint64_t> out(log.venues.size(), 0);
  for (const InfectionRecord& r : log.infections)
    if (r.source_kind == SourceKind::venue) ++out[r.source];
  return out;
}

// Share of venue-transmitted infections owed to the ceil(fraction*V) venues
// that transmitted the most.
inline double share_of_top_venues(const std::vector<uint64_t>& counts, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("share_of_top_venues: fraction must be in [0,1]");
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) return 0.0;
  std::vector<uint64_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const size_t k = std::min(sorted.size(), static_cast<size_t>(std::ceil(
                                               fraction * static_cast<double>(sorted.size()))));
  uint64_t top = 0;
  for (size_t i = 0; i < k; ++i) top += sorted[i];
  return static_cast<double>(top) / static_cast<double>(total);
}

// Rank rows for the venue attribution distribution: venues ordered by how
// many infections they transmitted, with the running share of the total.
// Venues that transmitted nothing are left out.
struct VenueRankRow {
  size_t rank = 0;  // 1-based
  uint32_t venue = 0;
  uint64_t count = 0;
  double cumulative_share = 0.0;
};

inline std::vector<VenueRankRow> venue_rank_distribution(const std::vector<uint64_t>& counts,
                                                         const Roster& venues) {
  std::vector<uint32_t> ids;
  uint64_t total = 0;
  for (uint32_t v = 0; v < counts.size(); ++v)
    if (counts[v] > 0) {
      ids.push_back(v);
      total += counts[v];
    }
  std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return venues.name(a) < venues.name(b);
  });
  std::vector<VenueRankRow> out;
  uint64_t running = 0;
  for (uint32_t v : ids) {
    running += counts[v];
    out.push_back({out.size() + 1, v, counts[v],
                   static_cast<double>(running) / static_cast<double>(total)});
  }
  return out;
}

inline std::vector<VenueRankRow> venue_rank_distribution(const TransmissionLog& log) {
  return venue_rank_distribution(infections_per_venue(log), log.venues);
}

// Largest number of secondary infections any single agent caused.
inline uint64_t max_secondary_infections(const TransmissionLog& log) {
  std::vector<uint64_t> children(log.n_agents, 0);
  uint64_t best = 0;
  for (const InfectionRecord& r : log.infections) best = std::max(best, ++children[r.via_agent]);
  return best;
}

// Epidemic curves restricted to the top ceil(fraction*N) agents of a
// ranking (most active first), expressed as fractions of the cohort so
// cohorts of different sizes compare directly.
inline DailySeries cohort_tracking(const TransmissionLog& log,
                                   const std::vector<uint32_t>& ranked_agents, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("cohort_tracking: fraction must be in (0,1]");
  if (ranked_agents.size() != log.n_agents)
    throw std::invalid_argument("cohort_tracking: ranking must cover the roster");
  const size_t k = std::min(ranked_agents.size(),
                            static_cast<size_t>(std::ceil(
                                fraction * static_cast<double>(ranked_agents.size()))));
  std::vector<char> in_cohort(log.n_agents, 0);
  for (size_t i = 0; i < k; ++i) in_cohort[ranked_agents[i]] = 1;

  const int days = std::max(log.horizon_days, 1);
  DailySeries out;
  out.total.assign(days, 0.0);
  out.active.assign(days, 0.0);
  out.fresh.assign(days, 0.0);
  for (const StageEvent& se : log.stages) {
    if (!in_cohort[se.agent]) continue;
    const int d_inf = day_index(se.infected_at, log.t0);
    const int d_rec = day_index(se.recovered_at, log.t0);
    if (d_inf >= 0 && d_inf < days) out.fresh[d_inf] += 1.0;
    for (int d = std::max(d_inf, 0); d < days; ++d) {
      out.total[d] += 1.0;
      if (d < d_rec) out.active[d] += 1.0;
    }
  }
  const double denom = static_cast<double>(k);
  for (auto* series : {&out.total, &out.active, &out.fresh})
    for (double& v : *series) v /= denom;
  return out;
}

// Cumulative infected fraction per labeled group per day; cohort_of labels
// every agent with a value in [0, k).
inline std::vector<std::vector<double>> cohort_curves(const TransmissionLog& log,
                                                      const std::vector<uint32_t>& cohort_of,
                                                      int k) {
  if (k < 1) throw std::invalid_argument("cohort_curves: k must be >= 1");
  if (cohort_of.size() != log.n_agents)
    throw std::invalid_argument("cohort_curves: label count mismatch");
  const int days = std::max(log.horizon_days, 1);
  std::vector<double> size(k, 0.0);
  for (uint32_t c : cohort_of) {
    if (c >= static_cast<uint32_t>(k)) throw std::invalid_argument("cohort label out of range");
    size[c] += 1.0;
  }
  std::vector<std::vector<double>> out(k, std::vector<double>(days, 0.0));
  for (const StageEvent& se : log.stages) {
    const int d = std::max(0, day_index(se.infected_at, log.t0));
    if (d >= days) continue;
    const uint32_t c = cohort_of[se.agent];
    for (int i = d; i < days; ++i) out[c][i] += 1.0;
  }
  for (int c = 0; c < k; ++c)
    for (double& v : out[c]) v = size[c] > 0.0 ? v / size[c] : missing();
  return out;
}

}  // namespace mobcon
