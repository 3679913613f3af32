#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mobcon/events.hpp"
#include "mobcon/rng.hpp"

namespace mobcon {

// Extend a short recording by tiling it end to end until target_days is
// covered. Copy k is shifted by k whole horizons; events past the target
// are clipped. Ids and rosters are unchanged, so visit patterns repeat
// exactly.
inline EventStream repeat_stream(const EventStream& in, int target_days) {
  if (target_days <= 0) throw std::invalid_argument("repeat_stream: target_days must be > 0");
  EventStream out = in;
  out.events.clear();
  if (in.events.empty() || in.horizon_days <= 0) {
    out.finalize();
    out.horizon_days = target_days;
    return out;
  }
  const int64_t period = static_cast<int64_t>(in.horizon_days) * 86400;
  const int64_t cutoff = in.t0 + static_cast<int64_t>(target_days) * 86400;
  for (int64_t shift = 0;; shift += period) {
    bool any = false;
    for (const Event& e : in.events) {
      if (e.t + shift >= cutoff) continue;
      Event copy = e;
      copy.t += shift;
      copy.t_end += shift;
      out.events.push_back(copy);
      any = true;
    }
    if (!any) break;
  }
  out.finalize();
  out.horizon_days = target_days;
  return out;
}

// Keep a uniform random ceil(fraction*N) subset of agents and only the
// events fully inside it. The agent roster becomes exactly the selected set
// (agents left without events stay in it); the venue roster shrinks to
// venues still referenced.
inline EventStream subsample_agents(const EventStream& in, double fraction, RngHandle& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("subsample_agents: fraction must be in (0,1]");
  const size_t n = in.n_agents();
  const size_t k = std::min(n, static_cast<size_t>(std::ceil(fraction * static_cast<double>(n))));

  std::vector<uint32_t> pool(n);
  for (uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.uniform_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<char> keep(n, 0);
  for (size_t i = 0; i < k; ++i) keep[pool[i]] = 1;

  EventStream out;
  std::vector<uint32_t> agent_map(n, 0);
  for (uint32_t i = 0; i < n; ++i)
    if (keep[i]) agent_map[i] = out.agents.intern(in.agents.name(i));

  std::vector<char> venue_used(in.n_venues(), 0);
  for (const Event& e : in.events) {
    if (e.kind == EventKind::checkin) {
      if (keep[e.a]) venue_used[e.b] = 1;
    }
  }
  std::vector<uint32_t> venue_map(in.n_venues(), 0);
  for (uint32_t v = 0; v < venue_used.size(); ++v)
    if (venue_used[v]) venue_map[v] = out.venues.intern(in.venues.name(v));

  for (const Event& e : in.events) {
    const bool kept = e.kind == EventKind::checkin ? keep[e.a] != 0
                                                   : (keep[e.a] != 0 && keep[e.b] != 0);
    if (!kept) continue;
    Event copy = e;
    copy.a = agent_map[e.a];
    copy.b = e.kind == EventKind::checkin ? venue_map[e.b] : agent_map[e.b];
    out.events.push_back(copy);
  }
  out.finalize();
  return out;
}

namespace detail {
// Rank ids by count descending; equal counts break by external name so the
// ranking does not depend on interning order.
inline std::vector<uint32_t> rank_by_count(const std::vector<uint64_t>& counts,
                                           const Roster& roster) {
  std::vector<uint32_t> ids(counts.size());
  for (uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(), [&](uint32_t x, uint32_t y) {
    if (counts[x] != counts[y]) return counts[x] > counts[y];
    return roster.name(x) < roster.name(y);
  });
  return ids;
}
}  // namespace detail

// Agents ordered by how often they appear in events, busiest first.
inline std::vector<uint32_t> activity_ranking(const EventStream& stream) {
  std::vector<uint64_t> counts(stream.n_agents(), 0);
  for (const Event& e : stream.events) {
    ++counts[e.a];
    if (e.kind == EventKind::meeting) ++counts[e.b];
  }
  return detail::rank_by_count(counts, stream.agents);
}

// Venues ordered by check-in volume, most visited first.
inline std::vector<uint32_t> popularity_ranking(const EventStream& stream) {
  std::vector<uint64_t> counts(stream.n_venues(), 0);
  for (const Event& e : stream.events)
    if (e.kind == EventKind::checkin) ++counts[e.b];
  return detail::rank_by_count(counts, stream.venues);
}

}  // namespace mobcon
