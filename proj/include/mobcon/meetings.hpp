#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mobcon/events.hpp"
#include "mobcon/kdtree.hpp"
#include "mobcon/staypoints.hpp"

namespace mobcon {

struct Meeting {
  std::string a;
  std::string b;
  int64_t t_start = 0;
  int64_t t_end = 0;
};

inline EventStream meetings_to_stream(const std::vector<Meeting>& meetings) {
  EventStream out;
  for (const Meeting& m : meetings) out.add_meeting(m.a, m.b, m.t_start, m.t_end);
  out.finalize();
  return out;
}

// Two agents met when they dwelled in the same grid cell at the same time.
// The meeting is the overlap of the two stay intervals; touching endpoints
// (one stay ends exactly when the other begins) do not count.
inline std::vector<Meeting> extract_meetings_colocation(const std::vector<AgentStays>& stays) {
  struct Visit {
    int64_t t_start, t_end;
    uint32_t agent;
  };
  std::map<std::string, std::vector<Visit>> by_location;
  for (uint32_t i = 0; i < stays.size(); ++i)
    for (const StayInterval& s : stays[i].stays)
      by_location[s.location_id].push_back({s.t_start, s.t_end, i});

  std::vector<Meeting> out;
  for (auto& [loc, visits] : by_location) {
    std::sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) {
      if (a.t_start != b.t_start) return a.t_start < b.t_start;
      if (a.t_end != b.t_end) return a.t_end < b.t_end;
      return a.agent < b.agent;
    });
    for (size_t i = 0; i < visits.size(); ++i) {
      for (size_t j = i + 1; j < visits.size(); ++j) {
        if (visits[j].t_start >= visits[i].t_end) break;  // sorted by start
        if (visits[i].agent == visits[j].agent) continue;
        Meeting m;
        m.a = stays[visits[i].agent].agent;
        m.b = stays[visits[j].agent].agent;
        m.t_start = std::max(visits[i].t_start, visits[j].t_start);
        m.t_end = std::min(visits[i].t_end, visits[j].t_end);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

namespace detail {

// Positions of one agent on the shared tick grid: tick k*step_s gets the
// nearest raw fix in time, the earlier one on ties. Ticks outside the span
// of the track do not exist.
struct ResampledTrack {
  int64_t first_tick = 0;  // tick index, not seconds
  std::vector<std::array<double, 2>> pos;

  bool empty() const { return pos.empty(); }
  int64_t last_tick() const { return first_tick + static_cast<int64_t>(pos.size()) - 1; }
};

inline ResampledTrack resample_track(std::vector<GpsPoint> points, int64_t step_s) {
  std::stable_sort(points.begin(), points.end(),
                   [](const GpsPoint& a, const GpsPoint& b) { return a.t < b.t; });
  ResampledTrack out;
  if (points.empty()) return out;
  const int64_t lo = points.front().t;
  const int64_t hi = points.back().t;
  // ceil(lo/step) .. floor(hi/step), correct for negative times too
  auto div_floor = [](int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  auto div_ceil = [&](int64_t a, int64_t b) { return -div_floor(-a, b); };
  const int64_t k0 = div_ceil(lo, step_s);
  const int64_t k1 = div_floor(hi, step_s);
  if (k0 > k1) return out;
  out.first_tick = k0;
  out.pos.reserve(static_cast<size_t>(k1 - k0 + 1));
  size_t cursor = 0;
  for (int64_t k = k0; k <= k1; ++k) {
    const int64_t t = k * step_s;
    while (cursor + 1 < points.size() && points[cursor + 1].t <= t) ++cursor;
    size_t pick = cursor;
    if (cursor + 1 < points.size()) {
      const int64_t d_here = t - points[cursor].t;
      const int64_t d_next = points[cursor + 1].t - t;
      if (d_next < d_here) pick = cursor + 1;
    }
    out.pos.push_back({points[pick].x, points[pick].y});
  }
  return out;
}

}  // namespace detail

// Proximity join over raw trajectories: tracks are resampled to a common
// step_s grid, agents within radius_m at a tick are paired (kd-tree per
// tick), and a pair's maximal run of consecutive ticks becomes a meeting if
// it spans at least min_duration_s.
inline std::vector<Meeting> extract_meetings_proximity(const std::vector<AgentTrack>& tracks,
                                                       double radius_m, int64_t min_duration_s,
                                                       int64_t step_s = 10) {
  std::vector<detail::ResampledTrack> rs;
  rs.reserve(tracks.size());
  int64_t tick_lo = 0, tick_hi = -1;
  bool any = false;
  for (const AgentTrack& tr : tracks) {
    rs.push_back(detail::resample_track(tr.points, step_s));
    if (!rs.back().empty()) {
      if (!any) {
        tick_lo = rs.back().first_tick;
        tick_hi = rs.back().last_tick();
        any = true;
      } else {
        tick_lo = std::min(tick_lo, rs.back().first_tick);
        tick_hi = std::max(tick_hi, rs.back().last_tick());
      }
    }
  }

  // per-pair run tracking: (last tick seen, run start)
  std::map<std::pair<uint32_t, uint32_t>, std::pair<int64_t, int64_t>> open;
  std::vector<Meeting> out;

  auto close_run = [&](const std::pair<uint32_t, uint32_t>& pair, int64_t run_start,
                       int64_t run_end) {
    if ((run_end - run_start) * step_s < min_duration_s) return;
    Meeting m;
    m.a = tracks[pair.first].agent;
    m.b = tracks[pair.second].agent;
    m.t_start = run_start * step_s;
    m.t_end = run_end * step_s;
    out.push_back(std::move(m));
  };

  if (any) {
    std::vector<uint32_t> present;
    std::vector<std::array<double, 2>> pts;
    for (int64_t k = tick_lo; k <= tick_hi; ++k) {
      present.clear();
      pts.clear();
      for (uint32_t i = 0; i < rs.size(); ++i) {
        const auto& r = rs[i];
        if (r.empty() || k < r.first_tick || k > r.last_tick()) continue;
        present.push_back(i);
        pts.push_back(r.pos[static_cast<size_t>(k - r.first_tick)]);
      }
      if (present.size() < 2) continue;
      KdTree2D tree(pts);
      for (size_t qi = 0; qi < present.size(); ++qi) {
        for (uint32_t hit : tree.radius_query(pts[qi][0], pts[qi][1], radius_m)) {
          if (hit <= qi) continue;  // each unordered pair once
          const std::pair<uint32_t, uint32_t> key{std::min(present[qi], present[hit]),
                                                  std::max(present[qi], present[hit])};
          auto [it, inserted] = open.emplace(key, std::make_pair(k, k));
          if (!inserted) {
            auto& [last, start] = it->second;
            if (k == last + 1) {
              last = k;
            } else if (k > last) {
              close_run(key, start, last);
              it->second = {k, k};
            }
          }
        }
      }
    }
  }
  for (const auto& [key, run] : open) close_run(key, run.second, run.first);
  return out;
}

}  // namespace mobcon
