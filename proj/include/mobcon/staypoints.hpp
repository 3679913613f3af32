#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mobcon/events.hpp"

namespace mobcon {

// One GPS fix, planar coordinates in meters.
struct GpsPoint {
  double x = 0.0;
  double y = 0.0;
  int64_t t = 0;
};

// A dwell detected in a trajectory: the agent stayed within `radius` of the
// anchor fix from t_start to t_end. (x, y) is the centroid of the fixes,
// location_id the grid cell the centroid falls in, shared across agents so
// stays at the same place collide.
struct StayInterval {
  int64_t t_start = 0;
  int64_t t_end = 0;
  double x = 0.0;
  double y = 0.0;
  std::string location_id;
};

struct AgentTrack {
  std::string agent;
  std::vector<GpsPoint> points;
};

struct AgentStays {
  std::string agent;
  std::vector<StayInterval> stays;
};

inline std::string grid_location_id(double x, double y, double cell_m) {
  const int64_t ix = static_cast<int64_t>(std::floor(x / cell_m));
  const int64_t iy = static_cast<int64_t>(std::floor(y / cell_m));
  return "g_" + std::to_string(ix) + "_" + std::to_string(iy);
}

// Greedy anchor scan: starting from each candidate fix, take the longest
// prefix of later fixes within radius_m of it; a prefix spanning at least
// min_duration_s becomes a stay and the scan resumes after it, otherwise
// the anchor advances by one. Fixes are time-sorted first.
inline std::vector<StayInterval> detect_stay_points(std::vector<GpsPoint> points, double radius_m,
                                                    int64_t min_duration_s) {
  std::stable_sort(points.begin(), points.end(),
                   [](const GpsPoint& a, const GpsPoint& b) { return a.t < b.t; });
  std::vector<StayInterval> out;
  const double r2 = radius_m * radius_m;
  size_t i = 0;
  while (i < points.size()) {
    size_t j = i + 1;
    while (j < points.size()) {
      const double dx = points[j].x - points[i].x;
      const double dy = points[j].y - points[i].y;
      if (dx * dx + dy * dy > r2) break;
      ++j;
    }
    if (points[j - 1].t - points[i].t >= min_duration_s) {
      StayInterval s;
      s.t_start = points[i].t;
      s.t_end = points[j - 1].t;
      double sx = 0, sy = 0;
      for (size_t k = i; k < j; ++k) {
        sx += points[k].x;
        sy += points[k].y;
      }
      s.x = sx / static_cast<double>(j - i);
      s.y = sy / static_cast<double>(j - i);
      s.location_id = grid_location_id(s.x, s.y, radius_m);
      out.push_back(std::move(s));
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

inline std::vector<AgentStays> detect_stay_points(const std::vector<AgentTrack>& tracks,
                                                  double radius_m, int64_t min_duration_s) {
  std::vector<AgentStays> out;
  out.reserve(tracks.size());
  for (const AgentTrack& tr : tracks)
    out.push_back({tr.agent, detect_stay_points(tr.points, radius_m, min_duration_s)});
  return out;
}

// Stays double as check-ins: entering a dwell is a visit to its grid cell.
inline EventStream stays_to_checkins(const std::vector<AgentStays>& stays) {
  EventStream out;
  for (const AgentStays& as : stays)
    for (const StayInterval& s : as.stays) out.add_checkin(as.agent, s.location_id, s.t_start);
  out.finalize();
  return out;
}

}  // namespace mobcon
