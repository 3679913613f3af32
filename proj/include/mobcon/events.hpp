#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mobcon {

// Interned-id table. External string ids map to dense uint32 indices;
// indices are assigned in first-seen order and never change afterwards.
class Roster {
 public:
  uint32_t intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const uint32_t id = static_cast<uint32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<uint32_t> id_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(uint32_t id) const { return names_.at(id); }
  size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> index_;
};

enum class EventKind : uint8_t { checkin = 0, meeting = 1 };

// One row of the replayable stream. For check-ins: a = agent, b = venue,
// t_end == t. For meetings: a, b = agents with name(a) < name(b), and
// [t, t_end] the overlap interval. Transmission decisions use t only.
struct Event {
  int64_t t = 0;
  int64_t t_end = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  EventKind kind = EventKind::checkin;

  friend bool operator==(const Event&, const Event&) = default;
};

inline bool event_order(const Event& x, const Event& y) {
  if (x.t != y.t) return x.t < y.t;
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  return x.t_end < y.t_end;
}

// A mobility dataset reduced to what the contagion engines consume: two id
// rosters, a time-sorted event list, and the derived time frame. Optional
// cohort labels partition agents for staggered-schedule interventions.
struct EventStream {
  Roster agents;
  Roster venues;
  std::vector<Event> events;

  int cohort_k = 0;                 // 0 = no cohort assignment
  std::vector<uint32_t> cohort_of;  // size == agents.size() when cohort_k > 0

  int64_t t0 = 0;        // earliest event time; valid after finalize()
  int horizon_days = 0;  // day span covered; valid after finalize()

  void add_checkin(const std::string& agent, const std::string& venue, int64_t t) {
    Event e;
    e.t = t;
    e.t_end = t;
    e.a = agents.intern(agent);
    e.b = venues.intern(venue);
    e.kind = EventKind::checkin;
    events.push_back(e);
  }

  void add_meeting(const std::string& agent_a, const std::string& agent_b, int64_t t_start,
                   int64_t t_end) {
    if (agent_a == agent_b) throw std::invalid_argument("meeting with self");
    const std::string& first = agent_a < agent_b ? agent_a : agent_b;
    const std::string& second = agent_a < agent_b ? agent_b : agent_a;
    Event e;
    e.t = t_start;
    e.t_end = t_end;
    e.a = agents.intern(first);
    e.b = agents.intern(second);
    e.kind = EventKind::meeting;
    events.push_back(e);
  }

  // Sort into replay order and fix the time frame. Must be called after the
  // last add_* and before handing the stream to a simulation.
  void finalize() {
    std::sort(events.begin(), events.end(), event_order);
    if (events.empty()) {
      t0 = 0;
      horizon_days = 0;
      return;
    }
    t0 = events.front().t;
    int64_t max_t = t0;
    for (const Event& e : events) max_t = std::max(max_t, e.t);
    horizon_days = static_cast<int>((max_t - t0) / 86400) + 1;
  }

  size_t n_agents() const { return agents.size(); }
  size_t n_venues() const { return venues.size(); }

  // Agents appearing in at least one event; only these can be seeds.
  std::vector<uint32_t> active_agents() const {
    std::vector<char> seen(agents.size(), 0);
    for (const Event& e : events) {
      seen[e.a] = 1;
      if (e.kind == EventKind::meeting) seen[e.b] = 1;
    }
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < seen.size(); ++i)
      if (seen[i]) out.push_back(i);
    return out;
  }
};

}  // namespace mobcon
