#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mobcon/errors.hpp"
#include "mobcon/events.hpp"
#include "mobcon/meetings.hpp"
#include "mobcon/staypoints.hpp"

namespace mobcon {

// Shared knobs for the delimited-text parsers. A file is rejected outright
// when more than max_bad_fraction of its data rows fail to parse; below
// that, bad rows are skipped and counted.
struct TableOptions {
  char delimiter = '\t';
  double max_bad_fraction = 0.001;
};

struct CheckinSchema {
  TableOptions table;
  std::string agent_col = "agent_id";
  std::string venue_col = "venue_id";
  std::string time_col = "timestamp";
};

struct GpsOptions {
  TableOptions table;
  // Required when the file carries lat/lon columns: local equirectangular
  // projection origin in degrees.
  std::optional<std::pair<double, double>> origin;  // (lat, lon)
};

struct IngestReport {
  size_t rows = 0;     // data rows seen (header excluded)
  size_t skipped = 0;  // rows dropped as malformed
};

namespace detail {

inline std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

inline bool parse_i64(std::string_view s, int64_t& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

inline bool parse_f64(std::string_view s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

// Proleptic-Gregorian days since 1970-01-01.
inline int64_t days_from_civil(int64_t y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

// "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DDTHH:MM:SS", optional trailing Z,
// interpreted as UTC.
inline bool parse_iso8601(std::string_view s, int64_t& out) {
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    return false;
  int64_t y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!parse_i64(s.substr(0, 4), y) || !parse_i64(s.substr(5, 2), mo) ||
      !parse_i64(s.substr(8, 2), d) || !parse_i64(s.substr(11, 2), h) ||
      !parse_i64(s.substr(14, 2), mi) || !parse_i64(s.substr(17, 2), sec))
    return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return false;
  out = days_from_civil(y, static_cast<int>(mo), static_cast<int>(d)) * 86400 + h * 3600 +
        mi * 60 + sec;
  return true;
}

// Column lookup by header name; every required column must be present.
inline std::vector<size_t> header_indices(const std::vector<std::string>& header,
                                          const std::vector<std::string>& required,
                                          const char* what) {
  std::vector<size_t> out;
  for (const std::string& name : required) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError(std::string(what) + ": missing required column '" + name + "'");
    out.push_back(static_cast<size_t>(it - header.begin()));
  }
  return out;
}

inline void enforce_bad_rows(const IngestReport& report, double max_bad_fraction,
                             const char* what) {
  if (report.rows == 0) return;
  const double frac = static_cast<double>(report.skipped) / static_cast<double>(report.rows);
  if (frac > max_bad_fraction)
    throw DataError(std::string(what) + ": " + std::to_string(report.skipped) + " of " +
                    std::to_string(report.rows) + " rows malformed (tolerance " +
                    std::to_string(max_bad_fraction) + ")");
}

// Timestamps are either epoch seconds or ISO-8601; the first row that
// parses either way fixes the convention for the whole file.
struct TimeFormat {
  enum Kind { unknown, epoch, iso } kind = unknown;

  bool parse(std::string_view s, int64_t& out) {
    switch (kind) {
      case epoch:
        return parse_i64(s, out);
      case iso:
        return parse_iso8601(s, out);
      case unknown:
        if (parse_i64(s, out)) {
          kind = epoch;
          return true;
        }
        if (parse_iso8601(s, out)) {
          kind = iso;
          return true;
        }
        return false;
    }
    return false;
  }
};

inline bool read_header(std::istream& in, char delim, std::vector<std::string>& header) {
  std::string line;
  if (!std::getline(in, line)) return false;
  header = split_row(line, delim);
  return true;
}

}  // namespace detail

// Check-in table: one row per (agent, venue, time) visit. Column names are
// remappable through the schema; extra columns are ignored.
inline EventStream parse_checkins(std::istream& in, const CheckinSchema& schema = {},
                                  IngestReport* report_out = nullptr) {
  std::vector<std::string> header;
  if (!detail::read_header(in, schema.table.delimiter, header)) {
    if (report_out) *report_out = {};
    EventStream empty;
    empty.finalize();
    return empty;
  }
  const std::vector<size_t> cols = detail::header_indices(
      header, {schema.agent_col, schema.venue_col, schema.time_col}, "checkins");

  EventStream out;
  IngestReport report;
  detail::TimeFormat tf;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++report.rows;
    const std::vector<std::string> row = detail::split_row(line, schema.table.delimiter);
    int64_t t = 0;
    if (row.size() != header.size() || row[cols[0]].empty() || row[cols[1]].empty() ||
        !tf.parse(row[cols[2]], t)) {
      ++report.skipped;
      continue;
    }
    out.add_checkin(row[cols[0]], row[cols[1]], t);
  }
  detail::enforce_bad_rows(report, schema.table.max_bad_fraction, "checkins");
  out.finalize();
  if (report_out) *report_out = report;
  return out;
}

// Stay-interval table: agent_id, location_id, t_start, t_end. Rows whose
// interval is empty or inverted are malformed.
inline std::vector<AgentStays> parse_stays(std::istream& in, const TableOptions& options = {},
                                           IngestReport* report_out = nullptr) {
  std::vector<std::string> header;
  if (!detail::read_header(in, options.delimiter, header)) {
    if (report_out) *report_out = {};
    return {};
  }
  const std::vector<size_t> cols = detail::header_indices(
      header, {"agent_id", "location_id", "t_start", "t_end"}, "stays");

  std::vector<AgentStays> out;
  std::map<std::string, size_t> index;
  IngestReport report;
  detail::TimeFormat tf_start, tf_end;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++report.rows;
    const std::vector<std::string> row = detail::split_row(line, options.delimiter);
    int64_t t_start = 0, t_end = 0;
    if (row.size() != header.size() || row[cols[0]].empty() || row[cols[1]].empty() ||
        !tf_start.parse(row[cols[2]], t_start) || !tf_end.parse(row[cols[3]], t_end) ||
        t_start >= t_end) {
      ++report.skipped;
      continue;
    }
    const auto [it, fresh] = index.try_emplace(row[cols[0]], out.size());
    if (fresh) out.push_back({row[cols[0]], {}});
    StayInterval stay;
    stay.t_start = t_start;
    stay.t_end = t_end;
    stay.location_id = row[cols[1]];
    out[it->second].stays.push_back(stay);
  }
  detail::enforce_bad_rows(report, options.max_bad_fraction, "stays");
  for (AgentStays& a : out)
    std::sort(a.stays.begin(), a.stays.end(), [](const StayInterval& l, const StayInterval& r) {
      return l.t_start != r.t_start ? l.t_start < r.t_start : l.t_end < r.t_end;
    });
  if (report_out) *report_out = report;
  return out;
}

// GPS table: agent_id, x, y, t in projected meters, or agent_id, lat, lon,
// t in degrees (requires a projection origin in the options).
inline std::vector<AgentTrack> parse_gps(std::istream& in, const GpsOptions& options = {},
                                         IngestReport* report_out = nullptr) {
  std::vector<std::string> header;
  if (!detail::read_header(in, options.table.delimiter, header)) {
    if (report_out) *report_out = {};
    return {};
  }
  const bool latlon = std::find(header.begin(), header.end(), "lat") != header.end() &&
                      std::find(header.begin(), header.end(), "lon") != header.end();
  if (latlon && !options.origin)
    throw DataError("gps: lat/lon input needs a projection origin");
  const std::vector<size_t> cols =
      latlon ? detail::header_indices(header, {"agent_id", "lat", "lon", "t"}, "gps")
             : detail::header_indices(header, {"agent_id", "x", "y", "t"}, "gps");

  constexpr double kEarthRadiusM = 6371000.0;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  double cos_lat0 = 1.0, lat0 = 0.0, lon0 = 0.0;
  if (latlon) {
    lat0 = options.origin->first;
    lon0 = options.origin->second;
    cos_lat0 = std::cos(lat0 * kDegToRad);
  }

  std::vector<AgentTrack> out;
  std::map<std::string, size_t> index;
  IngestReport report;
  detail::TimeFormat tf;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++report.rows;
    const std::vector<std::string> row = detail::split_row(line, options.table.delimiter);
    double u = 0, v = 0;
    int64_t t = 0;
    if (row.size() != header.size() || row[cols[0]].empty() ||
        !detail::parse_f64(row[cols[1]], u) || !detail::parse_f64(row[cols[2]], v) ||
        !tf.parse(row[cols[3]], t)) {
      ++report.skipped;
      continue;
    }
    GpsPoint p;
    if (latlon) {
      p.x = kEarthRadiusM * cos_lat0 * (v - lon0) * kDegToRad;
      p.y = kEarthRadiusM * (u - lat0) * kDegToRad;
    } else {
      p.x = u;
      p.y = v;
    }
    p.t = t;
    const auto [it, fresh] = index.try_emplace(row[cols[0]], out.size());
    if (fresh) out.push_back({row[cols[0]], {}});
    out[it->second].points.push_back(p);
  }
  detail::enforce_bad_rows(report, options.table.max_bad_fraction, "gps");
  for (AgentTrack& tr : out)
    std::stable_sort(tr.points.begin(), tr.points.end(),
                     [](const GpsPoint& a, const GpsPoint& b) { return a.t < b.t; });
  if (report_out) *report_out = report;
  return out;
}

// Meeting table: a, b, t_start, t_end. Self-meetings and inverted
// intervals are malformed; endpoint order within a row does not matter.
inline EventStream parse_meetings(std::istream& in, const TableOptions& options = {},
                                  IngestReport* report_out = nullptr) {
  std::vector<std::string> header;
  if (!detail::read_header(in, options.delimiter, header)) {
    if (report_out) *report_out = {};
    EventStream empty;
    empty.finalize();
    return empty;
  }
  const std::vector<size_t> cols =
      detail::header_indices(header, {"a", "b", "t_start", "t_end"}, "meetings");

  EventStream out;
  IngestReport report;
  detail::TimeFormat tf_start, tf_end;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++report.rows;
    const std::vector<std::string> row = detail::split_row(line, options.delimiter);
    int64_t t_start = 0, t_end = 0;
    if (row.size() != header.size() || row[cols[0]].empty() || row[cols[1]].empty() ||
        row[cols[0]] == row[cols[1]] || !tf_start.parse(row[cols[2]], t_start) ||
        !tf_end.parse(row[cols[3]], t_end) || t_start > t_end) {
      ++report.skipped;
      continue;
    }
    out.add_meeting(row[cols[0]], row[cols[1]], t_start, t_end);
  }
  detail::enforce_bad_rows(report, options.max_bad_fraction, "meetings");
  out.finalize();
  if (report_out) *report_out = report;
  return out;
}

// Writers emit the exact shapes the parsers accept, epoch-second times.

inline void write_checkins(std::ostream& out, const EventStream& stream) {
  out << "agent_id\tvenue_id\ttimestamp\n";
  for (const Event& e : stream.events) {
    if (e.kind != EventKind::checkin) continue;
    out << stream.agents.name(e.a) << '\t' << stream.venues.name(e.b) << '\t' << e.t << '\n';
  }
}

inline void write_stays(std::ostream& out, const std::vector<AgentStays>& stays) {
  out << "agent_id\tlocation_id\tt_start\tt_end\n";
  for (const AgentStays& a : stays)
    for (const StayInterval& s : a.stays)
      out << a.agent << '\t' << s.location_id << '\t' << s.t_start << '\t' << s.t_end << '\n';
}

inline void write_meetings(std::ostream& out, const std::vector<Meeting>& meetings) {
  out << "a\tb\tt_start\tt_end\n";
  for (const Meeting& m : meetings)
    out << m.a << '\t' << m.b << '\t' << m.t_start << '\t' << m.t_end << '\n';
}

inline void write_meetings(std::ostream& out, const EventStream& stream) {
  out << "a\tb\tt_start\tt_end\n";
  for (const Event& e : stream.events) {
    if (e.kind != EventKind::meeting) continue;
    out << stream.agents.name(e.a) << '\t' << stream.agents.name(e.b) << '\t' << e.t << '\t'
        << e.t_end << '\n';
  }
}

// Path conveniences used by the command layer.

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  return out;
}

}  // namespace mobcon
