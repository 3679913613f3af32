#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mobcon/disease.hpp"
#include "mobcon/errors.hpp"
#include "mobcon/interventions.hpp"
#include "mobcon/sim.hpp"

namespace mobcon {

// Where the events come from. Formats `checkins`, `stays` and `gps` read
// the corresponding file layout; `meetings` reads a meeting table so runs
// compose; `synth_checkins` / `synth_meetings` generate a stream in memory
// from the knobs below instead of reading `path`.
struct DatasetConfig {
  std::string path;
  std::string format = "checkins";
  char delimiter = '\t';
  std::optional<int> repeat_to_days;
  std::optional<double> subsample_fraction;

  // gps ingestion
  std::optional<std::pair<double, double>> origin;  // (lat, lon) degrees
  std::string gps_join = "proximity";               // proximity | colocation
  double stay_radius_m = 5.0;
  int64_t stay_min_duration_s = 300;
  double meeting_radius_m = 5.0;
  int64_t meeting_min_duration_s = 300;
  int64_t meeting_step_s = 10;

  // synthetic generation
  size_t n_agents = 2000;
  size_t n_venues = 500;
  int days = 90;
  double events_per_agent_per_day = 3.0;
  double agent_exponent = 1.0;
  double venue_exponent = 1.0;
  uint64_t dataset_seed = 1;
};

struct ModelConfig {
  SimMode mode = SimMode::venue;
  DiseaseParams params;
  std::optional<double> r0;  // meeting mode only; beta derived at run time
};

struct SeedConfig {
  int n_seeds = 10;
  uint64_t rng_seed = 0;
  int n_runs = 10;
};

struct ComparisonConfig {
  bool contact_graph = false;
  bool homogeneous = false;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  SeedConfig seeds;
  InterventionSpec intervention;
  ComparisonConfig comparisons;
  std::string output_dir;
  std::optional<SweepConfig> sweep;
  uint64_t config_hash = 0;  // FNV-1a over the raw config bytes
};

namespace detail {

inline uint64_t fnv1a_bytes(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// One parsed `key = value`, tagged with its source line for error messages.
struct ConfigEntry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

class ConfigTable {
 public:
  explicit ConfigTable(std::istream& in) {
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty())
          throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
        sections_.insert({section, lineno});
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
      const std::string key = trim(t.substr(0, eq));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      const auto [it, fresh] =
          entries_.try_emplace({section, key}, ConfigEntry{trim(t.substr(eq + 1)), lineno});
      if (!fresh)
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                          "' in [" + section + "] (first set on line " +
                          std::to_string(it->second.line) + ")");
    }
  }

  bool has_section(const std::string& section) const {
    for (const auto& [name, line] : sections_)
      if (name == section) return true;
    return false;
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) {
    const auto it = entries_.find({section, key});
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return it->second.value;
  }

  bool provided(const std::string& section, const std::string& key) const {
    return entries_.count({section, key}) > 0;
  }

  int line_of(const std::string& section, const std::string& key) const {
    const auto it = entries_.find({section, key});
    return it == entries_.end() ? 0 : it->second.line;
  }

  // Call after all known keys were read: anything left is a typo.
  void reject_leftovers(const std::set<std::string>& known_sections) const {
    for (const auto& [name, line] : sections_)
      if (!known_sections.count(name))
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + name + "]");
    for (const auto& [sk, entry] : entries_)
      if (!entry.consumed)
        throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + sk.second +
                          "' in [" + sk.first + "]");
  }

 private:
  std::map<std::pair<std::string, std::string>, ConfigEntry> entries_;
  std::set<std::pair<std::string, int>> sections_;
};

inline ConfigError bad_value(const ConfigTable& table, const std::string& section,
                             const std::string& key, const std::string& why) {
  return ConfigError("line " + std::to_string(table.line_of(section, key)) + ": " + key + " " +
                     why);
}

inline double to_double(ConfigTable& table, const std::string& section, const std::string& key,
                        const std::string& raw) {
  double out = 0;
  const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
  if (ec != std::errc() || p != raw.data() + raw.size() || !std::isfinite(out))
    throw bad_value(table, section, key, "must be a number, got '" + raw + "'");
  return out;
}

inline int64_t to_int(ConfigTable& table, const std::string& section, const std::string& key,
                      const std::string& raw) {
  int64_t out = 0;
  const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
  if (ec != std::errc() || p != raw.data() + raw.size())
    throw bad_value(table, section, key, "must be an integer, got '" + raw + "'");
  return out;
}

inline bool to_bool(ConfigTable& table, const std::string& section, const std::string& key,
                    const std::string& raw) {
  if (raw == "true" || raw == "yes" || raw == "1") return true;
  if (raw == "false" || raw == "no" || raw == "0") return false;
  throw bad_value(table, section, key, "must be true or false, got '" + raw + "'");
}

// Getter shorthands: fetch-and-convert, or leave the default in place.

inline void read_double(ConfigTable& t, const std::string& sec, const std::string& key,
                        double& out) {
  if (const auto v = t.get(sec, key)) out = to_double(t, sec, key, *v);
}

inline void read_int(ConfigTable& t, const std::string& sec, const std::string& key,
                     int64_t& out) {
  if (const auto v = t.get(sec, key)) out = to_int(t, sec, key, *v);
}

inline void read_bool(ConfigTable& t, const std::string& sec, const std::string& key, bool& out) {
  if (const auto v = t.get(sec, key)) out = to_bool(t, sec, key, *v);
}

inline void read_string(ConfigTable& t, const std::string& sec, const std::string& key,
                        std::string& out) {
  if (const auto v = t.get(sec, key)) out = *v;
}

}  // namespace detail

// Parses and fully validates an experiment description. Unknown sections or
// keys, type errors, and inconsistent combinations are all ConfigErrors
// carrying the offending line number.
inline ExperimentConfig parse_experiment_config(const std::string& bytes) {
  std::istringstream in(bytes);
  detail::ConfigTable table(in);
  ExperimentConfig cfg;
  cfg.config_hash = detail::fnv1a_bytes(bytes);

  // [dataset]
  {
    const std::string sec = "dataset";
    detail::read_string(table, sec, "path", cfg.dataset.path);
    detail::read_string(table, sec, "format", cfg.dataset.format);
    static const std::set<std::string> kFormats{"checkins",       "stays",
                                                "gps",            "meetings",
                                                "synth_checkins", "synth_meetings"};
    if (!kFormats.count(cfg.dataset.format))
      throw detail::bad_value(table, sec, "format",
                              "must be one of checkins|stays|gps|meetings|synth_checkins|"
                              "synth_meetings, got '" +
                                  cfg.dataset.format + "'");
    const bool synthetic = cfg.dataset.format.rfind("synth_", 0) == 0;
    if (!synthetic && cfg.dataset.path.empty())
      throw ConfigError("[dataset] path is required for format " + cfg.dataset.format);

    if (const auto v = table.get(sec, "delimiter")) {
      if (*v == "tab")
        cfg.dataset.delimiter = '\t';
      else if (*v == "comma")
        cfg.dataset.delimiter = ',';
      else if (*v == "semicolon")
        cfg.dataset.delimiter = ';';
      else if (v->size() == 1)
        cfg.dataset.delimiter = (*v)[0];
      else
        throw detail::bad_value(table, sec, "delimiter", "must be tab|comma|semicolon or one character");
    }

    if (const auto v = table.get(sec, "repeat_to_days")) {
      const int64_t days = detail::to_int(table, sec, "repeat_to_days", *v);
      if (days < 1) throw detail::bad_value(table, sec, "repeat_to_days", "must be >= 1");
      cfg.dataset.repeat_to_days = static_cast<int>(days);
    }
    if (const auto v = table.get(sec, "subsample_fraction")) {
      const double f = detail::to_double(table, sec, "subsample_fraction", *v);
      if (!(f > 0.0 && f <= 1.0))
        throw detail::bad_value(table, sec, "subsample_fraction", "must be in (0,1]");
      cfg.dataset.subsample_fraction = f;
    }

    const bool has_lat = table.provided(sec, "origin_lat");
    const bool has_lon = table.provided(sec, "origin_lon");
    if (has_lat != has_lon)
      throw ConfigError("[dataset] origin_lat and origin_lon must be set together");
    if (has_lat) {
      const double lat = detail::to_double(table, sec, "origin_lat", *table.get(sec, "origin_lat"));
      const double lon = detail::to_double(table, sec, "origin_lon", *table.get(sec, "origin_lon"));
      cfg.dataset.origin = {lat, lon};
    }
    detail::read_string(table, sec, "gps_join", cfg.dataset.gps_join);
    if (cfg.dataset.gps_join != "proximity" && cfg.dataset.gps_join != "colocation")
      throw detail::bad_value(table, sec, "gps_join", "must be proximity or colocation");
    detail::read_double(table, sec, "stay_radius_m", cfg.dataset.stay_radius_m);
    detail::read_int(table, sec, "stay_min_duration_s", cfg.dataset.stay_min_duration_s);
    detail::read_double(table, sec, "meeting_radius_m", cfg.dataset.meeting_radius_m);
    detail::read_int(table, sec, "meeting_min_duration_s", cfg.dataset.meeting_min_duration_s);
    detail::read_int(table, sec, "meeting_step_s", cfg.dataset.meeting_step_s);

    int64_t n_agents = static_cast<int64_t>(cfg.dataset.n_agents);
    int64_t n_venues = static_cast<int64_t>(cfg.dataset.n_venues);
    int64_t days = cfg.dataset.days;
    detail::read_int(table, sec, "n_agents", n_agents);
    detail::read_int(table, sec, "n_venues", n_venues);
    detail::read_int(table, sec, "days", days);
    if (n_agents < 1) throw detail::bad_value(table, sec, "n_agents", "must be >= 1");
    if (n_venues < 1) throw detail::bad_value(table, sec, "n_venues", "must be >= 1");
    if (days < 1) throw detail::bad_value(table, sec, "days", "must be >= 1");
    cfg.dataset.n_agents = static_cast<size_t>(n_agents);
    cfg.dataset.n_venues = static_cast<size_t>(n_venues);
    cfg.dataset.days = static_cast<int>(days);
    detail::read_double(table, sec, "events_per_agent_per_day",
                        cfg.dataset.events_per_agent_per_day);
    detail::read_double(table, sec, "agent_exponent", cfg.dataset.agent_exponent);
    detail::read_double(table, sec, "venue_exponent", cfg.dataset.venue_exponent);
    int64_t dataset_seed = static_cast<int64_t>(cfg.dataset.dataset_seed);
    detail::read_int(table, sec, "dataset_seed", dataset_seed);
    cfg.dataset.dataset_seed = static_cast<uint64_t>(dataset_seed);
  }

  // [model]
  {
    const std::string sec = "model";
    std::string mode = "venue";
    detail::read_string(table, sec, "mode", mode);
    if (mode == "venue")
      cfg.model.mode = SimMode::venue;
    else if (mode == "meeting")
      cfg.model.mode = SimMode::meeting;
    else
      throw detail::bad_value(table, sec, "mode", "must be venue or meeting, got '" + mode + "'");

    const bool has_beta = table.provided(sec, "beta");
    const bool has_r0 = table.provided(sec, "r0");
    if (has_beta && has_r0)
      throw ConfigError("[model] beta and r0 are mutually exclusive (line " +
                        std::to_string(table.line_of(sec, "r0")) + ")");
    detail::read_double(table, sec, "beta", cfg.model.params.beta);
    if (has_r0) {
      if (cfg.model.mode != SimMode::meeting)
        throw ConfigError("[model] r0 requires mode = meeting (line " +
                          std::to_string(table.line_of(sec, "r0")) + ")");
      const double r0 = detail::to_double(table, sec, "r0", *table.get(sec, "r0"));
      if (!(r0 >= 0.0)) throw detail::bad_value(table, sec, "r0", "must be >= 0");
      cfg.model.r0 = r0;
    }

    detail::read_double(table, sec, "incubation_mean", cfg.model.params.incubation_mean);
    detail::read_double(table, sec, "incubation_std", cfg.model.params.incubation_std);
    detail::read_double(table, sec, "presymptomatic_infectious_mean",
                        cfg.model.params.presymptomatic_infectious_mean);
    detail::read_double(table, sec, "presymptomatic_infectious_std",
                        cfg.model.params.presymptomatic_infectious_std);
    detail::read_double(table, sec, "in_care_mean", cfg.model.params.in_care_mean);
    detail::read_double(table, sec, "in_care_std", cfg.model.params.in_care_std);
    detail::read_double(table, sec, "asymptomatic_infectious_mean",
                        cfg.model.params.asymptomatic_infectious_mean);
    detail::read_double(table, sec, "asymptomatic_infectious_std",
                        cfg.model.params.asymptomatic_infectious_std);
    detail::read_double(table, sec, "asymptomatic_fraction",
                        cfg.model.params.asymptomatic_fraction);
    if (const auto v = table.get(sec, "venue_window_hours")) {
      const double hours = detail::to_double(table, sec, "venue_window_hours", *v);
      if (!(hours > 0.0)) throw detail::bad_value(table, sec, "venue_window_hours", "must be > 0");
      cfg.model.params.venue_window_seconds = static_cast<int64_t>(std::llround(hours * 3600.0));
    }
    try {
      cfg.model.params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[model] ") + e.what());
    }
  }

  // [seeds]
  {
    const std::string sec = "seeds";
    int64_t n_seeds = cfg.seeds.n_seeds, n_runs = cfg.seeds.n_runs;
    int64_t rng_seed = static_cast<int64_t>(cfg.seeds.rng_seed);
    detail::read_int(table, sec, "n_seeds", n_seeds);
    detail::read_int(table, sec, "rng_seed", rng_seed);
    detail::read_int(table, sec, "n_runs", n_runs);
    if (n_seeds < 0) throw detail::bad_value(table, sec, "n_seeds", "must be >= 0");
    if (n_runs < 1) throw detail::bad_value(table, sec, "n_runs", "must be >= 1");
    cfg.seeds.n_seeds = static_cast<int>(n_seeds);
    cfg.seeds.n_runs = static_cast<int>(n_runs);
    cfg.seeds.rng_seed = static_cast<uint64_t>(rng_seed);
  }

  // [intervention]
  {
    const std::string sec = "intervention";
    detail::read_string(table, sec, "kind", cfg.intervention.kind);
    const std::string& kind = cfg.intervention.kind;
    static const std::set<std::string> kKinds{"none", "close_venues", "protect_agents",
                                              "cohorts", "lockdown"};
    if (!kKinds.count(kind))
      throw detail::bad_value(table, sec, "kind",
                              "must be one of none|close_venues|protect_agents|cohorts|lockdown");

    auto forbid = [&](const char* key) {
      if (table.provided(sec, key))
        throw ConfigError("line " + std::to_string(table.line_of(sec, key)) + ": key '" + key +
                          "' does not apply to intervention kind '" + kind + "'");
    };
    auto require = [&](const char* key) {
      if (!table.provided(sec, key))
        throw ConfigError("[intervention] kind '" + kind + "' requires key '" + key + "'");
    };

    if (kind == "close_venues" || kind == "protect_agents") {
      require("fraction");
      forbid("drop_prob");
      forbid("trigger_fraction");
      forbid("duration_days");
      forbid("k");
      detail::read_double(table, sec, "fraction", cfg.intervention.fraction);
      if (!(cfg.intervention.fraction >= 0.0 && cfg.intervention.fraction <= 1.0))
        throw detail::bad_value(table, sec, "fraction", "must be in [0,1]");
      detail::read_string(table, sec, "target", cfg.intervention.target);
      if (cfg.intervention.target != "top" && cfg.intervention.target != "random")
        throw detail::bad_value(table, sec, "target", "must be top or random");
    } else if (kind == "cohorts") {
      forbid("fraction");
      forbid("target");
      forbid("drop_prob");
      forbid("trigger_fraction");
      forbid("duration_days");
      int64_t k = cfg.intervention.k;
      detail::read_int(table, sec, "k", k);
      if (k < 1) throw detail::bad_value(table, sec, "k", "must be >= 1");
      cfg.intervention.k = static_cast<int>(k);
    } else if (kind == "lockdown") {
      require("drop_prob");
      forbid("fraction");
      forbid("target");
      forbid("k");
      detail::read_double(table, sec, "drop_prob", cfg.intervention.drop_prob);
      detail::read_double(table, sec, "trigger_fraction", cfg.intervention.trigger_fraction);
      int64_t duration = cfg.intervention.duration_days;
      detail::read_int(table, sec, "duration_days", duration);
      cfg.intervention.duration_days = static_cast<int>(duration);
      if (!(cfg.intervention.drop_prob >= 0.0 && cfg.intervention.drop_prob <= 1.0))
        throw detail::bad_value(table, sec, "drop_prob", "must be in [0,1]");
      if (!(cfg.intervention.trigger_fraction >= 0.0 && cfg.intervention.trigger_fraction <= 1.0))
        throw detail::bad_value(table, sec, "trigger_fraction", "must be in [0,1]");
    } else {  // none
      forbid("fraction");
      forbid("target");
      forbid("k");
      forbid("drop_prob");
      forbid("trigger_fraction");
      forbid("duration_days");
    }
  }

  // [comparisons]
  detail::read_bool(table, "comparisons", "contact_graph", cfg.comparisons.contact_graph);
  detail::read_bool(table, "comparisons", "homogeneous", cfg.comparisons.homogeneous);

  // [outputs]
  detail::read_string(table, "outputs", "directory", cfg.output_dir);
  if (cfg.output_dir.empty()) throw ConfigError("[outputs] directory is required");

  // [sweep]
  if (table.has_section("sweep")) {
    SweepConfig sweep;
    detail::read_string(table, "sweep", "parameter", sweep.parameter);
    static const std::set<std::string> kParams{
        "beta",     "n_seeds",            "asymptomatic_fraction",
        "fraction", "k",                  "subsample_fraction",
        "trigger_fraction", "duration_days", "drop_prob"};
    if (!kParams.count(sweep.parameter))
      throw ConfigError("[sweep] unknown parameter '" + sweep.parameter + "'");
    if (const auto v = table.get("sweep", "values")) {
      std::istringstream vals(*v);
      std::string item;
      while (std::getline(vals, item, ',')) {
        const std::string t = detail::trim(item);
        if (t.empty()) continue;
        sweep.values.push_back(detail::to_double(table, "sweep", "values", t));
      }
    }
    if (sweep.values.empty()) throw ConfigError("[sweep] values must be a non-empty list");
    cfg.sweep = std::move(sweep);
  }

  table.reject_leftovers({"dataset", "model", "seeds", "intervention", "comparisons", "outputs",
                          "sweep"});
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

// Rewrites one knob for a sweep point. Integer-valued parameters reject
// fractional sweep values instead of silently truncating.
inline void apply_sweep_value(ExperimentConfig& cfg, const std::string& parameter, double value) {
  auto as_int = [&](const char* name) {
    const double r = std::round(value);
    if (std::abs(value - r) > 1e-9)
      throw ConfigError("sweep parameter " + std::string(name) + " needs integer values");
    return static_cast<int>(r);
  };
  if (parameter == "beta") {
    if (cfg.model.r0)
      throw ConfigError("sweep over beta conflicts with [model] r0");
    cfg.model.params.beta = value;
  } else if (parameter == "asymptomatic_fraction") {
    cfg.model.params.asymptomatic_fraction = value;
  } else if (parameter == "n_seeds") {
    cfg.seeds.n_seeds = as_int("n_seeds");
  } else if (parameter == "fraction") {
    if (cfg.intervention.kind != "close_venues" && cfg.intervention.kind != "protect_agents")
      throw ConfigError("sweep over fraction needs a close_venues or protect_agents intervention");
    cfg.intervention.fraction = value;
  } else if (parameter == "k") {
    if (cfg.intervention.kind != "cohorts")
      throw ConfigError("sweep over k needs a cohorts intervention");
    cfg.intervention.k = as_int("k");
  } else if (parameter == "subsample_fraction") {
    cfg.dataset.subsample_fraction = value;
  } else if (parameter == "trigger_fraction") {
    if (cfg.intervention.kind != "lockdown")
      throw ConfigError("sweep over trigger_fraction needs a lockdown intervention");
    cfg.intervention.trigger_fraction = value;
  } else if (parameter == "duration_days") {
    if (cfg.intervention.kind != "lockdown")
      throw ConfigError("sweep over duration_days needs a lockdown intervention");
    cfg.intervention.duration_days = as_int("duration_days");
  } else if (parameter == "drop_prob") {
    if (cfg.intervention.kind != "lockdown")
      throw ConfigError("sweep over drop_prob needs a lockdown intervention");
    cfg.intervention.drop_prob = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  try {
    cfg.model.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sweep value rejected: ") + e.what());
  }
}

}  // namespace mobcon
