#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "phononbus/errors.hpp"

namespace phononbus::cli {

using json = nlohmann::json;

// Parameter schemas are closed: a key that is not listed for the scheme is
// rejected, never silently ignored, so a typo in a config file cannot turn
// into a run with defaults the user did not ask for.
enum class ParamKind { Number, Int, Bool, String, IntArray, StringArray };

struct ParamSpec {
  ParamKind kind = ParamKind::Number;
  json def;
};

// std::map keeps keys sorted, which makes every iteration over a schema or
// parameter set deterministic.
using ParamSchema = std::map<std::string, ParamSpec>;

inline const std::map<std::string, ParamSchema>& scheme_schemas() {
  static const std::map<std::string, ParamSchema> schemas = {
      {"modes",
       {{"n", {ParamKind::Int, 3}}}},
      {"heat",
       {{"n", {ParamKind::Int, 1}},
        {"e_rms", {ParamKind::Number, 0.03}},
        {"coherence_time", {ParamKind::Number, 100.0}},
        {"duration", {ParamKind::Number, 1200.0}},
        {"n0", {ParamKind::Number, 0.0}},
        {"samples", {ParamKind::Int, 60}}}},
      {"kick",
       {{"eta", {ParamKind::Number, 1.5}},
        {"modes", {ParamKind::Int, 1}},
        {"flip_fraction", {ParamKind::Number, 0.5}}}},
      {"ms",
       {{"delta", {ParamKind::Number, 20.0}},
        {"eta_scale", {ParamKind::Number, 0.0175}},
        {"drive_cost", {ParamKind::Number, 3.1172e-3}},
        {"n0", {ParamKind::Int, 0}}}},
      {"dhm",
       {{"rabi", {ParamKind::Number, 10.0}},
        {"delta", {ParamKind::Number, 50.0}},
        {"eta", {ParamKind::Number, 0.2}},
        {"integrated", {ParamKind::Bool, true}}}},
      {"stirap",
       {{"peak", {ParamKind::Number, 2.0}},
        {"t_total", {ParamKind::Number, 100.0}},
        {"detuning", {ParamKind::Number, 1.0}},
        {"n0", {ParamKind::Int, 0}},
        {"direction", {ParamKind::String, "raise"}}}},
      {"crot",
       {{"program",
         {ParamKind::StringArray, json::array({"S_t", "A+", "S_t", "A-"})}},
        {"integrated", {ParamKind::Bool, false}},
        {"n0", {ParamKind::Int, 2}}}},
      {"spectator",
       {{"n", {ParamKind::Int, 3}},
        {"bus_mode", {ParamKind::Int, 1}},
        {"addressed_ion", {ParamKind::Int, 0}},
        {"populations", {ParamKind::IntArray, json::array({0, 1, 0})}}}},
  };
  return schemas;
}

inline std::string scheme_names() {
  std::string names;
  for (const auto& [name, schema] : scheme_schemas()) {
    (void)schema;
    if (!names.empty()) names += ", ";
    names += name;
  }
  return names;
}

namespace detail_cfg {

inline const char* kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::Number: return "a number";
    case ParamKind::Int: return "an integer";
    case ParamKind::Bool: return "a boolean";
    case ParamKind::String: return "a string";
    case ParamKind::IntArray: return "an array of integers";
    case ParamKind::StringArray: return "an array of strings";
  }
  return "?";
}

inline bool matches_kind(const json& value, ParamKind kind) {
  switch (kind) {
    case ParamKind::Number:
      return value.is_number();
    case ParamKind::Int:
      return value.is_number_integer();
    case ParamKind::Bool:
      return value.is_boolean();
    case ParamKind::String:
      return value.is_string();
    case ParamKind::IntArray: {
      if (!value.is_array()) return false;
      for (const json& v : value)
        if (!v.is_number_integer()) return false;
      return true;
    }
    case ParamKind::StringArray: {
      if (!value.is_array()) return false;
      for (const json& v : value)
        if (!v.is_string()) return false;
      return true;
    }
  }
  return false;
}

inline void require_object(const json& value, const std::string& where) {
  if (!value.is_object()) {
    throw ConfigError("config: '" + where + "' must be a JSON object");
  }
}

}  // namespace detail_cfg

// Everything a run needs, resolved from defaults, config file, and command
// line (in that order of increasing precedence). `threads` comes from the
// environment only and is deliberately absent from the canonical text: the
// same experiment must hash and serialize identically at any thread count.
struct ExperimentConfig {
  std::string scheme;
  std::uint64_t seed = 1;
  int cutoff = 10;
  long trials = 200;
  int threads = 1;
  std::string out_dir = ".";
  bool svg = false;
  json params = json::object();
  json sweep = json::object();

  const ParamSchema& schema() const {
    const auto& schemas = scheme_schemas();
    const auto it = schemas.find(scheme);
    if (it == schemas.end()) {
      throw ConfigError("config: unknown scheme '" + scheme +
                        "' (known schemes: " + scheme_names() + ")");
    }
    return it->second;
  }

  // Canonical one-line JSON echo: the experiment identity. Output location
  // and rendering flags are plumbing and stay out of it.
  std::string canonical_text() const {
    json c = json::object();
    c["cutoff"] = cutoff;
    c["params"] = params;
    c["scheme"] = scheme;
    c["seed"] = seed;
    if (!sweep.empty()) c["sweep"] = sweep;
    c["trials"] = trials;
    return c.dump();
  }
};

// Fills cfg.params with schema defaults, overlays user values, and rejects
// unknown keys and type mismatches.
inline void resolve_params(ExperimentConfig& cfg, const json& user_params) {
  detail_cfg::require_object(user_params, "params");
  const ParamSchema& schema = cfg.schema();
  for (const auto& [key, value] : user_params.items()) {
    const auto it = schema.find(key);
    if (it == schema.end()) {
      throw ConfigError("config: unknown key '" + key + "' in params for '" +
                        cfg.scheme + "'");
    }
    if (!detail_cfg::matches_kind(value, it->second.kind)) {
      throw ConfigError("config: params." + key + " must be " +
                        detail_cfg::kind_name(it->second.kind));
    }
  }
  json resolved = json::object();
  for (const auto& [key, spec] : schema) {
    resolved[key] =
        user_params.contains(key) ? user_params.at(key) : spec.def;
  }
  cfg.params = std::move(resolved);
}

// A sweep grid: swept keys in sorted order, each with its value list. The
// last key varies fastest, so row order is the lexicographic order of the
// value-index tuples.
struct SweepGrid {
  std::vector<std::string> keys;
  std::vector<std::vector<json>> values;
  std::size_t total = 1;

  bool empty() const { return keys.empty(); }

  // Decodes a flat grid index into one value per key (mixed radix, last key
  // fastest) and returns the key -> value assignment.
  std::vector<json> point(std::size_t index) const {
    std::vector<json> out(keys.size());
    std::size_t rem = index;
    for (std::size_t k = keys.size(); k-- > 0;) {
      const std::size_t width = values[k].size();
      out[k] = values[k][rem % width];
      rem /= width;
    }
    return out;
  }
};

inline SweepGrid resolve_sweep(const ExperimentConfig& cfg) {
  SweepGrid grid;
  if (cfg.sweep.empty()) return grid;
  detail_cfg::require_object(cfg.sweep, "sweep");
  const ParamSchema& schema = cfg.schema();
  // json objects iterate in key order, so `keys` comes out sorted.
  for (const auto& [key, value] : cfg.sweep.items()) {
    const auto it = schema.find(key);
    if (it == schema.end()) {
      throw ConfigError("config: sweep key '" + key +
                        "' is not a parameter of '" + cfg.scheme + "'");
    }
    const ParamKind kind = it->second.kind;
    if (kind != ParamKind::Number && kind != ParamKind::Int) {
      throw ConfigError("config: sweep key '" + key +
                        "' is not a numeric parameter");
    }
    if (!value.is_array() || value.empty()) {
      throw ConfigError("config: sweep." + key +
                        " must be a non-empty array of values");
    }
    std::vector<json> list;
    for (const json& v : value) {
      if (!detail_cfg::matches_kind(v, kind)) {
        throw ConfigError("config: sweep." + key + " values must each be " +
                          std::string(detail_cfg::kind_name(kind)));
      }
      list.push_back(v);
    }
    grid.keys.push_back(key);
    grid.values.push_back(std::move(list));
  }
  if (grid.keys.size() > 3) {
    throw ConfigError("config: sweep supports at most 3 parameters, got " +
                      std::to_string(grid.keys.size()));
  }
  grid.total = 1;
  for (const std::vector<json>& list : grid.values) {
    grid.total *= list.size();
    if (grid.total > 10000) {
      throw ConfigError("config: sweep grid exceeds the 10000-point cap");
    }
  }
  return grid;
}

// Applies a config file on top of cfg. The scheme key, when present, must
// agree with the command-line scheme: a config written for one experiment
// silently driving another is exactly the mistake this tool refuses.
inline void apply_config_file(ExperimentConfig& cfg, const json& file,
                              json& user_params) {
  detail_cfg::require_object(file, "top level");
  static const std::set<std::string> allowed = {
      "scheme", "seed", "cutoff", "trials", "out", "svg", "params", "sweep"};
  for (const auto& [key, value] : file.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError("config: unknown top-level key '" + key + "'");
    }
  }
  if (file.contains("scheme")) {
    if (!file.at("scheme").is_string()) {
      throw ConfigError("config: scheme must be a string");
    }
    const std::string s = file.at("scheme").get<std::string>();
    if (s != cfg.scheme) {
      throw ConfigError("config: file is for scheme '" + s +
                        "' but the command asked for '" + cfg.scheme + "'");
    }
  }
  if (file.contains("seed")) {
    if (!file.at("seed").is_number_unsigned() &&
        !(file.at("seed").is_number_integer() &&
          file.at("seed").get<std::int64_t>() >= 0)) {
      throw ConfigError("config: seed must be a non-negative integer");
    }
    cfg.seed = file.at("seed").get<std::uint64_t>();
  }
  if (file.contains("cutoff")) {
    if (!file.at("cutoff").is_number_integer()) {
      throw ConfigError("config: cutoff must be an integer");
    }
    cfg.cutoff = file.at("cutoff").get<int>();
  }
  if (file.contains("trials")) {
    if (!file.at("trials").is_number_integer()) {
      throw ConfigError("config: trials must be an integer");
    }
    cfg.trials = file.at("trials").get<long>();
  }
  if (file.contains("out")) {
    if (!file.at("out").is_string()) {
      throw ConfigError("config: out must be a string");
    }
    cfg.out_dir = file.at("out").get<std::string>();
  }
  if (file.contains("svg")) {
    if (!file.at("svg").is_boolean()) {
      throw ConfigError("config: svg must be a boolean");
    }
    cfg.svg = file.at("svg").get<bool>();
  }
  if (file.contains("params")) user_params = file.at("params");
  if (file.contains("sweep")) cfg.sweep = file.at("sweep");
}

}  // namespace phononbus::cli
