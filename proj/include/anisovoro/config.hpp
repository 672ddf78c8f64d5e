#pragma once

// Run configuration: one JSON schema shared by every CLI command, with
// dotted-path --set overrides. Parsing reports the offending field by
// name; parse -> serialize -> parse is the identity.

#include <string>

#include "anisovoro/distance.hpp"
#include "anisovoro/grid.hpp"

namespace anisovoro {

struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& f, const std::string& why)
      : std::runtime_error("config field '" + f + "': " + why), field(f) {}
};

struct RunConfig {
  int dim = 2;
  std::vector<double> box_min, box_max;
  std::vector<int> grid_res;
  nlohmann::json metric;  // {"preset":..., "params":...} or {"plgrid": path}
  DistanceKind kind = DistanceKind::DW;

  enum class StopKind { TargetEpsilon, TargetEpsSigma, OrphanFree, MaxSites };
  StopKind stop_kind = StopKind::MaxSites;
  double stop_value = 0;  // epsilon or eps*sigma target
  int stop_sites = 64;

  uint64_t seed = 1;
  std::string out_dir = "out";
  double safety_factor = 1.10;
  int samples_per_cell_segment = 4;
  int check_every = 8;
  int max_sites = 100000;

  std::vector<int> sigma_res;  // defaults chosen per dim when empty
  int sigma_refine_rounds = 4;
  int64_t sigma_pair_budget = 2'000'000;

  std::vector<int> default_sigma_res() const {
    if (!sigma_res.empty()) return sigma_res;
    return std::vector<int>(static_cast<size_t>(dim), dim == 2 ? 33 : 11);
  }
};

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field)) throw ConfigError(field, "missing");
    return j.at(field);
  };
  c.dim = require("dim").get<int>();
  if (c.dim != 2 && c.dim != 3) throw ConfigError("dim", "must be 2 or 3");

  const auto& box = require("box");
  if (!box.contains("min") || !box.contains("max"))
    throw ConfigError("box", "needs min and max arrays");
  c.box_min = box.at("min").get<std::vector<double>>();
  c.box_max = box.at("max").get<std::vector<double>>();
  if (static_cast<int>(c.box_min.size()) != c.dim ||
      static_cast<int>(c.box_max.size()) != c.dim)
    throw ConfigError("box", "min/max must have dim entries");
  for (int i = 0; i < c.dim; ++i)
    if (!(c.box_min[static_cast<size_t>(i)] < c.box_max[static_cast<size_t>(i)]))
      throw ConfigError("box", "min must be strictly below max per axis");

  c.grid_res = require("grid").get<std::vector<int>>();
  if (static_cast<int>(c.grid_res.size()) != c.dim)
    throw ConfigError("grid", "must have dim entries");
  for (int r : c.grid_res)
    if (r < 8) throw ConfigError("grid", "resolution must be >= 8 per axis");

  c.metric = require("metric");
  if (!c.metric.contains("preset") && !c.metric.contains("plgrid"))
    throw ConfigError("metric", "needs either preset or plgrid");

  c.kind = kind_from_name(require("kind").get<std::string>());

  const auto& stop = require("stop");
  if (stop.contains("target_epsilon")) {
    c.stop_kind = RunConfig::StopKind::TargetEpsilon;
    c.stop_value = stop.at("target_epsilon").get<double>();
  } else if (stop.contains("target_eps_sigma")) {
    c.stop_kind = RunConfig::StopKind::TargetEpsSigma;
    c.stop_value = stop.at("target_eps_sigma").get<double>();
  } else if (stop.contains("orphan_free")) {
    c.stop_kind = RunConfig::StopKind::OrphanFree;
  } else if (stop.contains("max_sites")) {
    c.stop_kind = RunConfig::StopKind::MaxSites;
    c.stop_sites = stop.at("max_sites").get<int>();
  } else {
    throw ConfigError("stop", "needs target_epsilon, target_eps_sigma, orphan_free "
                              "or max_sites");
  }

  c.seed = j.value("seed", uint64_t{1});
  c.out_dir = j.value("out_dir", std::string("out"));
  c.safety_factor = j.value("safety_factor", 1.10);
  c.samples_per_cell_segment = j.value("samples_per_cell_segment", 4);
  c.check_every = j.value("check_every", 8);
  c.max_sites = j.value("max_sites", 100000);
  if (j.contains("sigma")) {
    const auto& s = j.at("sigma");
    if (s.contains("res")) c.sigma_res = s.at("res").get<std::vector<int>>();
    c.sigma_refine_rounds = s.value("refine_rounds", 4);
    c.sigma_pair_budget = s.value("pair_budget", int64_t{2'000'000});
  }
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["dim"] = c.dim;
  j["box"] = {{"min", c.box_min}, {"max", c.box_max}};
  j["grid"] = c.grid_res;
  j["metric"] = c.metric;
  j["kind"] = kind_name(c.kind);
  switch (c.stop_kind) {
    case RunConfig::StopKind::TargetEpsilon:
      j["stop"] = {{"target_epsilon", c.stop_value}};
      break;
    case RunConfig::StopKind::TargetEpsSigma:
      j["stop"] = {{"target_eps_sigma", c.stop_value}};
      break;
    case RunConfig::StopKind::OrphanFree:
      j["stop"] = {{"orphan_free", true}};
      break;
    case RunConfig::StopKind::MaxSites:
      j["stop"] = {{"max_sites", c.stop_sites}};
      break;
  }
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["safety_factor"] = c.safety_factor;
  j["samples_per_cell_segment"] = c.samples_per_cell_segment;
  j["check_every"] = c.check_every;
  j["max_sites"] = c.max_sites;
  j["sigma"] = {{"res", c.default_sigma_res()},
                {"refine_rounds", c.sigma_refine_rounds},
                {"pair_budget", c.sigma_pair_budget}};
  return j;
}

// Applies "path.to.field=json-value" onto a config object.
inline void apply_set_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError(assignment, "--set expects key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  nlohmann::json* cur = &j;
  size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError(path, "empty key segment");
    if (dot == std::string::npos) {
      (*cur)[key] = nlohmann::json::parse(value, nullptr, false).is_discarded()
                        ? nlohmann::json(value)
                        : nlohmann::json::parse(value);
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

template <int N>
inline Box<N> config_box(const RunConfig& c) {
  Box<N> b;
  for (int i = 0; i < N; ++i) {
    b.min[i] = c.box_min[static_cast<size_t>(i)];
    b.max[i] = c.box_max[static_cast<size_t>(i)];
  }
  return b;
}

template <int N>
inline Grid<N> config_grid(const RunConfig& c) {
  Grid<N> g;
  g.box = config_box<N>(c);
  for (int i = 0; i < N; ++i) g.res[i] = c.grid_res[static_cast<size_t>(i)];
  return g;
}

template <int N>
inline Grid<N> config_sigma_grid(const RunConfig& c) {
  Grid<N> g;
  g.box = config_box<N>(c);
  const auto res = c.default_sigma_res();
  for (int i = 0; i < N; ++i) g.res[i] = res[static_cast<size_t>(i)];
  return g;
}

}  // namespace anisovoro
