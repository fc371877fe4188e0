// Copyright 2026 The topp-ni Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "topp_ni/constraints.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/path.hpp"
#include "topp_ni/planner.hpp"

namespace topp_ni {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BezierPathConfig {
  std::array<Point2, 4> points{};
  std::size_t samples = 201;

  friend bool operator==(const BezierPathConfig& a, const BezierPathConfig& b) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (a.points[i].x != b.points[i].x || a.points[i].y != b.points[i].y) {
        return false;
      }
    }
    return a.samples == b.samples;
  }
};

// kind is line (length), circle (radius, length) or clothoid (length, rate,
// zero_at).
struct AnalyticPathConfig {
  std::string kind;
  std::map<std::string, double> params;

  friend bool operator==(const AnalyticPathConfig&,
                         const AnalyticPathConfig&) = default;
};

using PathConfig = std::variant<BezierPathConfig, AnalyticPathConfig>;

struct UnicycleBoundsConfig {
  std::array<double, 2> v_max{};
  std::array<double, 2> a_max{};

  friend bool operator==(const UnicycleBoundsConfig&,
                         const UnicycleBoundsConfig&) = default;
};

struct TabulatedRowsConfig {
  std::vector<double> s;
  std::vector<std::vector<std::array<double, 3>>> accel;     // [a, b, c]
  std::vector<std::vector<std::array<double, 2>>> velocity;  // [a, d]

  friend bool operator==(const TabulatedRowsConfig&,
                         const TabulatedRowsConfig&) = default;
};

using ConstraintConfig = std::variant<UnicycleBoundsConfig, TabulatedRowsConfig>;

struct InstanceConfig {
  std::optional<PathConfig> path;  // required for unicycle bounds
  ConstraintConfig constraints;
  double sdot_start = 0.0;
  double sdot_end = 0.0;
  Numerics numerics;

  friend bool operator==(const InstanceConfig&, const InstanceConfig&) = default;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw ConfigError("config: missing '" + std::string(key) + "' in " + where);
  }
  return j.at(key);
}

inline const std::map<std::string, std::vector<std::string>>& analytic_params() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"line", {"length"}},
      {"circle", {"radius", "length"}},
      {"clothoid", {"length", "rate", "zero_at"}},
  };
  return table;
}

inline PathConfig parse_path(const json& j) {
  const std::string type = require(j, "type", "path").get<std::string>();
  if (type == "bezier") {
    check_keys(j, {"type", "points", "samples"}, "path");
    BezierPathConfig b;
    const auto& pts = require(j, "points", "path");
    if (!pts.is_array() || pts.size() != 4) {
      throw ConfigError("config: bezier path needs exactly 4 points");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      const auto xy = pts[i].get<std::array<double, 2>>();
      b.points[i] = {xy[0], xy[1]};
    }
    if (j.contains("samples")) b.samples = j.at("samples").get<std::size_t>();
    return b;
  }
  if (type == "analytic") {
    check_keys(j, {"type", "kind", "params"}, "path");
    AnalyticPathConfig a;
    a.kind = require(j, "kind", "path").get<std::string>();
    const auto it = analytic_params().find(a.kind);
    if (it == analytic_params().end()) {
      throw ConfigError("config: unknown analytic path kind '" + a.kind + "'");
    }
    const auto& params = require(j, "params", "path");
    if (!params.is_object()) throw ConfigError("config: path params must be an object");
    for (const auto& [key, value] : params.items()) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError("config: unknown parameter '" + key + "' for " + a.kind);
      }
      a.params[key] = value.get<double>();
    }
    for (const auto& key : it->second) {
      if (!a.params.contains(key)) {
        throw ConfigError("config: " + a.kind + " needs parameter '" + key + "'");
      }
    }
    return a;
  }
  throw ConfigError("config: unknown path type '" + type + "'");
}

inline ConstraintConfig parse_constraints(const json& j) {
  if (j.contains("type") && j.at("type") == "tabulated") {
    check_keys(j, {"type", "s", "accel", "velocity"}, "constraints");
    TabulatedRowsConfig t;
    t.s = require(j, "s", "constraints").get<std::vector<double>>();
    t.accel = require(j, "accel", "constraints")
                  .get<std::vector<std::vector<std::array<double, 3>>>>();
    if (j.contains("velocity")) {
      t.velocity =
          j.at("velocity").get<std::vector<std::vector<std::array<double, 2>>>>();
    }
    return t;
  }
  check_keys(j, {"type", "v_max", "a_max"}, "constraints");
  if (j.contains("type") && j.at("type") != "unicycle") {
    throw ConfigError("config: unknown constraints type");
  }
  UnicycleBoundsConfig u;
  u.v_max = require(j, "v_max", "constraints").get<std::array<double, 2>>();
  u.a_max = require(j, "a_max", "constraints").get<std::array<double, 2>>();
  return u;
}

}  // namespace detail

inline InstanceConfig parse_config(const nlohmann::json& j) {
  using detail::check_keys;
  using detail::require;
  try {
    check_keys(j, {"path", "constraints", "boundary", "numerics"}, "config");
    InstanceConfig c;
    if (j.contains("path")) c.path = detail::parse_path(j.at("path"));
    c.constraints = detail::parse_constraints(require(j, "constraints", "config"));
    if (std::holds_alternative<UnicycleBoundsConfig>(c.constraints) && !c.path) {
      throw ConfigError("config: unicycle constraints need a path");
    }
    if (j.contains("boundary")) {
      const auto& b = j.at("boundary");
      check_keys(b, {"sdot_start", "sdot_end"}, "boundary");
      if (b.contains("sdot_start")) c.sdot_start = b.at("sdot_start").get<double>();
      if (b.contains("sdot_end")) c.sdot_end = b.at("sdot_end").get<double>();
    }
    if (c.sdot_start < 0.0 || c.sdot_end < 0.0) {
      throw ConfigError("config: boundary velocities must be >= 0");
    }
    if (j.contains("numerics")) {
      const auto& n = j.at("numerics");
      check_keys(n, {"grid", "step", "switch_cap"}, "numerics");
      if (n.contains("grid")) c.numerics.grid = n.at("grid").get<std::size_t>();
      if (n.contains("step")) c.numerics.step = n.at("step").get<double>();
      if (n.contains("switch_cap")) {
        c.numerics.switch_cap = n.at("switch_cap").get<std::size_t>();
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline InstanceConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

inline InstanceConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// Every field is written, defaults included.
inline nlohmann::json to_json(const InstanceConfig& c) {
  nlohmann::json j;
  if (c.path) {
    if (const auto* b = std::get_if<BezierPathConfig>(&*c.path)) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : b->points) pts.push_back({p.x, p.y});
      j["path"] = {{"type", "bezier"}, {"points", pts}, {"samples", b->samples}};
    } else {
      const auto& a = std::get<AnalyticPathConfig>(*c.path);
      j["path"] = {{"type", "analytic"}, {"kind", a.kind}, {"params", a.params}};
    }
  }
  if (const auto* u = std::get_if<UnicycleBoundsConfig>(&c.constraints)) {
    j["constraints"] = {{"type", "unicycle"}, {"v_max", u->v_max}, {"a_max", u->a_max}};
  } else {
    const auto& t = std::get<TabulatedRowsConfig>(c.constraints);
    j["constraints"] = {{"type", "tabulated"},
                        {"s", t.s},
                        {"accel", t.accel},
                        {"velocity", t.velocity}};
  }
  j["boundary"] = {{"sdot_start", c.sdot_start}, {"sdot_end", c.sdot_end}};
  j["numerics"] = {{"grid", c.numerics.grid},
                   {"step", c.numerics.step},
                   {"switch_cap", c.numerics.switch_cap}};
  return j;
}

inline std::string serialize_config(const InstanceConfig& c) {
  return to_json(c).dump(2) + "\n";
}

inline PathSpec build_path(const PathConfig& pc) {
  if (const auto* b = std::get_if<BezierPathConfig>(&pc)) {
    return to_path_spec(bezier_build(b->points, b->samples));
  }
  const auto& a = std::get<AnalyticPathConfig>(pc);
  const auto& p = a.params;
  if (a.kind == "line") return PathSpec::line(p.at("length"));
  if (a.kind == "circle") return PathSpec::circle(p.at("radius"), p.at("length"));
  return PathSpec::clothoid(p.at("length"), p.at("rate"), p.at("zero_at"));
}

inline ConstraintProfile build_constraints(const InstanceConfig& c) {
  if (const auto* u = std::get_if<UnicycleBoundsConfig>(&c.constraints)) {
    return unicycle_constraints(build_path(*c.path), u->v_max, u->a_max);
  }
  const auto& t = std::get<TabulatedRowsConfig>(c.constraints);
  std::vector<std::vector<AccelRow>> accel;
  for (const auto& rows : t.accel) {
    auto& out = accel.emplace_back();
    for (const auto& r : rows) out.push_back({r[0], r[1], r[2]});
  }
  std::vector<std::vector<VelocityRow>> velocity;
  for (const auto& rows : t.velocity) {
    auto& out = velocity.emplace_back();
    for (const auto& r : rows) out.push_back({r[0], r[1]});
  }
  return tabulated_constraints(t.s, std::move(accel), std::move(velocity));
}

}  // namespace topp_ni
