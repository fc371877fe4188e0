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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "topp_ni/error.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/planner.hpp"
#include "topp_ni/run_and_test.hpp"

namespace topp_ni::io {

// 12 significant digits; infinities as "inf".
inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline nlohmann::json jnum(double v) {
  if (!std::isfinite(v)) return num(v);
  return std::stod(num(v));
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

inline std::string limits_csv(const LimitCurves& lim) {
  std::string out = "s,mvc,vlim,mvc_star,is_dagger\n";
  const auto g = lim.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out += num(g[i]) + ',' + num(lim.mvc()[i]) + ',' + num(lim.vlim()[i]) + ',' +
           num(lim.mvc_star()[i]) + ',' + (lim.dagger_flags()[i] ? "1" : "0") + '\n';
  }
  return out;
}

inline std::string profiles_csv(const std::vector<PhaseProfile>& profiles) {
  std::string out = "s,sdot,kind,profile_id\n";
  for (const auto& p : profiles) {
    const std::string tail =
        ',' + std::string(to_string(p.kind)) + ',' + std::to_string(p.id) + '\n';
    for (const auto& q : p.samples) out += num(q.s) + ',' + num(q.sdot) + tail;
  }
  return out;
}

inline std::string switchpoints_csv(const std::vector<SwitchEvent>& log) {
  std::string out = "s,sdot,type,transition,status\n";
  for (const auto& e : log) {
    out += num(e.point.s) + ',' + num(e.point.sdot) + ',' +
           (e.type ? std::string(to_string(*e.type)) : std::string("crossing")) +
           ',' + std::string(to_string(e.transition)) + ',' +
           std::string(to_string(e.status)) + '\n';
  }
  return out;
}

inline nlohmann::json segments_json(const std::vector<PhaseProfile>& segs) {
  auto arr = nlohmann::json::array();
  for (const auto& p : segs) {
    arr.push_back({{"kind", to_string(p.kind)},
                   {"profile_id", p.id},
                   {"s_begin", jnum(p.begin())},
                   {"s_end", jnum(p.end())},
                   {"termination", to_string(p.termination)}});
  }
  return arr;
}

inline nlohmann::json switch_log_json(const std::vector<SwitchEvent>& log) {
  auto arr = nlohmann::json::array();
  for (const auto& e : log) {
    nlohmann::json row{{"transition", to_string(e.transition)},
                       {"s", jnum(e.point.s)},
                       {"sdot", jnum(e.point.sdot)},
                       {"profile_id", e.profile_id},
                       {"status", to_string(e.status)}};
    if (e.type) row["type"] = to_string(*e.type);
    if (e.superseded_by >= 0) row["superseded_by"] = e.superseded_by;
    arr.push_back(row);
  }
  return arr;
}

inline nlohmann::json intervals_json(const std::vector<Interval>& v) {
  auto arr = nlohmann::json::array();
  for (const auto& i : v) arr.push_back({jnum(i.begin), jnum(i.end)});
  return arr;
}

inline nlohmann::json rt_json(const RtReport& r) {
  auto steps = nlohmann::json::array();
  for (const auto& c : r.continuity_log) {
    steps.push_back({{"q_s", jnum(c.q.s)},
                     {"q_sdot", jnum(c.q.sdot)},
                     {"terminal", c.terminal},
                     {"intersected", c.intersected},
                     {"is_continuous", c.is_continuous},
                     {"s_last", jnum(c.s_last)}});
  }
  return {{"feasible", r.feasible},
          {"s_last", jnum(r.s_last)},
          {"gaps", intervals_json(r.gaps)},
          {"failure_segments", intervals_json(r.failure_segments)},
          {"continuity_log", steps},
          {"longest_time", jnum(r.longest.traversal_time)}};
}

inline nlohmann::json property6_json(const Property6Report& p) {
  nlohmann::json j{{"C1", p.c1},
                   {"C2", p.c2},
                   {"holds", p.holds()},
                   {"mvc_ddagger", intervals_json(p.mvc_ddagger)}};
  j["witness_s"] = p.witness ? jnum(*p.witness) : nlohmann::json(nullptr);
  auto cands = nlohmann::json::array();
  for (const auto& c : p.dagger_candidates) {
    cands.push_back({{"s", jnum(c.location.s)}, {"type", to_string(c.type)}});
  }
  j["dagger_candidates"] = cands;
  return j;
}

}  // namespace topp_ni::io
