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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "topp_ni/topp_ni.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace topp_ni;

namespace {

constexpr int kFeasible = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::size_t> grid;
  std::optional<double> step;
};

InstanceConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  InstanceConfig cfg = load_config(c.config);
  return cfg;
}

void apply_overrides(const Common& c, InstanceConfig& cfg) {
  if (c.grid) cfg.numerics.grid = *c.grid;
  if (c.step) cfg.numerics.step = *c.step;
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_report(const fs::path& dir, const json& report) {
  io::write_text(dir / "report.json", report.dump(2) + "\n");
}

// Runs NI and, on failure, the run-and-test diagnosis. Writes trajectory,
// profile and switch-point CSVs and fills the report.
int plan_into(const InstanceConfig& cfg, const ConstraintProfile& cp,
              const LimitCurves& lim, const fs::path& dir, json& report) {
  report["config"] = to_json(cfg);
  report["s_e"] = io::jnum(cp.length());
  try {
    const Trajectory t = ni_plan(cp, lim, cfg.sdot_start, cfg.sdot_end, cfg.numerics);
    report["verdict"] = "feasible";
    report["cause"] = nullptr;
    report["s_last"] = io::jnum(cp.length());
    report["traversal_time"] = io::jnum(t.traversal_time);
    report["segments"] = io::segments_json(t.segments);
    report["switch_points"] = io::switch_log_json(t.log);
    io::write_text(dir / "trajectory.csv", io::profiles_csv(t.segments));
    io::write_text(dir / "profiles.csv", io::profiles_csv(t.generated));
    io::write_text(dir / "switchpoints.csv", io::switchpoints_csv(t.log));
    return kFeasible;
  } catch (const PlanError& e) {
    if (e.cause() == PlanFailure::switch_cap) throw;
    const RtReport rt = rt_detect(cp, lim, cfg.sdot_start, cfg.sdot_end, cfg.numerics);
    report["verdict"] = "infeasible";
    report["cause"] = to_string(e.cause());
    report["message"] = e.what();
    report["s_last"] = io::jnum(rt.s_last);
    report["traversal_time"] = nullptr;
    report["segments"] = io::segments_json(e.partial().segments);
    report["switch_points"] = io::switch_log_json(e.partial().log);
    report["rt"] = io::rt_json(rt);
    io::write_text(dir / "trajectory.csv", io::profiles_csv(rt.longest.segments));
    io::write_text(dir / "profiles.csv", io::profiles_csv(e.partial().generated));
    io::write_text(dir / "switchpoints.csv", io::switchpoints_csv(e.partial().log));
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  }
}

json property6_into(const InstanceConfig& cfg, const ConstraintProfile& cp,
                    const LimitCurves& lim) {
  try {
    const Trajectory unbounded =
        plan_torque_only(cp, cfg.sdot_start, cfg.sdot_end, cfg.numerics);
    json j = io::property6_json(check_property6(cp, lim, unbounded));
    j["torque_only_time"] = io::jnum(unbounded.traversal_time);
    return j;
  } catch (const PlanError& e) {
    return {{"error", e.what()}};
  }
}

int cmd_mvc(const Common& c) {
  InstanceConfig cfg = load(c);
  apply_overrides(c, cfg);
  const ConstraintProfile cp = build_constraints(cfg);
  const LimitCurves lim = compute_limit_curves(cp, cfg.numerics.grid);
  io::write_text(out_dir(c) / "limits.csv", io::limits_csv(lim));
  return kFeasible;
}

int cmd_plan(const Common& c) {
  InstanceConfig cfg = load(c);
  apply_overrides(c, cfg);
  const ConstraintProfile cp = build_constraints(cfg);
  const LimitCurves lim = compute_limit_curves(cp, cfg.numerics.grid);
  const fs::path dir = out_dir(c);
  json report;
  const int code = plan_into(cfg, cp, lim, dir, report);
  write_report(dir, report);
  if (code == kFeasible) {
    std::cout << "feasible: time " << io::num(report["traversal_time"].get<double>())
              << " s\n";
  }
  return code;
}

int cmd_detect(const Common& c) {
  InstanceConfig cfg = load(c);
  apply_overrides(c, cfg);
  const ConstraintProfile cp = build_constraints(cfg);
  const LimitCurves lim = compute_limit_curves(cp, cfg.numerics.grid);
  const fs::path dir = out_dir(c);
  const RtReport rt = rt_detect(cp, lim, cfg.sdot_start, cfg.sdot_end, cfg.numerics);
  json report{{"config", to_json(cfg)},
              {"s_e", io::jnum(cp.length())},
              {"verdict", rt.feasible ? "feasible" : "infeasible"},
              {"s_last", io::jnum(rt.s_last)},
              {"rt", io::rt_json(rt)},
              {"property6", property6_into(cfg, cp, lim)}};
  io::write_text(dir / "trajectory.csv", io::profiles_csv(rt.longest.segments));
  io::write_text(dir / "profiles.csv", io::profiles_csv(rt.longest.generated));
  io::write_text(dir / "switchpoints.csv", io::switchpoints_csv(rt.longest.log));
  write_report(dir, report);
  std::cout << (rt.feasible ? "feasible" : "infeasible") << ": s_last "
            << io::num(rt.s_last) << " of " << io::num(cp.length()) << "\n";
  return rt.feasible ? kFeasible : kInfeasible;
}

int cmd_demo(const Common& c, int which) {
  InstanceConfig cfg = demo::config(which);
  apply_overrides(c, cfg);
  const ConstraintProfile cp = build_constraints(cfg);
  const LimitCurves lim = compute_limit_curves(cp, cfg.numerics.grid);
  const fs::path dir = out_dir(c);
  io::write_text(dir / "limits.csv", io::limits_csv(lim));
  json report;
  const int code = plan_into(cfg, cp, lim, dir, report);
  const json p6 = property6_into(cfg, cp, lim);
  report["property6"] = p6;
  if (!report.contains("rt")) {
    report["rt"] = io::rt_json(
        rt_detect(cp, lim, cfg.sdot_start, cfg.sdot_end, cfg.numerics));
  }
  write_report(dir, report);
  io::write_text(dir / "property6.json", p6.dump(2) + "\n");
  std::cout << "case " << which << ": " << report["verdict"].get<std::string>();
  if (p6.contains("C1")) {
    std::cout << ", C1=" << p6["C1"] << ", C2=" << p6["C2"];
  }
  std::cout << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal path parameterization with torque and velocity limits"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config, "instance JSON file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--grid", common.grid, "limit-curve grid size");
    sub->add_option("--step", common.step, "integration step ds");
  };
  auto* plan = app.add_subcommand("plan", "plan a time-optimal trajectory");
  add_common(plan, true);
  auto* detect = app.add_subcommand("detect-failure", "run-and-test failure diagnosis");
  add_common(detect, true);
  auto* mvc = app.add_subcommand("mvc", "write the limit curves");
  add_common(mvc, true);
  auto* demo = app.add_subcommand("demo-unicycle", "built-in unicycle demo");
  add_common(demo, false);
  int which = 1;
  demo->add_option("--case", which, "1 or 2")->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*plan) return cmd_plan(common);
    if (*detect) return cmd_detect(common);
    if (*mvc) return cmd_mvc(common);
    if (*demo) return cmd_demo(common, which);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
