// pvmpc: batch driver for closed-loop simulations, controller comparisons,
// size sweeps, system sizing and synthetic weather generation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvmpc/config.hpp"
#include "pvmpc/error.hpp"
#include "pvmpc/experiments.hpp"
#include "pvmpc/plant.hpp"
#include "pvmpc/sizing.hpp"
#include "pvmpc/synth.hpp"

namespace fs = std::filesystem;
using namespace pvmpc;

namespace {

constexpr int kDeskHorizon = 36;
constexpr int kPaperHorizon = 144;

struct Global {
  std::string config_path;
  std::string out_dir = "out";
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  bool paper_scale = false;
};

struct ScenarioArgs {
  std::string weather_path;
  std::string house_path;
  std::string profile = "post-storm";
  int days = 7;
  std::optional<int> horizon;
  std::optional<double> gap;
  std::optional<double> time_limit;
  std::string dump_dir;
  bool quiet = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& a) {
  cmd->add_option("--weather", a.weather_path,
                  "weather CSV (default: synthetic profile from --seed)");
  cmd->add_option("--house-temp", a.house_path,
                  "indoor temperature CSV (default: daily sinusoid)");
  cmd->add_option("--profile", a.profile,
                  "synthetic profile when no --weather: clear|cloudy|post-storm");
  cmd->add_option("--days", a.days, "days to simulate")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", a.horizon, "planning horizon in steps");
  cmd->add_option("--gap", a.gap, "relative MIP gap limit");
  cmd->add_option("--time-limit", a.time_limit, "solver time limit per step (s)");
  cmd->add_option("--dump-dir", a.dump_dir, "write every MILP and plan here");
  cmd->add_flag("--quiet", a.quiet, "no progress output");
}

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::is_regular_file(path)) {
    throw DataError(std::string(what) + " not found: '" + path + "'");
  }
}

SystemConfig load_system_config(const Global& g, const ScenarioArgs* a) {
  require_file(g.config_path, "config file");
  SystemConfig cfg = g.config_path.empty() ? SystemConfig{} : load_config(g.config_path);
  cfg.horizon_steps = g.paper_scale ? kPaperHorizon : kDeskHorizon;
  if (a && a->horizon) cfg.horizon_steps = *a->horizon;
  cfg.validate();
  return cfg;
}

Scenario load_scenario(const Global& g, const ScenarioArgs& a,
                       const SystemConfig& cfg, std::size_t steps) {
  require_file(a.weather_path, "weather file");
  require_file(a.house_path, "house temperature file");
  Scenario s;
  s.schedule = cfg.loads;
  if (a.weather_path.empty()) {
    SynthOptions o;
    o.days = a.days;
    o.profile = parse_profile(a.profile);
    o.seed = g.seed;
    o.step_minutes = step_minutes(cfg.step_hours);
    s.weather = synth_weather(o);
  } else {
    s.weather = parse_weather_csv(a.weather_path, cfg.step_hours, steps);
  }
  if (!a.house_path.empty()) s.house = load_house_trace(a.house_path);
  return s;
}

RunOptions run_options(const ScenarioArgs& a, const SystemConfig& cfg,
                       std::size_t steps, const std::string& tag) {
  RunOptions o;
  o.steps = steps;
  if (a.gap) o.plan.solver.rel_gap_limit = *a.gap;
  if (a.time_limit) o.plan.solver.time_limit_s = *a.time_limit;
  o.plan.solver.validate();
  if (!a.dump_dir.empty()) {
    fs::create_directories(a.dump_dir);
    o.plan.dump_dir = fs::path(a.dump_dir);
  }
  if (!a.quiet) {
    const std::size_t every = static_cast<std::size_t>(std::llround(24.0 / cfg.step_hours));
    o.progress = [tag, every](std::size_t k, std::size_t n) {
      if (k % every == 0 || k == n) {
        std::fprintf(stderr, "[%s] step %zu/%zu\n", tag.c_str(), k, n);
      }
    };
  }
  return o;
}

std::size_t steps_for(const ScenarioArgs& a, const SystemConfig& cfg) {
  return static_cast<std::size_t>(a.days) *
         static_cast<std::size_t>(std::llround(24.0 / cfg.step_hours));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

std::string run_summary(const ControllerRun& run) {
  auto j = nlohmann::json::parse(metrics_to_json(run.metrics));
  j["controller"] = to_string(run.trace.controller);
  j["steps"] = run.trace.steps.size();
  j["wall_time_s"] = run.wall_time_s;
  if (run.trace.controller == ControllerKind::kProposed) {
    std::size_t stalls = 0, degraded = 0;
    double solve_time = 0.0;
    for (const auto& s : run.trace.steps) {
      if (!s.solver) continue;
      stalls += s.solver->time_limited ? 1 : 0;
      degraded += s.solver->degraded ? 1 : 0;
      solve_time += s.solver->wall_time_s;
    }
    const double n = static_cast<double>(run.trace.steps.size());
    j["solver"] = {{"stalls", stalls},
                   {"stall_pct", 100.0 * static_cast<double>(stalls) / n},
                   {"degraded_steps", degraded},
                   {"mean_solve_time_s", solve_time / n}};
  }
  return j.dump(2) + "\n";
}

void write_run(const fs::path& dir, const ControllerRun& run) {
  const std::string tag = to_string(run.trace.controller);
  write_trace_csv(dir / ("trace_" + tag + ".csv"), run.trace);
  write_text(dir / ("metrics_" + tag + ".json"), run_summary(run));
  if (run.trace.controller == ControllerKind::kProposed) {
    write_solver_log_csv(dir / "solver_log.csv", run.trace);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PV + battery home energy management: MPC vs rule-based control"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config_path, "system configuration (JSON)");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--jobs", g.jobs, "concurrent simulations")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for synthetic weather");
  app.add_flag("--paper-scale", g.paper_scale, "planning horizon of 144 steps (24 h)");

  ScenarioArgs sim_args, cmp_args, sweep_args;
  std::string controller = "proposed";
  auto* sim = app.add_subcommand("simulate", "run one controller in closed loop");
  sim->add_option("--controller", controller, "proposed|baseline");
  add_scenario_flags(sim, sim_args);

  auto* cmp = app.add_subcommand("compare", "run both controllers on one scenario");
  add_scenario_flags(cmp, cmp_args);

  auto* sweep = app.add_subcommand(
      "sweep-sizes", "baseline over sizes A-F and the proposed controller at A");
  add_scenario_flags(sweep, sweep_args);

  SizingSpec spec;
  auto* size = app.add_subcommand("size", "size a stand-alone PV + battery system");
  size->add_option("--demand", spec.daily_demand_wh, "daily energy demand (Wh)");
  size->add_option("--insolation", spec.insolation_psh, "peak sun hours per day");
  size->add_option("--storage-days", spec.storage_days, "days of storage");
  size->add_option("--voltage", spec.system_voltage, "system DC voltage");
  size->add_option("--dod", spec.battery.max_dod, "battery depth of discharge");
  size->add_option("--inverter-eff", spec.inverter_efficiency, "inverter efficiency");

  int synth_days = 7;
  std::string synth_profile = "post-storm";
  std::string synth_file;
  auto* synth = app.add_subcommand("synth-weather", "write a synthetic weather CSV");
  synth->add_option("--days", synth_days, "days")->check(CLI::PositiveNumber);
  synth->add_option("--profile", synth_profile, "clear|cloudy|post-storm");
  synth->add_option("--file", synth_file, "output file (default <out>/weather_<profile>.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out(g.out_dir);
    if (*sim) {
      const auto kind = parse_controller(controller);
      const SystemConfig cfg = load_system_config(g, &sim_args);
      const std::size_t steps = steps_for(sim_args, cfg);
      const Scenario sc = load_scenario(g, sim_args, cfg, steps);
      fs::create_directories(out);
      const auto run = run_and_score(kind, sc, cfg,
                                     run_options(sim_args, cfg, steps, to_string(kind)));
      write_run(out, run);
      std::cout << run_summary(run);
    } else if (*cmp) {
      const SystemConfig cfg = load_system_config(g, &cmp_args);
      const std::size_t steps = steps_for(cmp_args, cfg);
      const Scenario sc = load_scenario(g, cmp_args, cfg, steps);
      fs::create_directories(out);
      const auto c = compare_controllers(
          sc, cfg, run_options(cmp_args, cfg, steps, "compare"), g.jobs);
      write_run(out, c.baseline);
      write_run(out, c.proposed);
      const std::string table = comparison_table(c);
      write_text(out / "comparison.txt", table);
      std::cout << table;
    } else if (*sweep) {
      const SystemConfig cfg = load_system_config(g, &sweep_args);
      const std::size_t steps = steps_for(sweep_args, cfg);
      const Scenario sc = load_scenario(g, sweep_args, cfg, steps);
      fs::create_directories(out);
      auto opts = run_options(sweep_args, cfg, steps, "sweep");
      opts.progress = nullptr;
      const auto rows = sweep_sizes(sc, cfg, opts, g.jobs);
      const std::string table = sweep_table(rows);
      write_text(out / "sweep_sizes.csv", table);
      std::cout << table;
      const auto eq = cost_equivalence(rows);
      if (eq.label) {
        std::printf("baseline matches proposed@A at size %s, cost ratio %.3f\n",
                    eq.label->c_str(), eq.ratio);
      } else {
        std::printf("no ladder size matches proposed@A, cost ratio > %.3f\n", eq.ratio);
      }
    } else if (*size) {
      std::cout << describe_sizing(spec, size_system(spec));
    } else if (*synth) {
      SynthOptions o;
      o.days = synth_days;
      o.profile = parse_profile(synth_profile);
      o.seed = g.seed;
      const fs::path file =
          synth_file.empty() ? out / ("weather_" + synth_profile + ".csv") : fs::path(synth_file);
      if (file.has_parent_path()) fs::create_directories(file.parent_path());
      write_weather_csv(file, synth_weather(o));
      std::cout << file.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
