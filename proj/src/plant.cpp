#include "pvmpc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pvmpc/baseline.hpp"
#include "pvmpc/devices.hpp"
#include "pvmpc/error.hpp"

namespace pvmpc {

PlantStepResult plant_step(const PlantState& state, const ControlCommand& cmd,
                           const WeatherRecord& weather, double t_house_c,
                           double e_secondary_wh, const SystemConfig& config) {
  if (!cmd.consistent()) throw ContractError("inconsistent control command");
  const auto& bat = config.battery;
  const double dt = config.step_hours;

  PlantFlows f;
  const double t_module = module_temperature(config.pv, weather.ghi_w_m2,
                                             weather.t_ambient_c, weather.wind_m_s);
  f.e_pv = pv_energy(config.pv, weather.ghi_w_m2, t_module, dt);

  const double e_fr = fridge_energy(config.fridge, dt);
  const int want_fr = cmd.u_fr;
  const int want_s = (cmd.u_s == 1 && e_secondary_wh > 0.0) ? 1 : 0;

  const bool engaged = cmd.charge.c == 1 || cmd.charge.d == 1;
  const double above_floor = std::max(0.0, state.e_bat_wh - bat.e_min_wh);
  // Delivered energy is capped so that E - E_dc/eta_dc never drops below the
  // floor.
  const double max_discharge =
      engaged ? std::min(above_floor * bat.eta_discharge, bat.e_discharge_max_wh)
              : 0.0;
  const double supply = f.e_pv + max_discharge;
  const auto house_load = [&](int fr, int s) {
    return (fr * e_fr + s * e_secondary_wh) / config.inverter_efficiency;
  };

  int fr = 0, s = 0;
  if (house_load(want_fr, want_s) <= supply) {
    fr = want_fr;
    s = want_s;
  } else if (house_load(want_fr, 0) <= supply) {
    fr = want_fr;
  }
  f.unserved_fr = (want_fr && !fr) ? e_fr : 0.0;
  f.unserved_s = (want_s && !s) ? e_secondary_wh : 0.0;

  f.e_hl = house_load(fr, s);
  f.e_hl_from_pv = std::min(f.e_pv, f.e_hl);
  f.e_discharge = std::min(f.e_hl - f.e_hl_from_pv, max_discharge);
  const double surplus = f.e_pv - f.e_hl_from_pv;
  if (cmd.charge.c == 1 && surplus > 0.0) {
    const double mode_cap =
        (cmd.charge.x_bat == 2 ? bat.fast_multiplier : 1.0) * bat.e_charge_max_wh;
    f.e_charge = std::max(
        0.0, std::min({surplus, bat.e_max_wh - state.e_bat_wh, mode_cap}));
  }
  f.e_pv_used = f.e_hl_from_pv + f.e_charge;
  f.e_pv_unused = f.e_pv - f.e_pv_used;

  PlantStepResult out;
  out.u_fr_applied = fr;
  out.u_s_applied = s;
  out.flows = f;
  out.next.e_bat_wh = std::clamp(
      battery_step(bat, state.e_bat_wh, f.e_charge, f.e_discharge),
      bat.e_min_wh, bat.e_max_wh);
  const FridgeDiscretization disc = fridge_discretize(config.fridge, dt);
  out.next.t_fr_c = fridge_step(disc, state.t_fr_c, fr, t_house_c);
  out.next.step_index = state.step_index + 1;
  out.next.u_fr_prev = fr;
  return out;
}

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::kProposed ? "proposed" : "baseline";
}

ControllerKind parse_controller(const std::string& name) {
  if (name == "proposed" || name == "mpc") return ControllerKind::kProposed;
  if (name == "baseline") return ControllerKind::kBaseline;
  throw DataError("unknown controller '" + name + "' (proposed|baseline)");
}

SimulationTrace run_closed_loop(ControllerKind controller,
                                const Scenario& scenario,
                                const SystemConfig& config,
                                const RunOptions& options) {
  config.validate();
  if (scenario.weather.empty()) throw DataError("scenario has no weather records");
  const std::int64_t step_min = step_minutes(config.step_hours);
  if (scenario.weather.step_minutes != step_min) {
    throw DataError("weather step does not match the simulation step");
  }
  const std::size_t steps =
      options.steps > 0 ? options.steps : scenario.weather.size();
  const auto horizon = static_cast<std::size_t>(config.horizon_steps);
  const std::size_t total = steps + horizon;

  const WeatherSeries weather = extend_repeating_last_day(scenario.weather, total);
  std::vector<Timestamp> grid;
  grid.reserve(total);
  for (std::size_t k = 0; k < total; ++k) grid.push_back(weather.records[k].timestamp);
  const std::vector<double> t_house =
      scenario.house
          ? align_house_trace(*scenario.house, grid)
          : sinusoid_house_trace(grid.front(), step_min, total).t_house_c;
  const std::vector<double> e_s =
      build_secondary_profile(scenario.schedule, grid, config.step_hours);
  std::vector<double> g_pot(total);
  for (std::size_t k = 0; k < total; ++k) {
    const auto& w = weather.records[k];
    g_pot[k] = pv_energy(config.pv, w.ghi_w_m2,
                         module_temperature(config.pv, w.ghi_w_m2, w.t_ambient_c,
                                            w.wind_m_s),
                         config.step_hours);
  }

  SimulationTrace trace;
  trace.controller = controller;
  trace.step_hours = config.step_hours;
  trace.steps.reserve(steps);

  PlantState state;
  state.e_bat_wh = config.initial_e_bat();
  state.t_fr_c = config.initial_t_fridge_c;

  BaselineController baseline;
  std::mt19937_64 rng(config.forecast_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double e_fr = fridge_energy(config.fridge, config.step_hours);

  for (std::size_t k = 0; k < steps; ++k) {
    StepRecord rec;
    rec.timestamp = grid[k];
    rec.state = state;
    rec.ghi_w_m2 = weather.records[k].ghi_w_m2;
    rec.t_ambient_c = weather.records[k].t_ambient_c;
    rec.wind_m_s = weather.records[k].wind_m_s;
    rec.t_house_c = t_house[k];
    rec.e_secondary_wh = e_s[k];

    ControlCommand applied;
    if (controller == ControllerKind::kProposed) {
      ForecastWindow fw;
      fw.g_avail_wh.assign(g_pot.begin() + k, g_pot.begin() + k + horizon);
      fw.t_house_c.assign(t_house.begin() + k, t_house.begin() + k + horizon);
      fw.e_secondary_wh.assign(e_s.begin() + k, e_s.begin() + k + horizon);
      if (config.forecast_noise_std_wh > 0.0) {
        for (auto& g : fw.g_avail_wh) {
          g = std::max(0.0, g + config.forecast_noise_std_wh * noise(rng));
        }
      }
      const MpcPlan p = plan(state, fw, config, options.plan);
      applied = p.commands.front();
      rec.requested = applied;
      SolverLogEntry log;
      log.status = milp::to_string(p.solver.status);
      log.rel_gap = p.solver.rel_gap;
      log.wall_time_s = p.solver.wall_time_s;
      log.nodes = p.solver.nodes;
      log.degraded = p.degraded;
      log.time_limited = p.solver.status == milp::MilpStatus::kTimeLimit;
      log.audit_error = p.audit_error;
      rec.solver = log;
      if (!p.degraded) {
        rec.predicted_e_bat_wh = p.predicted_e_bat_wh.front();
        rec.predicted_t_fr_c = p.predicted_t_fr_c.front();
      }
    } else {
      applied = baseline.decide(state, g_pot[k], e_s[k], config);
      rec.requested = applied;
      rec.requested.u_fr = baseline.requested_u_fr();
      rec.requested.u_s = baseline.requested_u_s();
    }

    const PlantStepResult res =
        plant_step(state, applied, weather.records[k], t_house[k], e_s[k], config);
    rec.u_fr_applied = res.u_fr_applied;
    rec.u_s_applied = res.u_s_applied;
    rec.flows = res.flows;
    // Loads the controller itself declined to grant count as unserved too.
    if (rec.requested.u_fr == 1 && rec.u_fr_applied == 0) rec.flows.unserved_fr = e_fr;
    if (rec.requested.u_s == 1 && e_s[k] > 0.0 && rec.u_s_applied == 0) {
      rec.flows.unserved_s = e_s[k];
    }
    trace.steps.push_back(std::move(rec));
    state = res.next;
    if (options.progress) options.progress(k + 1, steps);
  }
  trace.final_state = state;
  return trace;
}

ResiliencyMetrics compute_metrics(const SimulationTrace& trace, double t_min_c,
                                  double t_max_c, double tol_c) {
  if (trace.steps.empty()) throw ContractError("cannot score an empty trace");
  const double dt = trace.step_hours;
  const auto per_day = static_cast<std::size_t>(std::llround(24.0 / dt));
  ResiliencyMetrics m;
  m.per_day.resize((trace.steps.size() + per_day - 1) / per_day);
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    auto& day = m.per_day[k / per_day];
    ++day.steps;
    const double t = s.state.t_fr_c;
    if (t > t_max_c + tol_c || t < t_min_c - tol_c) day.temp_violation_hours += dt;
    if (s.flows.unserved_fr > 0.0) day.primary_unserved_hours += dt;
    if (s.e_secondary_wh > 0.0) {
      ++day.secondary_scheduled_steps;
      if (s.u_s_applied == 0) ++day.secondary_unserved_steps;
    }
  }
  double viol = 0.0, prim = 0.0;
  std::size_t sched = 0, unserved = 0;
  for (const auto& d : m.per_day) {
    viol += d.temp_violation_hours;
    prim += d.primary_unserved_hours;
    sched += d.secondary_scheduled_steps;
    unserved += d.secondary_unserved_steps;
  }
  m.days = static_cast<double>(trace.steps.size()) * dt / 24.0;
  m.temp_violation_hours_per_day = viol / m.days;
  m.primary_unserved_hours_per_day = prim / m.days;
  m.secondary_unserved_pct =
      sched == 0 ? 0.0 : 100.0 * static_cast<double>(unserved) / static_cast<double>(sched);
  return m;
}

namespace {

const char* kTraceHeader =
    "timestamp,T_fr,E_bat,u_fr_req,u_fr_applied,u_s_req,u_s_applied,gamma,c,d,"
    "x_bat,E_pv,E_pv_used,E_hl,E_c,E_dc,unserved_fr,unserved_s,E_pv_unused,"
    "E_hl_from_pv,E_s,T_house,ghi,T_ambient,wind";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const SimulationTrace& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << kTraceHeader << '\n';
  char buf[1024];
  for (const auto& s : trace.steps) {
    const auto& f = s.flows;
    std::snprintf(
        buf, sizeof buf,
        "%s,%.17g,%.17g,%d,%d,%d,%d,%.17g,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%."
        "17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
        s.timestamp.to_string().c_str(), s.state.t_fr_c, s.state.e_bat_wh,
        s.requested.u_fr, s.u_fr_applied, s.requested.u_s, s.u_s_applied,
        s.requested.gamma, s.requested.charge.c, s.requested.charge.d,
        s.requested.charge.x_bat, f.e_pv, f.e_pv_used, f.e_hl, f.e_charge,
        f.e_discharge, f.unserved_fr, f.unserved_s, f.e_pv_unused,
        f.e_hl_from_pv, s.e_secondary_wh, s.t_house_c, s.ghi_w_m2,
        s.t_ambient_c, s.wind_m_s);
    out << buf;
  }
}

SimulationTrace read_trace_csv(const std::filesystem::path& path,
                               double step_hours) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw DataError(path.string() + ": unexpected trace header");
  }
  SimulationTrace trace;
  trace.step_hours = step_hours;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 25) {
      throw DataError(path.string() + ": wrong column count at line " +
                      std::to_string(line_no));
    }
    try {
      StepRecord s;
      s.timestamp = Timestamp::parse(c[0]);
      s.state.t_fr_c = std::stod(c[1]);
      s.state.e_bat_wh = std::stod(c[2]);
      s.state.step_index = trace.steps.size();
      s.requested.u_fr = std::stoi(c[3]);
      s.u_fr_applied = std::stoi(c[4]);
      s.requested.u_s = std::stoi(c[5]);
      s.u_s_applied = std::stoi(c[6]);
      s.requested.gamma = std::stod(c[7]);
      s.requested.charge = {std::stoi(c[8]), std::stoi(c[9]), std::stoi(c[10])};
      auto& f = s.flows;
      f.e_pv = std::stod(c[11]);
      f.e_pv_used = std::stod(c[12]);
      f.e_hl = std::stod(c[13]);
      f.e_charge = std::stod(c[14]);
      f.e_discharge = std::stod(c[15]);
      f.unserved_fr = std::stod(c[16]);
      f.unserved_s = std::stod(c[17]);
      f.e_pv_unused = std::stod(c[18]);
      f.e_hl_from_pv = std::stod(c[19]);
      s.e_secondary_wh = std::stod(c[20]);
      s.t_house_c = std::stod(c[21]);
      s.ghi_w_m2 = std::stod(c[22]);
      s.t_ambient_c = std::stod(c[23]);
      s.wind_m_s = std::stod(c[24]);
      trace.steps.push_back(s);
    } catch (const std::logic_error&) {
      throw DataError(path.string() + ": unparsable row at line " +
                      std::to_string(line_no));
    }
  }
  return trace;
}

void write_solver_log_csv(const std::filesystem::path& path,
                          const SimulationTrace& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "step,timestamp,status,rel_gap,wall_time_s,nodes,degraded,time_limited,"
         "audit_error\n";
  char buf[256];
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    if (!s.solver) continue;
    const auto& l = *s.solver;
    std::snprintf(buf, sizeof buf, "%zu,%s,%s,%.9g,%.6f,%lld,%d,%d,%.3g\n", k,
                  s.timestamp.to_string().c_str(), l.status.c_str(), l.rel_gap,
                  l.wall_time_s, static_cast<long long>(l.nodes), l.degraded ? 1 : 0,
                  l.time_limited ? 1 : 0, l.audit_error);
    out << buf;
  }
}

std::string metrics_to_json(const ResiliencyMetrics& m) {
  nlohmann::json j;
  j["days"] = m.days;
  j["temp_violation_hours_per_day"] = m.temp_violation_hours_per_day;
  j["secondary_unserved_pct"] = m.secondary_unserved_pct;
  j["primary_unserved_hours_per_day"] = m.primary_unserved_hours_per_day;
  auto& days = j["per_day"] = nlohmann::json::array();
  for (const auto& d : m.per_day) {
    days.push_back({{"steps", d.steps},
                    {"temp_violation_hours", d.temp_violation_hours},
                    {"primary_unserved_hours", d.primary_unserved_hours},
                    {"secondary_scheduled_steps", d.secondary_scheduled_steps},
                    {"secondary_unserved_steps", d.secondary_unserved_steps}});
  }
  return j.dump(2) + "\n";
}

ResiliencyMetrics metrics_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ResiliencyMetrics m;
    m.days = j.at("days").get<double>();
    m.temp_violation_hours_per_day = j.at("temp_violation_hours_per_day").get<double>();
    m.secondary_unserved_pct = j.at("secondary_unserved_pct").get<double>();
    m.primary_unserved_hours_per_day =
        j.at("primary_unserved_hours_per_day").get<double>();
    for (const auto& d : j.at("per_day")) {
      DayMetrics dm;
      dm.steps = d.at("steps").get<std::size_t>();
      dm.temp_violation_hours = d.at("temp_violation_hours").get<double>();
      dm.primary_unserved_hours = d.at("primary_unserved_hours").get<double>();
      dm.secondary_scheduled_steps = d.at("secondary_scheduled_steps").get<std::size_t>();
      dm.secondary_unserved_steps = d.at("secondary_unserved_steps").get<std::size_t>();
      m.per_day.push_back(dm);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("metrics summary: ") + e.what());
  }
}

}  // namespace pvmpc
