#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "pvmpc/devices.hpp"
#include "pvmpc/error.hpp"
#include "pvmpc/plant.hpp"
#include "pvmpc/synth.hpp"

using namespace pvmpc;

namespace {

ControlCommand command(int u_fr, int u_s, double gamma) {
  ControlCommand c;
  c.u_fr = u_fr;
  c.u_s = u_s;
  c.gamma = gamma;
  c.charge = gamma_to_discrete(gamma);
  return c;
}

WeatherRecord sun(double ghi) {
  WeatherRecord w;
  w.ghi_w_m2 = ghi;
  w.t_ambient_c = 25.0;
  w.wind_m_s = 0.0;
  return w;
}

void check_identities(const PlantFlows& f) {
  CHECK(std::abs(f.e_pv - f.e_pv_used - f.e_pv_unused) <= 1e-9);
  CHECK(std::abs(f.e_pv_used - f.e_hl_from_pv - f.e_charge) <= 1e-9);
  CHECK(f.e_pv_used >= 0.0);
  CHECK(f.e_pv_unused >= -1e-12);
  CHECK(f.e_charge >= 0.0);
  CHECK(f.e_discharge >= 0.0);
  CHECK(f.e_charge * f.e_discharge == 0.0);
  CHECK(std::abs(f.e_hl_from_pv + f.e_discharge - f.e_hl) <= 1e-9);
}

Scenario synthetic(WeatherProfile profile, int days, std::uint64_t seed = 1) {
  SynthOptions o;
  o.profile = profile;
  o.days = days;
  o.seed = seed;
  Scenario s;
  s.weather = synth_weather(o);
  return s;
}

StepRecord record_at(double t_fr, double e_s, int u_s_applied) {
  StepRecord r;
  r.state.t_fr_c = t_fr;
  r.e_secondary_wh = e_s;
  r.u_s_applied = u_s_applied;
  return r;
}

}  // namespace

TEST_CASE("full battery takes no charge") {
  const SystemConfig c;
  const auto r = plant_step({c.battery.e_max_wh, 3.0, 0, 0}, command(0, 0, 0.5),
                            sun(1000.0), 27.0, 0.0, c);
  CHECK(r.flows.e_charge == 0.0);
  CHECK(r.flows.e_pv_unused == doctest::Approx(r.flows.e_pv));
  CHECK(r.next.e_bat_wh == c.battery.e_max_wh);
}

TEST_CASE("charging is capped by the mode limit") {
  SystemConfig c;
  c.pv.n_panels = 30;
  const auto normal =
      plant_step({2000.0, 3.0, 0, 0}, command(0, 0, 0.8), sun(1000.0), 27.0, 0.0, c);
  CHECK(normal.flows.e_pv > 1000.0);
  CHECK(normal.flows.e_charge == doctest::Approx(810.0));
  CHECK(normal.next.e_bat_wh == doctest::Approx(2000.0 + 0.9 * 810.0));
  const auto fast =
      plant_step({2000.0, 3.0, 0, 0}, command(0, 0, 1.6), sun(1000.0), 27.0, 0.0, c);
  CHECK(fast.flows.e_charge == doctest::Approx(fast.flows.e_pv));
  const auto near_full =
      plant_step({5300.0, 3.0, 0, 0}, command(0, 0, 1.6), sun(1000.0), 27.0, 0.0, c);
  CHECK(near_full.flows.e_charge == doctest::Approx(100.0));
  check_identities(near_full.flows);
}

TEST_CASE("night fridge runs from the battery") {
  const SystemConfig c;
  const auto r =
      plant_step({3000.0, 4.5, 0, 0}, command(1, 0, -0.05), sun(0.0), 27.0, 0.0, c);
  CHECK(r.flows.e_hl == doctest::Approx(250.0 / 6.0 / 0.9));
  CHECK(r.flows.e_discharge == doctest::Approx(46.296).epsilon(1e-4));
  CHECK(r.next.e_bat_wh == doctest::Approx(3000.0 - 46.2963 / 0.9).epsilon(1e-6));
  CHECK(r.u_fr_applied == 1);
  CHECK(r.flows.unserved_fr == 0.0);
  const auto disc = fridge_discretize(c.fridge, c.step_hours);
  CHECK(r.next.t_fr_c == doctest::Approx(fridge_step(disc, 4.5, 1, 27.0)));
}

TEST_CASE("shortfalls shed the secondary load first, then the fridge") {
  const SystemConfig c;
  const double e_fr = 250.0 / 6.0;
  // 60 Wh above the floor delivers 54 Wh: fridge (46.3) fits, both do not.
  const auto partial = plant_step({c.battery.e_min_wh + 60.0, 5.0, 0, 0},
                                  command(1, 1, -0.1), sun(0.0), 27.0, 51.3, c);
  CHECK(partial.u_fr_applied == 1);
  CHECK(partial.u_s_applied == 0);
  CHECK(partial.flows.unserved_s == doctest::Approx(51.3));
  CHECK(partial.flows.unserved_fr == 0.0);
  CHECK(partial.next.e_bat_wh >= c.battery.e_min_wh);

  const auto empty = plant_step({c.battery.e_min_wh, 5.0, 0, 0},
                                command(1, 1, -0.1), sun(0.0), 27.0, 51.3, c);
  CHECK(empty.u_fr_applied == 0);
  CHECK(empty.u_s_applied == 0);
  CHECK(empty.flows.unserved_fr == doctest::Approx(e_fr));
  CHECK(empty.flows.e_discharge == 0.0);
  CHECK(empty.next.u_fr_prev == 0);
  // The compressor stays off, so the fridge warms.
  CHECK(empty.next.t_fr_c > 5.0);

  // Without a discharge command the battery is not touched.
  const auto idle = plant_step({4000.0, 5.0, 0, 0}, command(1, 0, 0.0), sun(0.0),
                               27.0, 0.0, c);
  CHECK(idle.u_fr_applied == 0);
  CHECK(idle.flows.e_discharge == 0.0);
}

TEST_CASE("random plant steps conserve energy and respect battery bounds") {
  SystemConfig c;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 5000; ++t) {
    const double e = c.battery.e_min_wh + unit(rng) * (c.battery.e_max_wh - c.battery.e_min_wh);
    const double gamma = -1.0 + 3.0 * unit(rng);
    const auto cmd = command(unit(rng) < 0.5, unit(rng) < 0.5, gamma);
    WeatherRecord w = sun(unit(rng) < 0.3 ? 0.0 : 1100.0 * unit(rng));
    w.t_ambient_c = 15.0 + 25.0 * unit(rng);
    w.wind_m_s = 5.0 * unit(rng);
    const auto r = plant_step({e, 4.0 * unit(rng), 0, 0}, cmd, w, 27.0,
                              unit(rng) < 0.5 ? 0.0 : 51.3 * unit(rng), c);
    check_identities(r.flows);
    CHECK(r.next.e_bat_wh >= c.battery.e_min_wh);
    CHECK(r.next.e_bat_wh <= c.battery.e_max_wh);
    CHECK(r.u_fr_applied <= cmd.u_fr);
    CHECK(r.u_s_applied <= cmd.u_s);
  }
  CHECK_THROWS_AS(plant_step({3000, 3, 0, 0}, ControlCommand{1, 0, 0.5, {1, 1, 1}},
                             sun(0.0), 27.0, 0.0, c),
                  ContractError);
}

TEST_CASE("one simulated day has 144 steps") {
  const Scenario s = synthetic(WeatherProfile::kClear, 1);
  SystemConfig c;
  c.horizon_steps = 12;
  const auto trace = run_closed_loop(ControllerKind::kBaseline, s, c);
  CHECK(trace.steps.size() == 144);
  CHECK(trace.steps.front().state.e_bat_wh == 5400.0);
  CHECK(trace.steps.front().state.t_fr_c == 2.0);
  CHECK(trace.steps[10].timestamp == s.weather.records[10].timestamp);
  CHECK(trace.final_state.step_index == 144);
}

TEST_CASE("without sun the baseline battery never rises") {
  Scenario s = synthetic(WeatherProfile::kClear, 7);
  for (auto& r : s.weather.records) r.ghi_w_m2 = 0.0;
  const SystemConfig c;
  const auto trace = run_closed_loop(ControllerKind::kBaseline, s, c);
  double prev = 1e9;
  for (const auto& st : trace.steps) {
    CHECK(st.state.e_bat_wh <= prev);
    prev = st.state.e_bat_wh;
    check_identities(st.flows);
  }
  CHECK(trace.final_state.e_bat_wh >= c.battery.e_min_wh);
}

TEST_CASE("with matched models the plant follows the controller's prediction") {
  SystemConfig c;
  c.horizon_steps = 12;
  c.inverter_efficiency = 1.0;
  c.battery.eta_charge = 1.0;
  c.battery.eta_discharge = 1.0;
  c.initial_e_bat_wh = 3000.0;
  const Scenario s = synthetic(WeatherProfile::kCloudy, 1, 3);
  RunOptions o;
  o.steps = 144;
  const auto trace = run_closed_loop(ControllerKind::kProposed, s, c, o);
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    const auto& st = trace.steps[k];
    REQUIRE(st.predicted_e_bat_wh.has_value());
    const auto& next = trace.steps[k + 1].state;
    CHECK(std::abs(*st.predicted_e_bat_wh - next.e_bat_wh) <= 1e-6);
    CHECK(std::abs(*st.predicted_t_fr_c - next.t_fr_c) <= 1e-6);
  }
}

TEST_CASE("clear-sky days keep the fridge served under the proposed controller") {
  SystemConfig c;
  c.horizon_steps = 18;
  const Scenario s = synthetic(WeatherProfile::kClear, 2);
  const auto trace = run_closed_loop(ControllerKind::kProposed, s, c);
  const auto m = compute_metrics(trace, 0.0, 4.0, 0.05);
  CHECK(m.primary_unserved_hours_per_day == 0.0);
  for (const auto& st : trace.steps) {
    REQUIRE(st.solver.has_value());
    CHECK(st.requested.consistent());
    CHECK(st.solver->audit_error < 1e-6);
  }
}

TEST_CASE("metrics") {
  SimulationTrace in_band;
  in_band.step_hours = 1.0 / 6.0;
  for (int k = 0; k < 144; ++k) in_band.steps.push_back(record_at(2.0, 0.0, 0));
  auto m = compute_metrics(in_band, 0.0, 4.0, 0.05);
  CHECK(m.temp_violation_hours_per_day == 0.0);
  CHECK(m.secondary_unserved_pct == 0.0);
  CHECK(m.days == doctest::Approx(1.0));

  SimulationTrace warm = in_band;
  for (int k = 0; k < 36; ++k) warm.steps[k].state.t_fr_c = 4.2;
  warm.steps[40].state.t_fr_c = 4.04;  // within tolerance
  warm.steps[41].state.t_fr_c = -0.3;  // below the band
  m = compute_metrics(warm, 0.0, 4.0, 0.05);
  CHECK(m.temp_violation_hours_per_day == doctest::Approx(6.0 + 1.0 / 6.0));
  CHECK(m.temp_violation_hours_per_day <= 24.0);
}

TEST_CASE("metrics split by day and add up") {
  SimulationTrace t;
  t.step_hours = 1.0 / 6.0;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 3 * 144; ++k) {
    StepRecord r = record_at(-1.0 + 6.0 * unit(rng), unit(rng) < 0.6 ? 51.3 : 0.0,
                             unit(rng) < 0.5);
    if (unit(rng) < 0.1) r.flows.unserved_fr = 41.67;
    t.steps.push_back(r);
  }
  const auto m = compute_metrics(t, 0.0, 4.0, 0.05);
  REQUIRE(m.per_day.size() == 3);
  double viol = 0.0, prim = 0.0;
  std::size_t sched = 0, uns = 0;
  for (int d = 0; d < 3; ++d) {
    SimulationTrace day;
    day.step_hours = t.step_hours;
    day.steps.assign(t.steps.begin() + d * 144, t.steps.begin() + (d + 1) * 144);
    const auto md = compute_metrics(day, 0.0, 4.0, 0.05);
    CHECK(md.temp_violation_hours_per_day == doctest::Approx(m.per_day[d].temp_violation_hours));
    viol += m.per_day[d].temp_violation_hours;
    prim += m.per_day[d].primary_unserved_hours;
    sched += m.per_day[d].secondary_scheduled_steps;
    uns += m.per_day[d].secondary_unserved_steps;
  }
  CHECK(m.temp_violation_hours_per_day == doctest::Approx(viol / 3.0));
  CHECK(m.primary_unserved_hours_per_day == doctest::Approx(prim / 3.0));
  CHECK(m.secondary_unserved_pct == doctest::Approx(100.0 * uns / sched));
  CHECK(m.secondary_unserved_pct >= 0.0);
  CHECK(m.secondary_unserved_pct <= 100.0);
  CHECK_THROWS_AS(compute_metrics(SimulationTrace{}, 0.0, 4.0, 0.05), ContractError);
}

TEST_CASE("trace, solver log and metrics round-trip") {
  SystemConfig c;
  c.horizon_steps = 6;
  const Scenario s = synthetic(WeatherProfile::kPostStorm, 1);
  RunOptions o;
  o.steps = 30;
  const auto trace = run_closed_loop(ControllerKind::kProposed, s, c, o);
  const auto dir = std::filesystem::temp_directory_path();
  write_trace_csv(dir / "pvmpc_trace.csv", trace);
  const auto back = read_trace_csv(dir / "pvmpc_trace.csv", c.step_hours);
  REQUIRE(back.steps.size() == trace.steps.size());
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& a = trace.steps[k];
    const auto& b = back.steps[k];
    CHECK(a.timestamp == b.timestamp);
    CHECK(a.state.e_bat_wh == b.state.e_bat_wh);
    CHECK(a.state.t_fr_c == b.state.t_fr_c);
    CHECK(a.requested.gamma == b.requested.gamma);
    CHECK(a.requested.charge == b.requested.charge);
    CHECK(a.flows.e_pv == b.flows.e_pv);
    CHECK(a.flows.e_discharge == b.flows.e_discharge);
    CHECK(a.u_s_applied == b.u_s_applied);
    CHECK(a.t_house_c == b.t_house_c);
  }
  const auto m = compute_metrics(trace, 0.0, 4.0, 0.05);
  const auto m2 = compute_metrics(back, 0.0, 4.0, 0.05);
  CHECK(m2.temp_violation_hours_per_day == m.temp_violation_hours_per_day);
  const auto m3 = metrics_from_json(metrics_to_json(m));
  CHECK(m3.temp_violation_hours_per_day == m.temp_violation_hours_per_day);
  CHECK(m3.secondary_unserved_pct == m.secondary_unserved_pct);
  CHECK(m3.per_day.size() == m.per_day.size());

  write_solver_log_csv(dir / "pvmpc_solver.csv", trace);
  std::ifstream log(dir / "pvmpc_solver.csv");
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) ++lines;
  CHECK(lines == 31);
  CHECK_THROWS_AS(read_trace_csv(dir / "pvmpc_solver.csv", c.step_hours), DataError);
  std::filesystem::remove(dir / "pvmpc_trace.csv");
  std::filesystem::remove(dir / "pvmpc_solver.csv");
}

TEST_CASE("controller names") {
  CHECK(parse_controller("proposed") == ControllerKind::kProposed);
  CHECK(parse_controller("baseline") == ControllerKind::kBaseline);
  CHECK_THROWS_AS(parse_controller("pid"), DataError);
}
