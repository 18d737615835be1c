#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pvmpc/config.hpp"
#include "pvmpc/mpc.hpp"
#include "pvmpc/scenario.hpp"
#include "pvmpc/state.hpp"

namespace pvmpc {

// Energy flows of one plant step, all in Wh and non-negative.
struct PlantFlows {
  double e_pv = 0.0;           // potential
  double e_pv_used = 0.0;
  double e_pv_unused = 0.0;
  double e_hl = 0.0;           // house load drawn through the inverter
  double e_hl_from_pv = 0.0;
  double e_charge = 0.0;
  double e_discharge = 0.0;    // delivered by the battery
  double unserved_fr = 0.0;    // requested refrigerator energy that was shed
  double unserved_s = 0.0;
};

struct PlantStepResult {
  PlantState next;
  PlantFlows flows;
  int u_fr_applied = 0;
  int u_s_applied = 0;
};

// Advances the plant one step under `cmd`. PV covers the house load first; a
// shortfall is drawn from the battery when the command engages it (discharge,
// or a charge command that PV cannot honor), capped by the discharge limit and
// the energy above the floor. If the load still cannot be met the secondary
// load is shed, then the refrigerator. Surplus PV charges the battery when
// c = 1, capped by headroom and x_bat times the normal charge limit.
PlantStepResult plant_step(const PlantState& state, const ControlCommand& cmd,
                           const WeatherRecord& weather, double t_house_c,
                           double e_secondary_wh, const SystemConfig& config);

enum class ControllerKind { kProposed, kBaseline };
const char* to_string(ControllerKind kind);
ControllerKind parse_controller(const std::string& name);

struct Scenario {
  WeatherSeries weather;
  std::optional<HouseTemperatureTrace> house;  // sinusoid fallback if unset
  SecondaryLoadSchedule schedule;
};

struct SolverLogEntry {
  std::string status;
  double rel_gap = 0.0;
  double wall_time_s = 0.0;
  std::int64_t nodes = 0;
  bool degraded = false;
  bool time_limited = false;
  double audit_error = 0.0;
};

struct StepRecord {
  Timestamp timestamp;
  PlantState state;  // at the start of the step
  double ghi_w_m2 = 0.0;
  double t_ambient_c = 0.0;
  double wind_m_s = 0.0;
  double t_house_c = 0.0;
  double e_secondary_wh = 0.0;
  ControlCommand requested;
  int u_fr_applied = 0;
  int u_s_applied = 0;
  PlantFlows flows;
  std::optional<SolverLogEntry> solver;
  // Controller prediction of the next state (proposed controller only).
  std::optional<double> predicted_e_bat_wh;
  std::optional<double> predicted_t_fr_c;
};

struct SimulationTrace {
  ControllerKind controller = ControllerKind::kBaseline;
  double step_hours = 1.0 / 6.0;
  std::vector<StepRecord> steps;
  PlantState final_state;
};

struct RunOptions {
  std::size_t steps = 0;  // 0: every step the weather covers
  PlanOptions plan;
  // Called after each step with (step index, total steps).
  std::function<void(std::size_t, std::size_t)> progress;
};

SimulationTrace run_closed_loop(ControllerKind controller,
                                const Scenario& scenario,
                                const SystemConfig& config,
                                const RunOptions& options = {});

struct DayMetrics {
  double temp_violation_hours = 0.0;
  double primary_unserved_hours = 0.0;
  std::size_t secondary_scheduled_steps = 0;
  std::size_t secondary_unserved_steps = 0;
  std::size_t steps = 0;
};

struct ResiliencyMetrics {
  double days = 0.0;
  double temp_violation_hours_per_day = 0.0;
  double secondary_unserved_pct = 0.0;
  double primary_unserved_hours_per_day = 0.0;
  std::vector<DayMetrics> per_day;
};

// Counts a step as a violation when the fridge temperature at its start lies
// outside [t_min - tol, t_max + tol]. Days are consecutive blocks of 24 h from
// the first step.
ResiliencyMetrics compute_metrics(const SimulationTrace& trace, double t_min_c,
                                  double t_max_c, double tol_c);

void write_trace_csv(const std::filesystem::path& path,
                     const SimulationTrace& trace);
SimulationTrace read_trace_csv(const std::filesystem::path& path,
                               double step_hours);
void write_solver_log_csv(const std::filesystem::path& path,
                          const SimulationTrace& trace);

std::string metrics_to_json(const ResiliencyMetrics& metrics);
ResiliencyMetrics metrics_from_json(const std::string& text);

}  // namespace pvmpc
