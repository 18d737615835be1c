#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "pvmpc/config.hpp"
#include "pvmpc/milp/branch_and_bound.hpp"
#include "pvmpc/state.hpp"

namespace pvmpc {

// Exogenous predictions over the planning horizon.
struct ForecastWindow {
  std::vector<double> g_avail_wh;    // PV energy potential per step
  std::vector<double> t_house_c;
  std::vector<double> e_secondary_wh;

  std::size_t size() const { return g_avail_wh.size(); }
  void validate(std::size_t horizon) const;
};

// Maps a charge fraction in [-1, 2] to charge/discharge flags and the charge
// mode. Throws ContractError outside that range.
ChargeDecision gamma_to_discrete(double gamma);

// The MILP together with the column index of each decision variable per step.
struct MpcProblem {
  milp::Model model;
  std::vector<int> u_fr, u_s, gamma, g, zeta, e_bat, t_fr;
};

// Builds the horizon problem: per step binaries u_fr, u_s; continuous
// gamma, g, zeta and the successor states E_bat(k+1), T_fr(k+1); thermal,
// battery and energy-balance equalities; the upper band edge softened by zeta
// (the lower edge is a hard bound on T_fr). Slack and secondary-service terms
// are weighted by N - i for within-horizon step i.
MpcProblem build_mpc_milp(const PlantState& state,
                          const ForecastWindow& forecast,
                          const SystemConfig& config);

struct SolveSummary {
  milp::MilpStatus status = milp::MilpStatus::kInfeasible;
  bool has_incumbent = false;
  double objective = 0.0;
  double best_bound = 0.0;
  double rel_gap = 0.0;
  std::int64_t nodes = 0;
  double wall_time_s = 0.0;
};

struct MpcPlan {
  std::vector<ControlCommand> commands;
  std::vector<double> predicted_e_bat_wh;  // E_bat(k+1), ...
  std::vector<double> predicted_t_fr_c;    // T_fr(k+1), ...
  std::vector<double> slack_c;
  std::vector<double> g_used_wh;
  SolveSummary solver;
  // No incumbent: the first command came from the rule-based fallback.
  bool degraded = false;
  // Largest deviation between the solver's state trajectory and a forward
  // simulation of the controller model under the extracted commands.
  double audit_error = 0.0;
};

struct PlanOptions {
  milp::SolverOptions solver;
  // When set, every model and plan is written here (step_<k>.lp / .json).
  std::optional<std::filesystem::path> dump_dir;
};

// Solves one horizon and extracts commands. Throws SolverError if the MILP is
// infeasible (the model is feasible by construction, so this indicates a bug
// or corrupt inputs); the model listing is attached to the message.
MpcPlan plan(const PlantState& state, const ForecastWindow& forecast,
             const SystemConfig& config, const PlanOptions& options = {});

// Command used when the solver yields no incumbent: dead-band compressor,
// secondary off, charge fraction from the PV surplus.
ControlCommand fallback_command(const PlantState& state,
                                const ForecastWindow& forecast,
                                const SystemConfig& config);

}  // namespace pvmpc
