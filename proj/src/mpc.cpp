#include "pvmpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pvmpc/baseline.hpp"
#include "pvmpc/devices.hpp"
#include "pvmpc/error.hpp"

namespace pvmpc {

using milp::Relation;
using milp::Term;
using milp::VarType;

namespace {

// Charge fractions closer to zero than this are treated as idle.
constexpr double kGammaSnap = 1e-9;

}  // namespace

ChargeDecision gamma_to_discrete(double gamma) {
  if (!(gamma >= -1.0 && gamma <= 2.0)) {
    throw ContractError("charge fraction " + std::to_string(gamma) +
                        " outside [-1, 2]");
  }
  ChargeDecision out;
  out.c = gamma > 0.0 ? 1 : 0;
  out.d = gamma < 0.0 ? 1 : 0;
  if (gamma > 0.0 && gamma <= 1.0) {
    out.x_bat = 1;
  } else if (gamma > 1.0) {
    out.x_bat = 2;
  }
  return out;
}

bool ControlCommand::consistent() const {
  if (charge.c * charge.d != 0) return false;
  if ((u_fr != 0 && u_fr != 1) || (u_s != 0 && u_s != 1)) return false;
  if (!(gamma >= -1.0 && gamma <= 2.0)) return false;
  return gamma_to_discrete(gamma) == charge;
}

void ForecastWindow::validate(std::size_t horizon) const {
  if (g_avail_wh.size() != horizon || t_house_c.size() != horizon ||
      e_secondary_wh.size() != horizon) {
    throw ContractError("forecast series must all have the horizon length " +
                        std::to_string(horizon));
  }
  for (std::size_t k = 0; k < horizon; ++k) {
    if (!(g_avail_wh[k] >= 0.0) || !(e_secondary_wh[k] >= 0.0) ||
        !std::isfinite(t_house_c[k])) {
      throw ContractError("forecast values must be finite with g, E_s >= 0");
    }
  }
}

MpcProblem build_mpc_milp(const PlantState& state,
                          const ForecastWindow& forecast,
                          const SystemConfig& config) {
  const auto horizon = static_cast<std::size_t>(config.horizon_steps);
  forecast.validate(horizon);
  const auto& bat = config.battery;
  const auto& mp = config.mpc;
  const FridgeDiscretization disc =
      fridge_discretize(config.fridge, config.step_hours);
  const double e_fr = fridge_energy(config.fridge, config.step_hours);
  const double e_c = bat.e_charge_max_wh;
  const int n = config.horizon_steps;

  MpcProblem p;
  auto& m = p.model;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::string s = std::to_string(i);
    const double w = static_cast<double>(n - i);
    p.u_fr.push_back(m.add_binary("u_fr_" + s));
    p.u_s.push_back(m.add_binary("u_s_" + s, -mp.lambda4 * w));
    if (forecast.e_secondary_wh[k] <= 0.0) m.set_bounds(p.u_s.back(), 0.0, 0.0);
    p.gamma.push_back(m.add_variable("gamma_" + s, mp.gamma_min, mp.gamma_max,
                                     VarType::kContinuous, mp.lambda3));
    p.g.push_back(m.add_variable("g_" + s, 0.0, forecast.g_avail_wh[k]));
    p.zeta.push_back(m.add_variable("zeta_" + s, 0.0, milp::kInf,
                                    VarType::kContinuous, mp.lambda1 * w));
    p.e_bat.push_back(m.add_variable("e_bat_" + std::to_string(i + 1),
                                     bat.e_min_wh, bat.e_max_wh,
                                     VarType::kContinuous, -mp.lambda2));
    p.t_fr.push_back(m.add_variable("t_fr_" + std::to_string(i + 1),
                                    config.fridge.t_min_c, milp::kInf));
  }

  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::string s = std::to_string(i);
    // T(k+1) - B Q u(k) - A T(k) = D T_house(k)
    std::vector<Term> thermal{{p.t_fr[k], 1.0}, {p.u_fr[k], -disc.b * disc.q_w}};
    double thermal_rhs = disc.d * forecast.t_house_c[k];
    if (i == 0) {
      thermal_rhs += disc.a * state.t_fr_c;
    } else {
      thermal.push_back({p.t_fr[k - 1], -disc.a});
    }
    m.add_constraint("thermal_" + s, std::move(thermal), Relation::kEqual,
                     thermal_rhs);

    // E(k+1) - E(k) - eta_con Ec gamma(k) = 0
    std::vector<Term> battery{{p.e_bat[k], 1.0},
                              {p.gamma[k], -mp.eta_con * e_c}};
    double battery_rhs = 0.0;
    if (i == 0) {
      battery_rhs = state.e_bat_wh;
    } else {
      battery.push_back({p.e_bat[k - 1], -1.0});
    }
    m.add_constraint("battery_" + s, std::move(battery), Relation::kEqual,
                     battery_rhs);

    // u_fr E_fr + gamma Ec + u_s E_s - g = 0
    m.add_constraint("balance_" + s,
                     {{p.u_fr[k], e_fr},
                      {p.gamma[k], e_c},
                      {p.u_s[k], forecast.e_secondary_wh[k]},
                      {p.g[k], -1.0}},
                     Relation::kEqual, 0.0);

    // T(k+1) - zeta(k) <= T_max
    m.add_constraint("band_" + s, {{p.t_fr[k], 1.0}, {p.zeta[k], -1.0}},
                     Relation::kLessEqual, config.fridge.t_max_c);
  }
  return p;
}

ControlCommand fallback_command(const PlantState& state,
                                const ForecastWindow& forecast,
                                const SystemConfig& config) {
  BaselineState memory{state.u_fr_prev};
  ControlCommand cmd;
  cmd.u_fr = deadband_fridge(memory, state.t_fr_c, config.fridge.t_min_c,
                             config.fridge.t_max_c);
  cmd.u_s = 0;
  const double e_fr = fridge_energy(config.fridge, config.step_hours);
  const double surplus = forecast.g_avail_wh.front() - cmd.u_fr * e_fr;
  double gamma = surplus / config.battery.e_charge_max_wh;
  gamma = std::clamp(gamma, std::max(config.mpc.gamma_min, -1.0),
                     std::min(config.mpc.gamma_max, 1.0));
  if (std::abs(gamma) < kGammaSnap) gamma = 0.0;
  cmd.gamma = gamma;
  cmd.charge = gamma_to_discrete(gamma);
  return cmd;
}

namespace {

void dump_plan(const std::filesystem::path& dir, std::size_t step,
               const milp::Model& model, const MpcPlan& plan) {
  std::filesystem::create_directories(dir);
  const std::string stem = "step_" + std::to_string(step);
  {
    std::ofstream lp(dir / (stem + ".lp"));
    model.write_lp(lp);
  }
  nlohmann::json j;
  j["status"] = milp::to_string(plan.solver.status);
  j["objective"] = plan.solver.objective;
  j["best_bound"] = plan.solver.best_bound;
  j["rel_gap"] = plan.solver.rel_gap;
  j["nodes"] = plan.solver.nodes;
  j["wall_time_s"] = plan.solver.wall_time_s;
  j["degraded"] = plan.degraded;
  j["audit_error"] = plan.audit_error;
  auto& cmds = j["commands"] = nlohmann::json::array();
  for (const auto& c : plan.commands) {
    cmds.push_back({{"u_fr", c.u_fr},
                    {"u_s", c.u_s},
                    {"gamma", c.gamma},
                    {"c", c.charge.c},
                    {"d", c.charge.d},
                    {"x_bat", c.charge.x_bat}});
  }
  j["predicted_e_bat_wh"] = plan.predicted_e_bat_wh;
  j["predicted_t_fr_c"] = plan.predicted_t_fr_c;
  j["slack_c"] = plan.slack_c;
  j["g_used_wh"] = plan.g_used_wh;
  std::ofstream out(dir / (stem + ".json"));
  out << j.dump(2) << '\n';
}

}  // namespace

MpcPlan plan(const PlantState& state, const ForecastWindow& forecast,
             const SystemConfig& config, const PlanOptions& options) {
  const MpcProblem problem = build_mpc_milp(state, forecast, config);
  const milp::MilpSolution sol = milp::solve_milp(problem.model, options.solver);

  MpcPlan out;
  out.solver = {sol.status,         sol.has_incumbent, sol.objective,
                sol.best_bound,     sol.rel_gap,       sol.nodes_explored,
                sol.wall_time_s};

  if (sol.status == milp::MilpStatus::kInfeasible ||
      sol.status == milp::MilpStatus::kUnbounded ||
      sol.status == milp::MilpStatus::kNumericalFailure) {
    std::ostringstream listing;
    problem.model.write_lp(listing);
    throw SolverError(std::string("MPC problem at step ") +
                      std::to_string(state.step_index) + " returned " +
                      milp::to_string(sol.status) + "\n" + listing.str());
  }

  if (!sol.has_incumbent) {
    out.degraded = true;
    out.commands.push_back(fallback_command(state, forecast, config));
    if (options.dump_dir) dump_plan(*options.dump_dir, state.step_index, problem.model, out);
    return out;
  }

  const auto& x = sol.values;
  const std::size_t n = forecast.size();
  const FridgeDiscretization disc =
      fridge_discretize(config.fridge, config.step_hours);
  const double e_c = config.battery.e_charge_max_wh;
  double t_sim = state.t_fr_c;
  double e_sim = state.e_bat_wh;
  for (std::size_t k = 0; k < n; ++k) {
    ControlCommand cmd;
    cmd.u_fr = static_cast<int>(std::lround(x[problem.u_fr[k]]));
    cmd.u_s = static_cast<int>(std::lround(x[problem.u_s[k]]));
    double gamma = std::clamp(x[problem.gamma[k]], config.mpc.gamma_min,
                              config.mpc.gamma_max);
    if (std::abs(gamma) < kGammaSnap) gamma = 0.0;
    cmd.gamma = gamma;
    cmd.charge = gamma_to_discrete(gamma);
    out.commands.push_back(cmd);

    out.predicted_e_bat_wh.push_back(x[problem.e_bat[k]]);
    out.predicted_t_fr_c.push_back(x[problem.t_fr[k]]);
    out.slack_c.push_back(std::max(0.0, x[problem.zeta[k]]));
    out.g_used_wh.push_back(x[problem.g[k]]);

    t_sim = fridge_step(disc, t_sim, cmd.u_fr, forecast.t_house_c[k]);
    e_sim += cmd.gamma * config.mpc.eta_con * e_c;
    out.audit_error = std::max({out.audit_error,
                                std::abs(t_sim - out.predicted_t_fr_c.back()),
                                std::abs(e_sim - out.predicted_e_bat_wh.back())});
  }
  if (options.dump_dir) dump_plan(*options.dump_dir, state.step_index, problem.model, out);
  return out;
}

}  // namespace pvmpc
