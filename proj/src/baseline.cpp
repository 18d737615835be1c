#include "pvmpc/baseline.hpp"

#include <algorithm>

#include "pvmpc/error.hpp"

namespace pvmpc {

int deadband_fridge(BaselineState& state, double t_fridge_c, double t_min_c,
                    double t_max_c) {
  if (!(t_min_c < t_max_c)) throw ContractError("dead band needs t_min < t_max");
  if (t_fridge_c >= t_max_c) {
    state.u_fr_prev = 1;
  } else if (t_fridge_c <= t_min_c) {
    state.u_fr_prev = 0;
  }
  return state.u_fr_prev;
}

BaselineDispatch baseline_dispatch(double e_pv_wh, double demand_fr_wh,
                                   double demand_s_wh, double e_bat_wh,
                                   const BatteryParams& battery,
                                   double eta_inv) {
  if (demand_fr_wh < 0.0 || demand_s_wh < 0.0) {
    throw ContractError("load demands must be non-negative");
  }
  const double from_battery =
      std::min(std::max(0.0, e_bat_wh - battery.e_min_wh),
               battery.e_discharge_max_wh) *
      battery.eta_discharge;
  const double available = e_pv_wh + from_battery;

  const int want_fr = demand_fr_wh > 0.0 ? 1 : 0;
  const int want_s = demand_s_wh > 0.0 ? 1 : 0;
  const auto house_load = [&](int fr, int s) {
    return (fr * demand_fr_wh + s * demand_s_wh) / eta_inv;
  };

  // Shedding order: secondary first, then the refrigerator.
  BaselineDispatch out;
  if (house_load(want_fr, want_s) <= available) {
    out.u_fr = want_fr;
    out.u_s = want_s;
  } else if (house_load(want_fr, 0) <= available) {
    out.u_fr = want_fr;
  }
  const double e_hl = house_load(out.u_fr, out.u_s);
  out.c = e_pv_wh > e_hl ? 1 : 0;
  out.d = e_pv_wh < e_hl ? 1 : 0;
  return out;
}

ControlCommand BaselineController::decide(const PlantState& state,
                                          double e_pv_wh,
                                          double e_secondary_wh,
                                          const SystemConfig& config) {
  requested_u_fr_ = deadband_fridge(state_, state.t_fr_c, config.fridge.t_min_c,
                                    config.fridge.t_max_c);
  requested_u_s_ = e_secondary_wh > 0.0 ? 1 : 0;
  const double e_fr = fridge_energy(config.fridge, config.step_hours);
  const BaselineDispatch dispatch = baseline_dispatch(
      e_pv_wh, requested_u_fr_ * e_fr, requested_u_s_ * e_secondary_wh,
      state.e_bat_wh, config.battery, config.inverter_efficiency);
  ControlCommand cmd;
  cmd.u_fr = dispatch.u_fr;
  cmd.u_s = dispatch.u_s;
  cmd.charge = {dispatch.c, dispatch.d, dispatch.c};
  // Nominal fraction for logging; the baseline has no optimizer.
  cmd.gamma = dispatch.c ? 1.0 : (dispatch.d ? -1.0 : 0.0);
  return cmd;
}

}  // namespace pvmpc
