#pragma once

#include "pvmpc/config.hpp"
#include "pvmpc/state.hpp"

namespace pvmpc {

struct BaselineState {
  int u_fr_prev = 0;
};

// Hysteresis thermostat: on at or above t_max, off at or below t_min,
// otherwise hold. Updates `state`.
int deadband_fridge(BaselineState& state, double t_fridge_c, double t_min_c,
                    double t_max_c);

struct BaselineDispatch {
  int u_fr = 0;  // granted
  int u_s = 0;   // granted
  int c = 0;
  int d = 0;
};

// Grants requested loads (a demand > 0 is a request) while PV plus the
// battery's deliverable energy covers the resulting house load, shedding the
// secondary load before the refrigerator. Charge if PV exceeds the granted
// house load, discharge if it falls short.
BaselineDispatch baseline_dispatch(double e_pv_wh, double demand_fr_wh,
                                   double demand_s_wh, double e_bat_wh,
                                   const BatteryParams& battery,
                                   double eta_inv);

// Dead-band refrigerator plus charge controller, normal charging only.
class BaselineController {
 public:
  ControlCommand decide(const PlantState& state, double e_pv_wh,
                        double e_secondary_wh, const SystemConfig& config);
  int requested_u_fr() const { return requested_u_fr_; }
  int requested_u_s() const { return requested_u_s_; }

 private:
  BaselineState state_;
  int requested_u_fr_ = 0;
  int requested_u_s_ = 0;
};

}  // namespace pvmpc
