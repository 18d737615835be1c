#include "pvmpc/devices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvmpc/error.hpp"

namespace pvmpc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DataError(what);
}

}  // namespace

void PvArrayParams::validate() const {
  require(n_panels >= 1, "pv.n_panels must be >= 1");
  require(p_rated_w > 0.0, "pv.p_rated_w must be positive");
  require(g_std_w_m2 > 0.0, "pv.g_std_w_m2 must be positive");
  require(u0_w_m2k > 0.0, "pv.u0_w_m2k must be positive");
  require(u1_w_m2k_per_ms >= 0.0, "pv.u1_w_m2k_per_ms must be >= 0");
  require(std::isfinite(gamma_pct_per_c) && std::isfinite(t_std_c),
          "pv temperature coefficients must be finite");
}

void BatteryParams::validate() const {
  require(e_min_wh >= 0.0 && e_min_wh < e_max_wh,
          "battery bounds must satisfy 0 <= e_min_wh < e_max_wh");
  require(e_charge_max_wh > 0.0, "battery.e_charge_max_wh must be positive");
  require(e_discharge_max_wh > 0.0,
          "battery.e_discharge_max_wh must be positive");
  require(eta_charge > 0.0 && eta_charge <= 1.0,
          "battery.eta_charge must lie in (0,1]");
  require(eta_discharge > 0.0 && eta_discharge <= 1.0,
          "battery.eta_discharge must lie in (0,1]");
  require(fast_multiplier >= 1.0, "battery.fast_multiplier must be >= 1");
}

void FridgeParams::validate() const {
  require(c_thermal_j_per_c > 0.0, "fridge.c_thermal_j_per_c must be positive");
  require(r_thermal_c_per_w > 0.0, "fridge.r_thermal_c_per_w must be positive");
  require(cop > 0.0, "fridge.cop must be positive");
  require(p_rated_w >= 0.0, "fridge.p_rated_w must be >= 0");
  require(t_min_c < t_max_c, "fridge band must satisfy t_min_c < t_max_c");
}

double pv_energy(const PvArrayParams& params, double ghi_w_m2,
                 double t_module_c, double step_hours) {
  const double derate =
      1.0 + params.gamma_pct_per_c / 100.0 * (t_module_c - params.t_std_c);
  const double e = params.n_panels * params.p_rated_w *
                   (ghi_w_m2 / params.g_std_w_m2) * derate * step_hours;
  return std::max(0.0, e);
}

double module_temperature(const PvArrayParams& params, double ghi_w_m2,
                          double t_ambient_c, double wind_m_s) {
  const double denom =
      params.faiman_literal
          ? params.u0_w_m2k + params.u1_w_m2k_per_ms + wind_m_s
          : params.u0_w_m2k + params.u1_w_m2k_per_ms * wind_m_s;
  return t_ambient_c + ghi_w_m2 / denom;
}

double battery_step(const BatteryParams& params, double e_now_wh,
                    double e_charge_wh, double e_discharge_wh) {
  if (e_charge_wh < 0.0 || e_discharge_wh < 0.0) {
    throw ContractError("battery flows must be non-negative");
  }
  if (e_charge_wh > 0.0 && e_discharge_wh > 0.0) {
    throw ContractError("battery cannot charge and discharge in one step");
  }
  return e_now_wh + params.eta_charge * e_charge_wh -
         e_discharge_wh / params.eta_discharge;
}

FridgeDiscretization fridge_discretize(const FridgeParams& params,
                                       double step_hours) {
  if (!(step_hours > 0.0)) throw ContractError("step_hours must be positive");
  const double cr = params.c_thermal_j_per_c * params.r_thermal_c_per_w;
  const double ac = -1.0 / cr;
  const double bc = -1.0 / params.c_thermal_j_per_c;
  const double dc = 1.0 / cr;
  const double dt_s = step_hours * 3600.0;
  // expm1 keeps (A-1)/Ac accurate for short steps.
  const double a_minus_1 = std::expm1(ac * dt_s);
  FridgeDiscretization disc;
  disc.a = 1.0 + a_minus_1;
  disc.b = a_minus_1 / ac * bc;
  disc.d = a_minus_1 / ac * dc;
  disc.q_w = params.cop * params.p_rated_w;
  return disc;
}

double fridge_step(const FridgeDiscretization& disc, double t_fridge_c,
                   int u_fr, double t_house_c) {
  if (u_fr != 0 && u_fr != 1) throw ContractError("u_fr must be 0 or 1");
  return disc.a * t_fridge_c + disc.b * u_fr * disc.q_w + disc.d * t_house_c;
}

}  // namespace pvmpc
