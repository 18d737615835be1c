#pragma once

// Physical component models: PV array, battery energy bucket, refrigerator
// thermal RC model and load energies. Energies are Wh per step, step lengths
// are hours unless a name says otherwise.

namespace pvmpc {

struct PvArrayParams {
  int n_panels = 3;
  double p_rated_w = 285.0;
  double gamma_pct_per_c = -0.39;
  double g_std_w_m2 = 1000.0;
  double t_std_c = 25.0;
  double u0_w_m2k = 25.0;
  double u1_w_m2k_per_ms = 6.84;
  // Use the printed denominator U0 + U1 + Ws instead of U0 + U1*Ws.
  bool faiman_literal = false;

  void validate() const;
  bool operator==(const PvArrayParams&) const = default;
};

struct BatteryParams {
  double e_min_wh = 1080.0;
  double e_max_wh = 5400.0;
  double e_charge_max_wh = 810.0;     // per step, normal charging mode
  double e_discharge_max_wh = 844.5;  // per step
  double eta_charge = 0.9;
  double eta_discharge = 0.9;
  double fast_multiplier = 2.0;

  void validate() const;
  bool operator==(const BatteryParams&) const = default;
};

struct FridgeParams {
  double c_thermal_j_per_c = 8937.4;
  double r_thermal_c_per_w = 1.4749;
  double cop = 0.2324;
  double p_rated_w = 250.0;
  double t_min_c = 0.0;
  double t_max_c = 4.0;

  void validate() const;
  bool operator==(const FridgeParams&) const = default;
};

// Zero-order-hold discretization of C dT/dt = (T_house - T)/R - u Q.
struct FridgeDiscretization {
  double a = 1.0;       // state decay
  double b = 0.0;       // C/W, negative
  double d = 0.0;       // house coupling
  double q_w = 0.0;     // thermal power removed while the compressor runs
};

// PV energy potential over one step; never negative.
double pv_energy(const PvArrayParams& params, double ghi_w_m2,
                 double t_module_c, double step_hours);

// Faiman module temperature.
double module_temperature(const PvArrayParams& params, double ghi_w_m2,
                          double t_ambient_c, double wind_m_s);

// E(k+1) = E + eta_c * charge - discharge / eta_dc. Throws ContractError when
// both flows are positive or either is negative. Bounds are the caller's job.
double battery_step(const BatteryParams& params, double e_now_wh,
                    double e_charge_wh, double e_discharge_wh);

// The exponent uses seconds because the capacitance is in J/degC.
FridgeDiscretization fridge_discretize(const FridgeParams& params,
                                       double step_hours);

double fridge_step(const FridgeDiscretization& disc, double t_fridge_c,
                   int u_fr, double t_house_c);

inline double fridge_energy(const FridgeParams& params, double step_hours) {
  return params.p_rated_w * step_hours;
}

}  // namespace pvmpc
