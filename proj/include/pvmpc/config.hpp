#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pvmpc/devices.hpp"
#include "pvmpc/scenario.hpp"

namespace pvmpc {

// Objective weights and charge-fraction bounds of the MPC problem.
struct MpcParams {
  double lambda1 = 1.0;  // fridge slack
  double lambda2 = 1.0;  // stored energy
  double lambda3 = 1.0;  // charge fraction
  double lambda4 = 10.0; // secondary service
  double eta_con = 1.0;  // controller-side battery efficiency
  double gamma_min = -1.0;
  double gamma_max = 2.0;

  void validate() const;
  bool operator==(const MpcParams&) const = default;
};

struct SystemConfig {
  PvArrayParams pv;
  BatteryParams battery;
  FridgeParams fridge;
  SecondaryLoadSchedule loads;
  double inverter_efficiency = 0.9;
  MpcParams mpc;
  double step_hours = 10.0 / 60.0;
  int horizon_steps = 144;

  // Closed-loop initial state; an unset battery level means "full".
  std::optional<double> initial_e_bat_wh;
  double initial_t_fridge_c = 2.0;

  // Band tolerance used when counting temperature violations.
  double violation_tol_c = 0.05;

  // Zero-mean Gaussian error on the PV forecast handed to the MPC, in Wh.
  double forecast_noise_std_wh = 0.0;
  std::uint64_t forecast_seed = 1;

  void validate() const;
  double initial_e_bat() const {
    return initial_e_bat_wh.value_or(battery.e_max_wh);
  }
  bool operator==(const SystemConfig&) const = default;
};

// Parses the JSON config format. Omitted fields keep their defaults; unknown
// fields and wrong types are reported with their dotted path.
SystemConfig parse_config(std::string_view text,
                          std::string_view origin = "<config>");
SystemConfig load_config(const std::filesystem::path& path);

std::string serialize_config(const SystemConfig& config);

}  // namespace pvmpc
