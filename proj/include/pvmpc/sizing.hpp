#pragma once

#include <string>
#include <vector>

#include "pvmpc/config.hpp"

namespace pvmpc {

struct PanelSpec {
  double rated_w = 285.0;
  double unit_cost = 100.0;
};

struct BatteryUnitSpec {
  double capacity_wh = 2700.0;  // 225 Ah at 12 V
  double nominal_v = 12.0;
  double max_dod = 0.8;
  double unit_cost = 400.0;
};

// Inputs of the stand-alone PV sizing method. Defaults are the calibration
// that reproduces the reference design (3 panels, 2 x 12 V units, 24 V).
struct SizingSpec {
  double daily_demand_wh = 3858.0;  // lights + fans 3408 Wh, fridge 450 Wh
  double insolation_psh = 5.3;      // peak sun hours per day
  double storage_days = 1.0;
  double system_voltage = 24.0;
  PanelSpec panel;
  BatteryUnitSpec battery;
  double inverter_efficiency = 0.9;

  void validate() const;
};

struct SystemSize {
  std::string label;
  int n_panels_parallel = 1;
  int n_battery_series = 1;
  int n_battery_strings = 1;
  double system_voltage = 0.0;
  double total_cost = 0.0;

  int n_batteries() const { return n_battery_series * n_battery_strings; }
};

// Daily demand of the default loads with the refrigerator running `duty` of
// the time.
double default_daily_demand(const SystemConfig& config, double fridge_duty);

SystemSize size_system(const SizingSpec& spec);

// The fixed A..F configurations (2 units per series string).
std::vector<SystemSize> size_ladder();

// Copies `config` with the PV panel count of `size` and battery energy and
// power limits scaled by the string count relative to one string.
SystemConfig apply_size(const SystemConfig& config, const SystemSize& size);

std::string describe_sizing(const SizingSpec& spec, const SystemSize& size);

}  // namespace pvmpc
