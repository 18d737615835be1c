#include "pvmpc/sizing.hpp"

#include <cmath>
#include <cstdio>

#include "pvmpc/error.hpp"

namespace pvmpc {

void SizingSpec::validate() const {
  if (insolation_psh <= 0.0) throw DataError("cannot size for zero sun");
  if (daily_demand_wh <= 0.0) throw DataError("daily demand must be positive");
  if (storage_days <= 0.0) throw DataError("storage days must be positive");
  if (system_voltage <= 0.0) throw DataError("system voltage must be positive");
  if (panel.rated_w <= 0.0 || panel.unit_cost < 0.0) {
    throw DataError("invalid panel specification");
  }
  if (battery.capacity_wh <= 0.0 || battery.nominal_v <= 0.0 ||
      battery.unit_cost < 0.0) {
    throw DataError("invalid battery specification");
  }
  if (!(battery.max_dod > 0.0 && battery.max_dod <= 1.0)) {
    throw DataError("depth of discharge must lie in (0,1]");
  }
  if (!(inverter_efficiency > 0.0 && inverter_efficiency <= 1.0)) {
    throw DataError("inverter efficiency must lie in (0,1]");
  }
}

double default_daily_demand(const SystemConfig& config, double fridge_duty) {
  return secondary_daily_energy(config.loads) +
         fridge_duty * 24.0 * config.fridge.p_rated_w;
}

SystemSize size_system(const SizingSpec& spec) {
  spec.validate();
  SystemSize s;
  s.label = "sized";
  s.n_battery_series =
      static_cast<int>(std::ceil(spec.system_voltage / spec.battery.nominal_v));
  const double string_wh =
      s.n_battery_series * spec.battery.capacity_wh * spec.battery.max_dod;
  s.n_battery_strings = static_cast<int>(std::ceil(
      spec.daily_demand_wh * spec.storage_days /
      (string_wh * spec.inverter_efficiency)));
  s.n_panels_parallel = static_cast<int>(std::ceil(
      spec.daily_demand_wh /
      (spec.insolation_psh * spec.panel.rated_w * spec.inverter_efficiency)));
  s.system_voltage = s.n_battery_series * spec.battery.nominal_v;
  s.total_cost = s.n_panels_parallel * spec.panel.unit_cost +
                 s.n_batteries() * spec.battery.unit_cost;
  return s;
}

std::vector<SystemSize> size_ladder() {
  struct Row {
    const char* label;
    int panels;
    int strings;
  };
  static constexpr Row rows[] = {{"A", 3, 1}, {"B", 4, 1}, {"C", 3, 2},
                                 {"D", 4, 2}, {"E", 5, 2}, {"F", 6, 2}};
  std::vector<SystemSize> out;
  for (const auto& r : rows) {
    SystemSize s;
    s.label = r.label;
    s.n_panels_parallel = r.panels;
    s.n_battery_series = 2;
    s.n_battery_strings = r.strings;
    s.system_voltage = 24.0;
    s.total_cost = 100.0 * r.panels + 400.0 * s.n_batteries();
    out.push_back(s);
  }
  return out;
}

SystemConfig apply_size(const SystemConfig& config, const SystemSize& size) {
  if (size.n_panels_parallel < 1 || size.n_battery_strings < 1) {
    throw ContractError("system size counts must be >= 1");
  }
  SystemConfig out = config;
  out.pv.n_panels = size.n_panels_parallel;
  const double k = size.n_battery_strings;
  out.battery.e_min_wh *= k;
  out.battery.e_max_wh *= k;
  out.battery.e_charge_max_wh *= k;
  out.battery.e_discharge_max_wh *= k;
  if (out.initial_e_bat_wh) *out.initial_e_bat_wh *= k;
  return out;
}

std::string describe_sizing(const SizingSpec& spec, const SystemSize& size) {
  char buf[1024];
  std::snprintf(
      buf, sizeof buf,
      "panels_parallel   %d\n"
      "battery_series    %d\n"
      "battery_strings   %d\n"
      "batteries         %d\n"
      "system_voltage_v  %.0f\n"
      "total_cost        %.2f\n"
      "\nassumptions\n"
      "daily_demand_wh   %.1f\n"
      "insolation_psh    %.2f\n"
      "storage_days      %.2f\n"
      "panel             %.0f W, $%.2f\n"
      "battery_unit      %.0f Wh, %.0f V, dod %.2f, $%.2f\n"
      "inverter_eff      %.3f\n",
      size.n_panels_parallel, size.n_battery_series, size.n_battery_strings,
      size.n_batteries(), size.system_voltage, size.total_cost,
      spec.daily_demand_wh, spec.insolation_psh, spec.storage_days,
      spec.panel.rated_w, spec.panel.unit_cost, spec.battery.capacity_wh,
      spec.battery.nominal_v, spec.battery.max_dod, spec.battery.unit_cost,
      spec.inverter_efficiency);
  return buf;
}

}  // namespace pvmpc
