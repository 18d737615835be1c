#pragma once

#include <cstddef>

namespace pvmpc {

// Dynamic plant state x(k) = [E_bat, T_fr] plus the last applied compressor
// command (hysteresis memory for rule-based fallbacks).
struct PlantState {
  double e_bat_wh = 0.0;
  double t_fr_c = 0.0;
  std::size_t step_index = 0;
  int u_fr_prev = 0;
};

// Battery charge-controller decision derived from the charge fraction.
struct ChargeDecision {
  int c = 0;      // charge enable
  int d = 0;      // discharge enable
  int x_bat = 0;  // 0 idle/discharge, 1 normal charge, 2 fast charge
  bool operator==(const ChargeDecision&) const = default;
};

struct ControlCommand {
  int u_fr = 0;
  int u_s = 0;
  double gamma = 0.0;
  ChargeDecision charge;

  // c*d == 0 and x_bat consistent with gamma.
  bool consistent() const;
};

}  // namespace pvmpc
