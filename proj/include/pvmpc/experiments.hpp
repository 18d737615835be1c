#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pvmpc/plant.hpp"
#include "pvmpc/sizing.hpp"

namespace pvmpc {

// Runs fn(0..n-1) on up to `jobs` threads. The first exception is rethrown
// after all workers finish.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

struct ControllerRun {
  SimulationTrace trace;
  ResiliencyMetrics metrics;
  double wall_time_s = 0.0;
};

ControllerRun run_and_score(ControllerKind controller, const Scenario& scenario,
                            const SystemConfig& config,
                            const RunOptions& options = {});

struct Comparison {
  ControllerRun baseline;
  ControllerRun proposed;
};

Comparison compare_controllers(const Scenario& scenario,
                               const SystemConfig& config,
                               const RunOptions& options = {},
                               std::size_t jobs = 2);

std::string comparison_table(const Comparison& c);

struct SweepRow {
  std::string size_label;
  ControllerKind controller = ControllerKind::kBaseline;
  double cost = 0.0;
  ResiliencyMetrics metrics;
};

// Baseline over the whole ladder followed by the proposed controller at the
// first (smallest) size.
std::vector<SweepRow> sweep_sizes(const Scenario& scenario,
                                  const SystemConfig& config,
                                  const RunOptions& options = {},
                                  std::size_t jobs = 1);

struct CostEquivalence {
  std::optional<std::string> label;  // smallest baseline size that matches
  double ratio = 0.0;                // its cost / cost of the proposed size
  double proposed_unserved = 0.0;
};

// Smallest ladder size whose baseline primary-unserved h/day is at most the
// proposed controller's. Without a match the ratio is reported as the cost of
// the largest size over the smallest (a lower bound).
CostEquivalence cost_equivalence(const std::vector<SweepRow>& rows);

std::string sweep_table(const std::vector<SweepRow>& rows);

}  // namespace pvmpc
