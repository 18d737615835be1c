#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pvmpc/milp/model.hpp"
#include "pvmpc/milp/simplex.hpp"

namespace pvmpc::milp {

enum class MilpStatus {
  kOptimal,           // search tree exhausted
  kGapLimit,          // stopped early with rel_gap <= rel_gap_limit
  kTimeLimit,         // check has_incumbent
  kNodeLimit,         // check has_incumbent
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
};

const char* to_string(MilpStatus status);

// Progress report handed to SolverOptions::on_node after each processed node.
struct NodeEvent {
  std::int64_t node = 0;
  double node_bound = 0.0;    // LP value at the node (+inf if pruned/infeasible)
  double global_bound = 0.0;  // min over open nodes and incumbent
  double incumbent = kInf;
};

struct SolverOptions {
  double rel_gap_limit = 0.01;
  double time_limit_s = 300.0;
  std::optional<std::int64_t> node_limit;
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  // Depth-first rounding dive from the root to find an early incumbent.
  bool root_dive = true;
  std::function<void(const NodeEvent&)> on_node;

  void validate() const;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = kInf;
  double best_bound = -kInf;
  double rel_gap = kInf;
  std::int64_t nodes_explored = 0;
  std::int64_t lp_iterations = 0;
  double wall_time_s = 0.0;
};

// (objective - bound) / max(|objective|, 1e-10).
double relative_gap(double objective, double bound);

// Best-bound-first branch-and-bound on the binary variables, branching on the
// most fractional binary (lowest index on ties). Child LPs are re-optimized
// from the parent's basis.
MilpSolution solve_milp(const Model& model, const SolverOptions& options = {});

}  // namespace pvmpc::milp
