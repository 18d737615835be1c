#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pvmpc/milp/model.hpp"

namespace pvmpc::milp {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
  kIterationLimit,
};

const char* to_string(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  int max_iterations = 50000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_pivots_before_bland = 50;
  int refactor_interval = 100;
};

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> values;  // structural variables
  double objective = 0.0;
  std::vector<double> duals;   // one per row, d(objective)/d(rhs)
  int iterations = 0;
};

// Bounded-variable primal revised simplex over the rows of a Model. Variable
// bounds stay implicit; every row gets a logical variable r_i with A x - r = 0
// and bounds taken from the relation. Starting from any basis, a composite
// phase 1 minimizes the sum of bound violations of the basic variables before
// the true objective is optimized. The engine keeps its basis between solves
// so branch-and-bound can change structural bounds and re-optimize from the
// parent's basis.
class LpEngine {
 public:
  struct Basis {
    std::vector<int> head;             // basic variable per row
    std::vector<std::int8_t> status;   // per variable, see VarStatus
  };

  explicit LpEngine(const Model& model, LpOptions options = {});

  // Structural bounds; sizes must equal the number of model variables.
  void set_bounds(std::span<const double> lb, std::span<const double> ub);
  void set_bound(int var, double lb, double ub);

  Basis basis() const;
  void set_basis(const Basis& basis);

  LpResult solve();

 private:
  enum VarStatus : std::int8_t { kBasic = 0, kAtLower, kAtUpper, kFreeZero };

  int n_total() const { return n_ + m_; }
  void reset_to_slack_basis();
  void place_nonbasic(int j);
  bool refactor();
  void compute_basic_values();
  double column_dot(int j, const std::vector<double>& y) const;
  void column_ftran(int j, std::vector<double>& alpha) const;
  void pivot_inverse(int row, const std::vector<double>& alpha);

  const Model& model_;
  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  // Structural columns in compressed form.
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<double> x_;
  std::vector<std::int8_t> status_;
  std::vector<int> head_;
  std::vector<double> binv_;  // dense m x m, row-major
};

// Solves the continuous relaxation of `model` from a slack basis.
LpResult solve_lp(const Model& model, const LpOptions& options = {});

}  // namespace pvmpc::milp
