#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pvmpc::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { kContinuous, kBinary };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  VarType type = VarType::kContinuous;
  double objective = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// Minimization MILP with binary and continuous variables.
class Model {
 public:
  int add_variable(std::string name, double lb, double ub,
                   VarType type = VarType::kContinuous, double objective = 0.0);
  int add_binary(std::string name, double objective = 0.0) {
    return add_variable(std::move(name), 0.0, 1.0, VarType::kBinary, objective);
  }
  int add_constraint(std::string name, std::vector<Term> terms,
                     Relation relation, double rhs);

  void set_objective(int var, double coef) { vars_.at(var).objective = coef; }
  void set_bounds(int var, double lb, double ub);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Variable& variable(int j) const { return vars_.at(j); }
  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const;

  double objective_value(std::span<const double> values) const;
  double row_activity(int row, std::span<const double> values) const;

  // Throws ContractError naming the first offending variable or row.
  void validate() const;

  // CPLEX-LP-like text listing for cross-checking with external solvers.
  void write_lp(std::ostream& out) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

struct Violation {
  enum class Kind { kBound, kRow, kIntegrality };
  Kind kind = Kind::kRow;
  int index = 0;  // variable or row index
  double amount = 0.0;
  std::string description;
};

// Every bound, row and integrality violation larger than `tol`.
std::vector<Violation> check_solution(const Model& model,
                                      std::span<const double> values,
                                      double tol);

}  // namespace pvmpc::milp
