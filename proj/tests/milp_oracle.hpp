#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "pvmpc/milp/branch_and_bound.hpp"

namespace oracle {

using namespace pvmpc::milp;

// Random MILP with `nb` binaries first, then `nc` bounded continuous columns.
inline Model random_milp(std::mt19937_64& rng, int nb, int nc, int rows) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Model m;
  for (int i = 0; i < nb; ++i) m.add_binary("b" + std::to_string(i), coef(rng));
  for (int i = 0; i < nc; ++i) {
    m.add_variable("x" + std::to_string(i), -2.0, 3.0, VarType::kContinuous, coef(rng));
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (int j = 0; j < nb + nc; ++j) {
      if (unit(rng) < 0.5) terms.push_back({j, coef(rng)});
    }
    const double u = unit(rng);
    const Relation rel = u < 0.45   ? Relation::kLessEqual
                         : u < 0.9  ? Relation::kGreaterEqual
                                    : Relation::kEqual;
    m.add_constraint("r" + std::to_string(r), std::move(terms), rel, coef(rng));
  }
  return m;
}

// Like random_milp, but every row holds at a random point, so the model is
// feasible. Inequalities get a random slack of up to `slack`.
inline Model feasible_milp(std::mt19937_64& rng, int nb, int nc, int rows,
                           double slack = 2.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Model m = random_milp(rng, nb, nc, rows);
  std::vector<double> point;
  for (int i = 0; i < nb; ++i) point.push_back(unit(rng) < 0.5 ? 0.0 : 1.0);
  for (int i = 0; i < nc; ++i) point.push_back(-2.0 + 5.0 * unit(rng));
  Model out;
  for (const auto& v : m.variables()) out.add_variable(v.name, v.lb, v.ub, v.type, v.objective);
  for (int r = 0; r < m.num_constraints(); ++r) {
    const auto& row = m.constraints()[r];
    double rhs = m.row_activity(r, point);
    if (row.relation == Relation::kLessEqual) rhs += slack * unit(rng);
    if (row.relation == Relation::kGreaterEqual) rhs -= slack * unit(rng);
    out.add_constraint(row.name, row.terms, row.relation, rhs);
  }
  return out;
}

struct Enumerated {
  bool feasible = false;
  double objective = kInf;
};

// Best LP value over every assignment of the binaries.
inline Enumerated enumerate(const Model& model) {
  std::vector<int> bins;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.variable(j).type == VarType::kBinary) bins.push_back(j);
  }
  Enumerated out;
  const std::uint64_t n = std::uint64_t{1} << bins.size();
  Model fixed = model;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double v = static_cast<double>((mask >> b) & 1U);
      fixed.set_bounds(bins[b], v, v);
    }
    const LpResult lp = solve_lp(fixed);
    if (lp.status == LpStatus::kOptimal && lp.objective < out.objective) {
      out.feasible = true;
      out.objective = lp.objective;
    }
  }
  return out;
}

}  // namespace oracle
