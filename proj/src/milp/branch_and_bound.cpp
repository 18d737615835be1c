#include "pvmpc/milp/branch_and_bound.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "pvmpc/error.hpp"

namespace pvmpc::milp {

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "Optimal";
    case MilpStatus::kGapLimit: return "GapLimit";
    case MilpStatus::kTimeLimit: return "TimeLimit";
    case MilpStatus::kNodeLimit: return "NodeLimit";
    case MilpStatus::kInfeasible: return "Infeasible";
    case MilpStatus::kUnbounded: return "Unbounded";
    case MilpStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "?";
}

void SolverOptions::validate() const {
  if (!(rel_gap_limit >= 0.0)) throw ContractError("rel_gap_limit must be >= 0");
  if (!(time_limit_s > 0.0)) throw ContractError("time_limit_s must be positive");
  if (node_limit && *node_limit <= 0) throw ContractError("node_limit must be positive");
  if (!(feasibility_tol > 0.0) || !(integrality_tol > 0.0)) {
    throw ContractError("tolerances must be positive");
  }
}

double relative_gap(double objective, double bound) {
  if (!std::isfinite(objective)) return kInf;
  if (!std::isfinite(bound)) return kInf;
  return (objective - bound) / std::max(std::abs(objective), 1e-10);
}

namespace {

// Fixings of binary variables: -1 free, otherwise the fixed value.
using Fixings = std::vector<std::int8_t>;

struct Node {
  std::int64_t id = 0;
  double bound = -kInf;
  Fixings fix;
  std::shared_ptr<const LpEngine::Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const SolverOptions& opt)
      : model_(model), opt_(opt), engine_(model, lp_options(opt)) {
    for (int j = 0; j < model.num_variables(); ++j) {
      const auto& v = model.variable(j);
      root_lb_.push_back(v.lb);
      root_ub_.push_back(v.ub);
      if (v.type == VarType::kBinary) binaries_.push_back(j);
    }
    start_ = std::chrono::steady_clock::now();
  }

  MilpSolution run();

 private:
  static LpOptions lp_options(const SolverOptions& opt) {
    LpOptions o;
    o.feasibility_tol = opt.feasibility_tol;
    return o;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  LpResult solve_node(const Fixings& fix, const LpEngine::Basis* basis) {
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const int j = binaries_[b];
      if (fix[b] < 0) {
        engine_.set_bound(j, root_lb_[j], root_ub_[j]);
      } else {
        engine_.set_bound(j, fix[b], fix[b]);
      }
    }
    if (basis) engine_.set_basis(*basis);
    LpResult lp = engine_.solve();
    lp_iterations_ += lp.iterations;
    return lp;
  }

  // Index into binaries_ of the most fractional binary, or -1 if integral.
  int most_fractional(const std::vector<double>& x) const {
    int pick = -1;
    double best = opt_.integrality_tol;
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const double v = x[binaries_[b]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best) {
        best = frac;
        pick = static_cast<int>(b);
      }
    }
    return pick;
  }

  bool prunable(double bound) const {
    if (!has_incumbent_) return false;
    return bound >= incumbent_obj_ - 1e-9 * std::max(1.0, std::abs(incumbent_obj_));
  }

  void offer_incumbent(std::vector<double> x) {
    for (int j : binaries_) x[j] = std::round(x[j]);
    const double obj = model_.objective_value(x);
    if (!has_incumbent_ || obj < incumbent_obj_) {
      has_incumbent_ = true;
      incumbent_obj_ = obj;
      incumbent_ = std::move(x);
    }
  }

  void dive(Fixings fix, LpResult lp, LpEngine::Basis basis);

  void report(double node_bound, double global_bound) {
    if (!opt_.on_node) return;
    opt_.on_node(NodeEvent{nodes_, node_bound, global_bound,
                           has_incumbent_ ? incumbent_obj_ : kInf});
  }

  const Model& model_;
  const SolverOptions& opt_;
  LpEngine engine_;
  std::vector<double> root_lb_, root_ub_;
  std::vector<int> binaries_;
  std::chrono::steady_clock::time_point start_;

  bool has_incumbent_ = false;
  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_;
  std::int64_t nodes_ = 0;
  std::int64_t lp_iterations_ = 0;
};

void BranchAndBound::dive(Fixings fix, LpResult lp, LpEngine::Basis basis) {
  while (true) {
    if (elapsed() > opt_.time_limit_s) return;
    const int b = most_fractional(lp.values);
    if (b < 0) {
      offer_incumbent(std::move(lp.values));
      return;
    }
    const double v = lp.values[binaries_[b]];
    const std::int8_t first = v >= 0.5 ? 1 : 0;
    bool advanced = false;
    for (std::int8_t value : {first, static_cast<std::int8_t>(1 - first)}) {
      fix[b] = value;
      LpResult child = solve_node(fix, &basis);
      ++nodes_;
      if (child.status != LpStatus::kOptimal) continue;
      if (prunable(child.objective)) return;
      lp = std::move(child);
      basis = engine_.basis();
      advanced = true;
      break;
    }
    if (!advanced) return;
  }
}

MilpSolution BranchAndBound::run() {
  MilpSolution sol;
  const auto finish = [&](MilpStatus status, double bound) {
    sol.status = status;
    sol.has_incumbent = has_incumbent_;
    if (has_incumbent_) {
      sol.values = incumbent_;
      sol.objective = incumbent_obj_;
      sol.best_bound = std::min(bound, incumbent_obj_);
      sol.rel_gap = relative_gap(sol.objective, sol.best_bound);
    } else {
      sol.best_bound = bound;
    }
    sol.nodes_explored = nodes_;
    sol.lp_iterations = lp_iterations_;
    sol.wall_time_s = elapsed();
    return sol;
  };

  const Fixings root_fix(binaries_.size(), -1);
  LpResult root = solve_node(root_fix, nullptr);
  ++nodes_;
  switch (root.status) {
    case LpStatus::kOptimal: break;
    case LpStatus::kInfeasible: return finish(MilpStatus::kInfeasible, kInf);
    case LpStatus::kUnbounded: return finish(MilpStatus::kUnbounded, -kInf);
    default: return finish(MilpStatus::kNumericalFailure, -kInf);
  }
  const double root_bound = root.objective;
  const LpEngine::Basis root_basis = engine_.basis();

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t next_id = 0;
  const auto branch = [&](const Fixings& fix, const LpResult& lp,
                          std::shared_ptr<const LpEngine::Basis> basis) {
    const int b = most_fractional(lp.values);
    for (std::int8_t value : {0, 1}) {
      Node child;
      child.id = next_id++;
      child.bound = lp.objective;
      child.fix = fix;
      child.fix[b] = value;
      child.basis = basis;
      open.push(std::move(child));
    }
  };

  if (most_fractional(root.values) < 0) {
    offer_incumbent(root.values);
    report(root_bound, incumbent_obj_);
    return finish(MilpStatus::kOptimal, incumbent_obj_);
  }
  report(root_bound, root_bound);
  if (opt_.root_dive) dive(root_fix, root, root_basis);
  branch(root_fix, root,
         std::make_shared<const LpEngine::Basis>(root_basis));

  while (!open.empty()) {
    const double global_bound = std::min(open.top().bound, incumbent_obj_);
    if (has_incumbent_ && prunable(open.top().bound)) {
      // Every open node is dominated by the incumbent.
      return finish(MilpStatus::kOptimal, incumbent_obj_);
    }
    if (has_incumbent_ &&
        relative_gap(incumbent_obj_, global_bound) <= opt_.rel_gap_limit) {
      return finish(MilpStatus::kGapLimit, global_bound);
    }
    if (elapsed() > opt_.time_limit_s) {
      return finish(MilpStatus::kTimeLimit, global_bound);
    }
    if (opt_.node_limit && nodes_ >= *opt_.node_limit) {
      return finish(MilpStatus::kNodeLimit, global_bound);
    }

    Node node = open.top();
    open.pop();
    LpResult lp = solve_node(node.fix, node.basis.get());
    ++nodes_;
    if (lp.status == LpStatus::kNumericalFailure ||
        lp.status == LpStatus::kIterationLimit) {
      // Retry from scratch before giving up on the node.
      engine_.set_basis(root_basis);
      lp = solve_node(node.fix, nullptr);
    }
    if (lp.status == LpStatus::kOptimal && !prunable(lp.objective)) {
      if (most_fractional(lp.values) < 0) {
        offer_incumbent(std::move(lp.values));
      } else {
        branch(node.fix, lp, std::make_shared<const LpEngine::Basis>(engine_.basis()));
      }
    } else if (lp.status != LpStatus::kOptimal &&
               lp.status != LpStatus::kInfeasible) {
      return finish(MilpStatus::kNumericalFailure, global_bound);
    }
    const double gb =
        open.empty() ? incumbent_obj_ : std::min(open.top().bound, incumbent_obj_);
    report(lp.status == LpStatus::kOptimal ? lp.objective : kInf, gb);
  }

  if (!has_incumbent_) return finish(MilpStatus::kInfeasible, kInf);
  return finish(MilpStatus::kOptimal, incumbent_obj_);
}

}  // namespace

MilpSolution solve_milp(const Model& model, const SolverOptions& options) {
  options.validate();
  BranchAndBound bnb(model, options);
  return bnb.run();
}

}  // namespace pvmpc::milp
