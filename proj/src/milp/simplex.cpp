#include "pvmpc/milp/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "pvmpc/error.hpp"

namespace pvmpc::milp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;
constexpr double kDegenerateStep = 1e-11;

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kNumericalFailure: return "NumericalFailure";
    case LpStatus::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

LpEngine::LpEngine(const Model& model, LpOptions options)
    : model_(model), opt_(options) {
  model_.validate();
  n_ = model.num_variables();
  m_ = model.num_constraints();

  std::vector<int> counts(n_ + 1, 0);
  for (const auto& row : model.constraints()) {
    for (const auto& t : row.terms) ++counts[t.var + 1];
  }
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j + 1];
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : model.constraints()[i].terms) {
      if (t.coef == 0.0) continue;
      col_row_[fill[t.var]] = i;
      col_val_[fill[t.var]] = t.coef;
      ++fill[t.var];
    }
  }
  // Zero coefficients were skipped; trim each column to what was filled.
  {
    std::vector<int> start(n_ + 1, 0);
    int out = 0;
    for (int j = 0; j < n_; ++j) {
      start[j] = out;
      for (int p = col_start_[j]; p < fill[j]; ++p) {
        col_row_[out] = col_row_[p];
        col_val_[out] = col_val_[p];
        ++out;
      }
    }
    start[n_] = out;
    col_start_ = std::move(start);
    col_row_.resize(out);
    col_val_.resize(out);
  }

  cost_.assign(n_ + m_, 0.0);
  lb_.assign(n_ + m_, 0.0);
  ub_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    const auto& v = model.variables()[j];
    cost_[j] = v.objective;
    lb_[j] = v.lb;
    ub_[j] = v.ub;
  }
  for (int i = 0; i < m_; ++i) {
    const auto& r = model.constraints()[i];
    switch (r.relation) {
      case Relation::kLessEqual: lb_[n_ + i] = -kInf; ub_[n_ + i] = r.rhs; break;
      case Relation::kGreaterEqual: lb_[n_ + i] = r.rhs; ub_[n_ + i] = kInf; break;
      case Relation::kEqual: lb_[n_ + i] = r.rhs; ub_[n_ + i] = r.rhs; break;
    }
  }
  x_.assign(n_ + m_, 0.0);
  reset_to_slack_basis();
}

void LpEngine::reset_to_slack_basis() {
  status_.assign(n_ + m_, kAtLower);
  head_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    status_[n_ + i] = kBasic;
  }
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = -1.0;
}

void LpEngine::place_nonbasic(int j) {
  const bool has_lb = std::isfinite(lb_[j]);
  const bool has_ub = std::isfinite(ub_[j]);
  if (status_[j] == kAtUpper && has_ub) {
    x_[j] = ub_[j];
  } else if (has_lb) {
    status_[j] = kAtLower;
    x_[j] = lb_[j];
  } else if (has_ub) {
    status_[j] = kAtUpper;
    x_[j] = ub_[j];
  } else {
    status_[j] = kFreeZero;
    x_[j] = 0.0;
  }
}

void LpEngine::set_bounds(std::span<const double> lb,
                          std::span<const double> ub) {
  if (lb.size() != static_cast<std::size_t>(n_) ||
      ub.size() != static_cast<std::size_t>(n_)) {
    throw ContractError("bound vectors must cover every structural variable");
  }
  for (int j = 0; j < n_; ++j) set_bound(j, lb[j], ub[j]);
}

void LpEngine::set_bound(int var, double lb, double ub) {
  if (var < 0 || var >= n_ || lb > ub) throw ContractError("invalid bound change");
  lb_[var] = lb;
  ub_[var] = ub;
  if (status_[var] != kBasic) place_nonbasic(var);
}

LpEngine::Basis LpEngine::basis() const { return {head_, status_}; }

void LpEngine::set_basis(const Basis& basis) {
  if (basis.head.size() != static_cast<std::size_t>(m_) ||
      basis.status.size() != static_cast<std::size_t>(n_ + m_)) {
    throw ContractError("basis does not match the model dimensions");
  }
  // The current inverse stays valid when the basic set is unchanged;
  // otherwise solve() rebuilds it.
  if (basis.head != head_) binv_.clear();
  head_ = basis.head;
  status_ = basis.status;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] != kBasic) place_nonbasic(j);
  }
}

bool LpEngine::refactor() {
  const std::size_t mm = static_cast<std::size_t>(m_);
  std::vector<double> b(mm * mm, 0.0);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (j >= n_) {
      b[static_cast<std::size_t>(j - n_) * mm + i] = -1.0;
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        b[static_cast<std::size_t>(col_row_[p]) * mm + i] = col_val_[p];
      }
    }
  }
  // Gauss-Jordan with partial pivoting on [B | I].
  std::vector<double> inv(mm * mm, 0.0);
  for (std::size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
  for (std::size_t c = 0; c < mm; ++c) {
    std::size_t piv = c;
    double best = std::abs(b[c * mm + c]);
    for (std::size_t r = c + 1; r < mm; ++r) {
      const double v = std::abs(b[r * mm + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < kSingularTol) return false;
    if (piv != c) {
      std::swap_ranges(b.begin() + piv * mm, b.begin() + (piv + 1) * mm,
                       b.begin() + c * mm);
      std::swap_ranges(inv.begin() + piv * mm, inv.begin() + (piv + 1) * mm,
                       inv.begin() + c * mm);
    }
    const double d = 1.0 / b[c * mm + c];
    for (std::size_t k = 0; k < mm; ++k) {
      b[c * mm + k] *= d;
      inv[c * mm + k] *= d;
    }
    for (std::size_t r = 0; r < mm; ++r) {
      if (r == c) continue;
      const double f = b[r * mm + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < mm; ++k) {
        b[r * mm + k] -= f * b[c * mm + k];
        inv[r * mm + k] -= f * inv[c * mm + k];
      }
    }
  }
  // Rows of B were indexed by constraint and columns by basis position, so
  // inv maps constraint space to basis positions as required.
  binv_ = std::move(inv);
  return true;
}

void LpEngine::compute_basic_values() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      rhs[j - n_] += x_[j];
    } else {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
        rhs[col_row_[p]] -= col_val_[p] * x_[j];
      }
    }
  }
  for (int i = 0; i < m_; ++i) {
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    double v = 0.0;
    for (int k = 0; k < m_; ++k) v += row[k] * rhs[k];
    x_[head_[i]] = v;
  }
}

double LpEngine::column_dot(int j, const std::vector<double>& y) const {
  if (j >= n_) return -y[j - n_];
  double v = 0.0;
  for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    v += col_val_[p] * y[col_row_[p]];
  }
  return v;
}

void LpEngine::column_ftran(int j, std::vector<double>& alpha) const {
  alpha.assign(m_, 0.0);
  if (j >= n_) {
    const int k = j - n_;
    for (int i = 0; i < m_; ++i) alpha[i] = -binv_[static_cast<std::size_t>(i) * m_ + k];
    return;
  }
  for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    const int k = col_row_[p];
    const double v = col_val_[p];
    for (int i = 0; i < m_; ++i) alpha[i] += binv_[static_cast<std::size_t>(i) * m_ + k] * v;
  }
}

void LpEngine::pivot_inverse(int row, const std::vector<double>& alpha) {
  double* pr = &binv_[static_cast<std::size_t>(row) * m_];
  const double inv = 1.0 / alpha[row];
  for (int k = 0; k < m_; ++k) pr[k] *= inv;
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0.0) continue;
    double* ri = &binv_[static_cast<std::size_t>(i) * m_];
    const double f = alpha[i];
    for (int k = 0; k < m_; ++k) ri[k] -= f * pr[k];
  }
}

LpResult LpEngine::solve() {
  LpResult result;
  const double ftol = opt_.feasibility_tol;
  const double dtol = opt_.optimality_tol;

  if (binv_.empty() && !refactor()) {
    reset_to_slack_basis();
    if (!refactor()) return result;
  }
  compute_basic_values();

  std::vector<double> cb(m_), y(m_), alpha;
  int degenerate_run = 0;
  bool bland = false;
  int since_refactor = 0;
  bool recovered = false;

  for (int iter = 0;; ++iter) {
    if (iter >= opt_.max_iterations) {
      result.status = LpStatus::kIterationLimit;
      result.iterations = iter;
      return result;
    }

    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      if (x_[j] < lb_[j] - ftol) {
        cb[i] = -1.0;
        phase1 = true;
      } else if (x_[j] > ub_[j] + ftol) {
        cb[i] = 1.0;
        phase1 = true;
      } else {
        cb[i] = 0.0;
      }
    }
    if (!phase1) {
      for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (cb[i] == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) y[k] += cb[i] * row[k];
    }

    int q = -1;
    double dq = 0.0;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto st = status_[j];
      if (st == kBasic || lb_[j] == ub_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y);
      const bool eligible = (st == kAtLower && d < -dtol) ||
                            (st == kAtUpper && d > dtol) ||
                            (st == kFreeZero && std::abs(d) > dtol);
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }

    if (q < 0) {
      if (since_refactor > 0) {
        // Confirm with freshly computed values before declaring termination.
        if (!refactor()) return result;
        compute_basic_values();
        since_refactor = 0;
        continue;
      }
      result.iterations = iter;
      if (phase1) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
      result.status = LpStatus::kOptimal;
      result.values.assign(x_.begin(), x_.begin() + n_);
      result.objective = 0.0;
      for (int j = 0; j < n_; ++j) result.objective += cost_[j] * x_[j];
      result.duals = y;
      return result;
    }

    const double dir = dq < 0.0 ? 1.0 : -1.0;
    column_ftran(q, alpha);

    double t_best = kInf;
    int r = -1;
    bool leave_upper = false;
    if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) t_best = ub_[q] - lb_[q];
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i];
      if (std::abs(a) <= kPivotTol) continue;
      const double rate = -dir * a;
      const int j = head_[i];
      const double x = x_[j];
      double bound;
      bool to_upper;
      if (rate < 0.0) {
        if (x > ub_[j] + ftol) {
          bound = ub_[j];
          to_upper = true;
        } else if (x >= lb_[j] - ftol && std::isfinite(lb_[j])) {
          bound = lb_[j];
          to_upper = false;
        } else {
          continue;
        }
      } else {
        if (x < lb_[j] - ftol) {
          bound = lb_[j];
          to_upper = false;
        } else if (x <= ub_[j] + ftol && std::isfinite(ub_[j])) {
          bound = ub_[j];
          to_upper = true;
        } else {
          continue;
        }
      }
      const double t = std::max(0.0, (bound - x) / rate);
      bool take = false;
      if (t < t_best - 1e-12) {
        take = true;
      } else if (t <= t_best + 1e-12 && r >= 0) {
        take = bland ? head_[i] < head_[r] : std::abs(a) > std::abs(alpha[r]);
      }
      if (take) {
        t_best = t;
        r = i;
        leave_upper = to_upper;
      }
    }

    if (!std::isfinite(t_best)) {
      result.iterations = iter;
      result.status = phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
      return result;
    }

    const double step = dir * t_best;
    if (step != 0.0) {
      x_[q] += step;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= step * alpha[i];
    }
    if (r < 0) {
      status_[q] = dir > 0 ? kAtUpper : kAtLower;
      x_[q] = dir > 0 ? ub_[q] : lb_[q];
    } else {
      const int leaving = head_[r];
      x_[leaving] = leave_upper ? ub_[leaving] : lb_[leaving];
      status_[leaving] = leave_upper ? kAtUpper : kAtLower;
      if (lb_[leaving] == ub_[leaving]) status_[leaving] = kAtLower;
      head_[r] = q;
      status_[q] = kBasic;
      pivot_inverse(r, alpha);
      ++since_refactor;
    }

    if (t_best <= kDegenerateStep) {
      if (++degenerate_run > opt_.degenerate_pivots_before_bland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (since_refactor >= opt_.refactor_interval) {
      if (!refactor()) {
        if (recovered) return result;
        recovered = true;
        reset_to_slack_basis();
        if (!refactor()) return result;
      }
      compute_basic_values();
      since_refactor = 0;
    }
  }
}

LpResult solve_lp(const Model& model, const LpOptions& options) {
  LpEngine engine(model, options);
  return engine.solve();
}

}  // namespace pvmpc::milp
