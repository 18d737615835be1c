#include "pvmpc/milp/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pvmpc/error.hpp"

namespace pvmpc::milp {

int Model::add_variable(std::string name, double lb, double ub, VarType type,
                        double objective) {
  vars_.push_back({std::move(name), lb, ub, type, objective});
  return static_cast<int>(vars_.size()) - 1;
}

int Model::add_constraint(std::string name, std::vector<Term> terms,
                          Relation relation, double rhs) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw ContractError("constraint '" + name + "' references unknown variable");
    }
  }
  rows_.push_back({std::move(name), std::move(terms), relation, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void Model::set_bounds(int var, double lb, double ub) {
  auto& v = vars_.at(var);
  v.lb = lb;
  v.ub = ub;
}

int Model::num_binaries() const {
  int n = 0;
  for (const auto& v : vars_) n += v.type == VarType::kBinary;
  return n;
}

double Model::objective_value(std::span<const double> values) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) obj += vars_[j].objective * values[j];
  return obj;
}

double Model::row_activity(int row, std::span<const double> values) const {
  double act = 0.0;
  for (const auto& t : rows_.at(row).terms) act += t.coef * values[t.var];
  return act;
}

void Model::validate() const {
  for (const auto& v : vars_) {
    if (std::isnan(v.lb) || std::isnan(v.ub) || v.lb > v.ub) {
      throw ContractError("variable '" + v.name + "' has lb > ub");
    }
    if (v.lb == kInf || v.ub == -kInf) {
      throw ContractError("variable '" + v.name + "' has an infinite fixed bound");
    }
    if (v.type == VarType::kBinary && (v.lb < 0.0 || v.ub > 1.0)) {
      throw ContractError("binary variable '" + v.name + "' has bounds outside [0,1]");
    }
    if (!std::isfinite(v.objective)) {
      throw ContractError("variable '" + v.name + "' has a non-finite cost");
    }
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) {
      throw ContractError("row '" + r.name + "' has a non-finite right-hand side");
    }
    for (const auto& t : r.terms) {
      if (!std::isfinite(t.coef)) {
        throw ContractError("row '" + r.name + "' has a non-finite coefficient");
      }
    }
  }
}

namespace {

void write_term(std::ostream& out, double coef, const std::string& name,
                bool first) {
  char buf[64];
  if (first) {
    std::snprintf(buf, sizeof buf, "%.17g", coef);
  } else {
    std::snprintf(buf, sizeof buf, " %c %.17g", coef < 0 ? '-' : '+',
                  std::abs(coef));
  }
  out << buf << ' ' << name;
}

std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void Model::write_lp(std::ostream& out) const {
  out << "Minimize\n obj: ";
  bool first = true;
  for (const auto& v : vars_) {
    if (v.objective == 0.0) continue;
    write_term(out, v.objective, v.name, first);
    first = false;
  }
  if (first) out << "0";
  out << "\nSubject To\n";
  for (const auto& r : rows_) {
    out << ' ' << r.name << ": ";
    bool f = true;
    for (const auto& t : r.terms) {
      write_term(out, t.coef, vars_[t.var].name, f);
      f = false;
    }
    if (f) out << "0";
    switch (r.relation) {
      case Relation::kLessEqual: out << " <= "; break;
      case Relation::kEqual: out << " = "; break;
      case Relation::kGreaterEqual: out << " >= "; break;
    }
    out << bound_text(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : vars_) {
    if (v.type == VarType::kBinary && v.lb == 0.0 && v.ub == 1.0) continue;
    if (v.lb == -kInf && v.ub == kInf) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << bound_text(v.lb) << " <= " << v.name
          << " <= " << bound_text(v.ub) << '\n';
    }
  }
  out << "Binaries\n";
  for (const auto& v : vars_) {
    if (v.type == VarType::kBinary) out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

std::vector<Violation> check_solution(const Model& model,
                                      std::span<const double> values,
                                      double tol) {
  if (values.size() != static_cast<std::size_t>(model.num_variables())) {
    throw ContractError("assignment does not cover every variable");
  }
  std::vector<Violation> out;
  const auto& vars = model.variables();
  for (int j = 0; j < model.num_variables(); ++j) {
    const auto& v = vars[j];
    const double x = values[j];
    const double below = v.lb - x;
    const double above = x - v.ub;
    if (!std::isfinite(x)) {
      out.push_back({Violation::Kind::kBound, j, kInf, v.name + " is not finite"});
      continue;
    }
    if (below > tol) {
      out.push_back({Violation::Kind::kBound, j, below, v.name + " below lower bound"});
    } else if (above > tol) {
      out.push_back({Violation::Kind::kBound, j, above, v.name + " above upper bound"});
    }
    if (v.type == VarType::kBinary) {
      const double frac = std::abs(x - std::round(x));
      if (frac > tol) {
        out.push_back({Violation::Kind::kIntegrality, j, frac,
                       v.name + " is not integral"});
      }
    }
  }
  const auto& rows = model.constraints();
  for (int i = 0; i < model.num_constraints(); ++i) {
    const auto& r = rows[i];
    const double act = model.row_activity(i, values);
    double viol = 0.0;
    switch (r.relation) {
      case Relation::kLessEqual: viol = act - r.rhs; break;
      case Relation::kGreaterEqual: viol = r.rhs - act; break;
      case Relation::kEqual: viol = std::abs(act - r.rhs); break;
    }
    if (viol > tol) {
      out.push_back({Violation::Kind::kRow, i, viol, "row " + r.name + " violated"});
    }
  }
  return out;
}

}  // namespace pvmpc::milp
