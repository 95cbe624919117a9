#include "ccusplan/milp.hpp"

#include <algorithm>
#include <cmath>

#include "ccusplan/numfmt.hpp"

namespace ccusplan::milp {

namespace {

using ccusplan::format_number;

std::string format_double(double v) { return format_number(v); }

std::string lp_name(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '[') {
      out.push_back('(');
    } else if (c == ']') {
      out.push_back(')');
    } else if (c == ' ') {
      out.push_back('_');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

void append_terms(std::string& out, const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    double c = t.coeff;
    if (first) {
      if (c < 0) out += "- ";
      first = false;
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    out += format_double(std::fabs(c));
    out += ' ';
    out += "x";
    out += std::to_string(t.var.index);
  }
  if (first) out += "0 x0";  // empty expression placeholder
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

VarHandle Model::add_variable(std::string name, VarKind kind, double lower, double upper) {
  if (name.empty()) throw ModelError("variable name must be nonempty");
  if (var_names_.count(name)) throw ModelError("duplicate variable name: " + name);
  if (!(lower <= upper))
    throw ModelError("inverted bounds for " + name + ": [" + format_double(lower) + ", " +
                     format_double(upper) + "]");
  if (kind == VarKind::Binary) {
    if (lower < 0.0 || upper > 1.0)
      throw ModelError("binary variable " + name + " must have bounds within [0,1]");
  }
  VarHandle h{static_cast<std::int32_t>(vars_.size())};
  var_names_.emplace(name, h.index);
  vars_.push_back(Variable{std::move(name), kind, lower, upper});
  return h;
}

std::int32_t Model::check(VarHandle h) const {
  if (!h.valid() || static_cast<std::size_t>(h.index) >= vars_.size())
    throw ModelError("unknown variable handle");
  return h.index;
}

std::vector<Term> Model::canonicalize(std::vector<Term> terms, std::size_t nvars,
                                      const std::string& where) {
  for (const Term& t : terms) {
    if (!t.var.valid() || static_cast<std::size_t>(t.var.index) >= nvars)
      throw ModelError("unknown variable handle in " + where);
    if (!std::isfinite(t.coeff))
      throw ModelError("non-finite coefficient in " + where);
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  return merged;
}

std::int32_t Model::add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                                   double rhs) {
  if (!std::isfinite(rhs)) throw ModelError("non-finite rhs in " + name);
  auto merged = canonicalize(std::move(terms), vars_.size(), name);
  rows_.push_back(Constraint{std::move(name), std::move(merged), sense, rhs});
  return static_cast<std::int32_t>(rows_.size() - 1);
}

void Model::set_objective(std::vector<Term> terms, double constant) {
  obj_.terms = canonicalize(std::move(terms), vars_.size(), "objective");
  obj_.constant = constant;
  obj_.minimize = true;
}

void Model::add_objective_term(VarHandle var, double coeff) {
  check(var);
  if (!std::isfinite(coeff)) throw ModelError("non-finite coefficient in objective");
  obj_.terms.push_back(Term{var, coeff});
  obj_.terms = canonicalize(std::move(obj_.terms), vars_.size(), "objective");
}

VarHandle Model::find_variable(const std::string& name) const {
  auto it = var_names_.find(name);
  if (it == var_names_.end()) return VarHandle{};
  return VarHandle{it->second};
}

void Model::set_bounds(VarHandle h, double lower, double upper) {
  auto i = check(h);
  if (!(lower <= upper))
    throw ModelError("inverted bounds for " + vars_[i].name);
  vars_[i].lower = lower;
  vars_[i].upper = upper;
}

double Model::max_violation(const std::vector<double>& values) const {
  if (values.size() != vars_.size())
    throw ModelError("value vector length does not match variable count");
  double worst = 0.0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const Variable& v = vars_[i];
    double x = values[i];
    if (x < v.lower) worst = std::max(worst, v.lower - x);
    if (x > v.upper) worst = std::max(worst, x - v.upper);
    if (v.kind != VarKind::Continuous)
      worst = std::max(worst, std::fabs(x - std::round(x)));
  }
  for (const Constraint& c : rows_) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coeff * values[t.var.index];
    switch (c.sense) {
      case Sense::LessEqual: worst = std::max(worst, act - c.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
      case Sense::Equal: worst = std::max(worst, std::fabs(act - c.rhs)); break;
    }
  }
  return worst;
}

double Model::objective_value(const std::vector<double>& values) const {
  double obj = obj_.constant;
  for (const Term& t : obj_.terms) obj += t.coeff * values.at(t.var.index);
  return obj;
}

std::string Model::export_lp() const {
  std::string out;
  out.reserve(256 + 48 * rows_.size() + 32 * vars_.size());
  out += "\\ ccusplan model: ";
  out += std::to_string(vars_.size());
  out += " columns, ";
  out += std::to_string(rows_.size());
  out += " rows\n";
  // Column identifiers are positional (x<i>); original names are kept as a
  // comment table so the export stays parseable by strict LP readers.
  out += "\\ columns:\n";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    out += "\\   x" + std::to_string(i) + " = " + lp_name(vars_[i].name) + "\n";
  }
  out += "Minimize\n obj: ";
  append_terms(out, obj_.terms);
  if (obj_.constant != 0.0) {
    out += (obj_.constant < 0) ? " - " : " + ";
    out += format_double(std::fabs(obj_.constant));
  }
  out += "\nSubject To\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Constraint& c = rows_[r];
    out += " c" + std::to_string(r) + ": ";
    append_terms(out, c.terms);
    switch (c.sense) {
      case Sense::LessEqual: out += " <= "; break;
      case Sense::Equal: out += " = "; break;
      case Sense::GreaterEqual: out += " >= "; break;
    }
    out += format_double(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const Variable& v = vars_[i];
    std::string x = "x" + std::to_string(i);
    if (v.lower == -kInf && v.upper == kInf) {
      out += " " + x + " free\n";
    } else if (v.lower == -kInf) {
      out += " -inf <= " + x + " <= " + format_double(v.upper) + "\n";
    } else if (v.upper == kInf) {
      out += " " + x + " >= " + format_double(v.lower) + "\n";
    } else {
      out += " " + format_double(v.lower) + " <= " + x + " <= " + format_double(v.upper) +
             "\n";
    }
  }
  bool any_general = false, any_binary = false;
  for (const Variable& v : vars_) {
    any_general |= v.kind == VarKind::Integer;
    any_binary |= v.kind == VarKind::Binary;
  }
  if (any_general) {
    out += "Generals\n";
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].kind == VarKind::Integer) out += " x" + std::to_string(i) + "\n";
  }
  if (any_binary) {
    out += "Binaries\n";
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].kind == VarKind::Binary) out += " x" + std::to_string(i) + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace ccusplan::milp
