#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ccusplan::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown on malformed model input (duplicate name, inverted bounds,
/// unknown handle, non-finite coefficient).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

enum class VarKind { Continuous, Binary, Integer };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct VarHandle {
  std::int32_t index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(VarHandle a, VarHandle b) { return a.index == b.index; }
  friend bool operator<(VarHandle a, VarHandle b) { return a.index < b.index; }
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = -kInf;
  double upper = kInf;
};

struct Term {
  VarHandle var;
  double coeff = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // sorted by handle, duplicates merged
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

struct Objective {
  bool minimize = true;
  std::vector<Term> terms;  // canonical like constraint terms
  double constant = 0.0;
};

/// Solver-agnostic MILP: typed variables, linear rows, linear objective.
/// Construction is single-threaded; a finished model is immutable in
/// practice and safe to share across solve calls.
class Model {
 public:
  VarHandle add_variable(std::string name, VarKind kind, double lower, double upper);
  std::int32_t add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                              double rhs);
  void set_objective(std::vector<Term> terms, double constant = 0.0);

  /// Adds `coeff * var` into the objective (merged at solve/export time
  /// through canonicalization; duplicates are combined immediately).
  void add_objective_term(VarHandle var, double coeff);

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const Variable& variable(VarHandle h) const { return vars_.at(check(h)); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Objective& objective() const { return obj_; }
  VarHandle find_variable(const std::string& name) const;  // invalid handle if absent

  /// Overwrites the bounds of an existing variable (used to fix
  /// first-stage decisions and integer assignments).
  void set_bounds(VarHandle h, double lower, double upper);

  /// Largest absolute violation over rows, variable bounds, and
  /// integrality when `values` is plugged in. Row activity is absolute.
  double max_violation(const std::vector<double>& values) const;

  /// Objective value at `values` (terms plus constant).
  double objective_value(const std::vector<double>& values) const;

  /// Deterministic CPLEX-style LP text. Variable names are mangled to the
  /// LP charset ('[' -> '(', ']' -> ')'); output is byte-identical across
  /// runs for the same model.
  std::string export_lp() const;

 private:
  std::int32_t check(VarHandle h) const;
  static std::vector<Term> canonicalize(std::vector<Term> terms, std::size_t nvars,
                                        const std::string& where);

  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::unordered_map<std::string, std::int32_t> var_names_;
  Objective obj_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, TimeLimit, Error };

std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  std::vector<double> values;  // per variable index; empty unless incumbent known
  double gap = 0.0;            // relative MIP gap of the incumbent
  double wall_time_s = 0.0;
  std::string message;  // backend diagnostics, verbatim on failure

  bool has_values() const { return !values.empty(); }
};

}  // namespace ccusplan::milp
