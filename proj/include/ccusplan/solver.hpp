#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ccusplan/milp.hpp"

namespace ccusplan::milp {

struct SolveOptions {
  double gap_tol = 1e-6;     // relative MIP gap the backend may stop at
  double time_limit_s = 0.0; // 0 means no limit
  int threads = 0;           // parallel width for batched work, 0 = auto
  int seed = 0;              // passed to backends that randomize; HiGHS ignores it
};

// One variant of a model: bound fixes and objective coefficient replacements
// applied on top of the base model, optionally with integrality relaxed.
// Variants share the constraint matrix, so a solver can factor that work out.
struct BoundFix {
  VarHandle var;
  double lower = 0.0;
  double upper = 0.0;
};

struct ObjectiveOverride {
  VarHandle var;
  double coeff = 0.0; // replaces the base coefficient for this column
};

struct SolveJob {
  std::vector<BoundFix> fixes;
  std::vector<ObjectiveOverride> objective;
  bool relax_integrality = false;
};

class Solver {
 public:
  virtual ~Solver() = default;

  virtual std::string name() const = 0;
  virtual bool available() const = 0;

  struct Batch {
    const Model* model = nullptr;
    std::vector<SolveJob> jobs; // empty means one as-is solve
  };

  // Solves every job of every batch entry. results[i][j] answers
  // batch[i].jobs[j]. Never throws on solver failure; failures come back as
  // SolveStatus::Error with the backend's stderr in message.
  virtual std::vector<std::vector<SolveResult>> solve_batch(
      const std::vector<Batch>& batch, const SolveOptions& opts) = 0;

  SolveResult solve(const Model& model, const SolveOptions& opts);
  std::vector<SolveResult> solve_jobs(const Model& model,
                                      const std::vector<SolveJob>& jobs,
                                      const SolveOptions& opts);
};

// Runs a Python helper over a JSON file pair; the helper builds each problem
// once and answers all of its jobs with scipy's MILP interface (HiGHS).
// Environment knobs:
//   CCUSPLAN_SOLVER_BACKEND  scipy (default) | none
//   CCUSPLAN_PYTHON          interpreter, default python3
//   CCUSPLAN_SOLVER_SCRIPT   use this script instead of the embedded one
class SubprocessSolver final : public Solver {
 public:
  SubprocessSolver();
  ~SubprocessSolver() override;

  SubprocessSolver(const SubprocessSolver&) = delete;
  SubprocessSolver& operator=(const SubprocessSolver&) = delete;

  std::string name() const override { return "scipy-milp"; }
  bool available() const override;

  std::vector<std::vector<SolveResult>> solve_batch(
      const std::vector<Batch>& batch, const SolveOptions& opts) override;

  const std::string& script_path() const { return script_; }

 private:
  std::string python_;
  std::string workdir_;
  std::string script_;
  mutable std::atomic<int> probe_{-1}; // -1 unknown, 0 missing, 1 ok
  std::atomic<std::uint64_t> call_count_{0}; // distinct scratch files per call
};

// Returned when CCUSPLAN_SOLVER_BACKEND=none; every job comes back as Error.
class NullSolver final : public Solver {
 public:
  std::string name() const override { return "none"; }
  bool available() const override { return false; }
  std::vector<std::vector<SolveResult>> solve_batch(
      const std::vector<Batch>& batch, const SolveOptions& opts) override;
};

std::unique_ptr<Solver> make_solver();

} // namespace ccusplan::milp
