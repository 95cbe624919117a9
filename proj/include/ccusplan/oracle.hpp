#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccusplan/milp.hpp"
#include "ccusplan/solver.hpp"

namespace ccusplan::oracle {

struct OracleOptions {
  std::int64_t budget = 4096; // max product of integer domain sizes
  double gap_tol = 1e-6;      // LP gap per assignment
  double time_limit_s = 0.0;
  int threads = 0;      // >1 splits assignment chunks across OpenMP threads
  int batch_size = 256; // assignments per solver call in the threaded path
  double tolerance = 1e-6; // agreement threshold, max(tol, tol*|oracle|)
};

struct OracleReport {
  bool feasible = false;   // at least one assignment has a feasible LP
  double best_objective = 0.0;
  std::vector<double> best_assignment; // aligned with integer_names
  std::vector<std::string> integer_names;
  std::int64_t enumerated = 0;
  std::int64_t feasible_count = 0;
  // filled by verify_solution
  bool agreement = false;
  double abs_delta = 0.0;
  double rel_delta = 0.0;
};

// Exact optimum by lexicographic enumeration over all integer assignments,
// each one an LP with the integers fixed as bounds. Refuses (ModelError) when
// the domain product exceeds the budget; domains are tightened from bounds
// before counting.
OracleReport enumerate_optimum(const milp::Model& model, milp::Solver& solver,
                               const OracleOptions& opts = {});

// enumerate_optimum plus comparison against a candidate objective.
OracleReport verify_solution(const milp::Model& model, milp::Solver& solver,
                             double candidate_objective, const OracleOptions& opts = {});

} // namespace ccusplan::oracle
