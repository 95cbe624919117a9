#include "ccusplan/oracle.hpp"

#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccusplan::oracle {

namespace {

using milp::Model;
using milp::ModelError;
using milp::SolveJob;
using milp::SolveOptions;
using milp::SolveResult;
using milp::SolveStatus;
using milp::VarHandle;
using milp::VarKind;

struct IntegerDomain {
  VarHandle var;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t size() const { return hi - lo + 1; }
};

std::vector<IntegerDomain> integer_domains(const Model& model) {
  std::vector<IntegerDomain> out;
  const auto& vars = model.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].kind == VarKind::Continuous) continue;
    if (!std::isfinite(vars[i].lower) || !std::isfinite(vars[i].upper))
      throw ModelError("oracle needs finite integer bounds: " + vars[i].name);
    IntegerDomain d;
    d.var = VarHandle{static_cast<std::int32_t>(i)};
    d.lo = static_cast<std::int64_t>(std::ceil(vars[i].lower - 1e-9));
    d.hi = static_cast<std::int64_t>(std::floor(vars[i].upper + 1e-9));
    out.push_back(d);
  }
  return out;
}

// Assignment for lexicographic index k: first variable most significant.
std::vector<std::int64_t> assignment_at(const std::vector<IntegerDomain>& doms,
                                        std::int64_t k) {
  std::vector<std::int64_t> out(doms.size());
  for (std::size_t i = doms.size(); i-- > 0;) {
    std::int64_t n = doms[i].size();
    out[i] = doms[i].lo + (k % n);
    k /= n;
  }
  return out;
}

SolveJob job_for(const std::vector<IntegerDomain>& doms,
                 const std::vector<std::int64_t>& assign) {
  SolveJob job;
  job.relax_integrality = true;
  job.fixes.reserve(doms.size());
  for (std::size_t i = 0; i < doms.size(); ++i) {
    double v = static_cast<double>(assign[i]);
    job.fixes.push_back({doms[i].var, v, v});
  }
  return job;
}

} // namespace

OracleReport enumerate_optimum(const Model& model, milp::Solver& solver,
                               const OracleOptions& opts) {
  std::vector<IntegerDomain> doms = integer_domains(model);

  OracleReport report;
  for (const IntegerDomain& d : doms)
    report.integer_names.push_back(model.variable(d.var).name);

  std::int64_t total = 1;
  for (const IntegerDomain& d : doms) {
    std::int64_t n = d.size();
    if (n <= 0) return report; // empty domain: trivially infeasible
    if (total > opts.budget / n)
      throw ModelError("oracle enumeration budget exceeded (limit " +
                       std::to_string(opts.budget) + ")");
    total *= n;
  }

  SolveOptions so;
  so.gap_tol = opts.gap_tol;
  so.time_limit_s = opts.time_limit_s;

  std::vector<SolveResult> results(static_cast<std::size_t>(total));
  bool threaded = opts.threads > 1 && total > 1;
  if (!threaded) {
    std::vector<SolveJob> jobs;
    jobs.reserve(static_cast<std::size_t>(total));
    for (std::int64_t k = 0; k < total; ++k)
      jobs.push_back(job_for(doms, assignment_at(doms, k)));
    results = solver.solve_jobs(model, jobs, so);
  } else {
    std::int64_t chunk = opts.batch_size > 0 ? opts.batch_size : 256;
    std::int64_t nchunks = (total + chunk - 1) / chunk;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(opts.threads)
#endif
    for (std::int64_t c = 0; c < nchunks; ++c) {
      std::int64_t begin = c * chunk;
      std::int64_t end = std::min(total, begin + chunk);
      std::vector<SolveJob> jobs;
      jobs.reserve(static_cast<std::size_t>(end - begin));
      for (std::int64_t k = begin; k < end; ++k)
        jobs.push_back(job_for(doms, assignment_at(doms, k)));
      std::vector<SolveResult> part = solver.solve_jobs(model, jobs, so);
      for (std::int64_t k = begin; k < end; ++k)
        results[static_cast<std::size_t>(k)] =
            std::move(part[static_cast<std::size_t>(k - begin)]);
    }
  }

  report.enumerated = total;
  std::int64_t best = -1;
  std::string first_error;
  std::int64_t errors = 0;
  for (std::int64_t k = 0; k < total; ++k) {
    const SolveResult& r = results[static_cast<std::size_t>(k)];
    if (r.status == SolveStatus::Error) {
      ++errors;
      if (first_error.empty()) first_error = r.message;
      continue;
    }
    if (r.status != SolveStatus::Optimal) continue;
    ++report.feasible_count;
    if (best < 0 || r.objective <
                        results[static_cast<std::size_t>(best)].objective - 1e-12)
      best = k; // ties keep the lexicographically smaller index
  }
  if (errors == total && total > 0)
    throw ModelError("oracle LP adapter failed on every assignment: " + first_error);

  if (best >= 0) {
    report.feasible = true;
    report.best_objective = results[static_cast<std::size_t>(best)].objective;
    for (std::int64_t v : assignment_at(doms, best))
      report.best_assignment.push_back(static_cast<double>(v));
  }
  return report;
}

OracleReport verify_solution(const Model& model, milp::Solver& solver,
                             double candidate_objective, const OracleOptions& opts) {
  OracleReport report = enumerate_optimum(model, solver, opts);
  if (!report.feasible) return report;
  report.abs_delta = std::fabs(candidate_objective - report.best_objective);
  double scale = std::fabs(report.best_objective);
  report.rel_delta = scale > 0.0 ? report.abs_delta / scale : report.abs_delta;
  report.agreement =
      report.abs_delta <= std::max(opts.tolerance, opts.tolerance * scale);
  return report;
}

} // namespace ccusplan::oracle
