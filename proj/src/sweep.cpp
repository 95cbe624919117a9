#include "ccusplan/sweep.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccusplan::sweep {

namespace {

using milp::SolveJob;
using milp::SolveOptions;
using milp::SolveResult;
using milp::SolveStatus;

void check_axis(const std::vector<double>& axis, const std::string& which) {
  if (axis.empty()) throw ValidationError(which + " axis must be nonempty");
  for (std::size_t i = 0; i + 1 < axis.size(); ++i)
    if (!(axis[i] < axis[i + 1]))
      throw ValidationError(which + " axis must be strictly increasing");
  for (double v : axis)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError(which + " axis values must be finite and nonnegative");
}

double sum_over(const std::vector<std::vector<form::VarHandle>>& handles,
                const std::vector<double>& values) {
  double acc = 0.0;
  for (const auto& row : handles)
    for (form::VarHandle h : row) acc += values[h.index];
  return acc;
}

SolveJob cell_job(const form::BuiltModel& built, const PlanningInstance& inst, double tax,
                  double price) {
  const EconomicParams& ec = inst.economics;
  double w = ec.day_weight;
  const form::OperationVars& ov = built.map.scen[0];
  SolveJob job;
  for (const auto& row : ov.q_emi)
    for (form::VarHandle h : row) job.objective.push_back({h, w * tax});
  for (const auto& row : ov.q_cc)
    for (form::VarHandle h : row)
      job.objective.push_back({h, w * (ec.capture_cost - tax)});
  for (const auto& row : ov.q_cs)
    for (form::VarHandle h : row)
      job.objective.push_back({h, w * (ec.storage_cost - price)});
  return job;
}

void fill_cell(SweepCell& cell, const form::BuiltModel& built, const SolveResult& res) {
  cell.status = res.status;
  cell.gap = res.gap;
  cell.message = res.message;
  if (!res.has_values()) return;
  cell.total_cost = res.objective;
  cell.invest_total = form::evaluate_terms(built.invest.invest_ptg, res.values) +
                      form::evaluate_terms(built.invest.invest_siting, res.values);
  int ysum = 0;
  for (form::VarHandle h : built.map.y)
    ysum += static_cast<int>(std::lround(res.values[h.index]));
  cell.y_sum = ysum;
  const form::OperationVars& ov = built.map.scen[0];
  cell.carbon_capture = sum_over(ov.q_cc, res.values);
  cell.carbon_storage = sum_over(ov.q_cs, res.values);
  cell.carbon_utilization = sum_over(ov.q_cu, res.values);
  cell.carbon_emission = sum_over(ov.q_emi, res.values) - cell.carbon_capture;
}

} // namespace

SweepResult run_sweep(const PlanningInstance& inst, milp::Solver& solver,
                      const std::vector<double>& tax_axis,
                      const std::vector<double>& price_axis, const SweepOptions& opts) {
  check_axis(tax_axis, "tax");
  check_axis(price_axis, "price");
  if (!inst.ptg_technology || inst.siting_candidates.empty())
    throw ValidationError("sweep needs ptg_technology and at least one siting candidate");

  form::BuildOptions bopts;
  std::vector<form::ScenarioDef> scens{{tax_axis[0], price_axis[0], 1.0, ""}};
  form::BuiltModel built = form::build_planning_model(inst, scens, bopts);

  SweepResult out;
  out.tax_points = tax_axis;
  out.price_points = price_axis;
  std::size_t ncells = tax_axis.size() * price_axis.size();
  out.cells.resize(ncells);
  for (std::size_t ti = 0; ti < tax_axis.size(); ++ti)
    for (std::size_t pi = 0; pi < price_axis.size(); ++pi) {
      SweepCell& c = out.cells[ti * price_axis.size() + pi];
      c.tax = tax_axis[ti];
      c.price = price_axis[pi];
    }

  SolveOptions so;
  so.gap_tol = opts.gap_tol;
  so.time_limit_s = opts.time_limit_s;

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<SolveJob> jobs;
    jobs.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k)
      jobs.push_back(cell_job(built, inst, out.cells[k].tax, out.cells[k].price));
    std::vector<SolveResult> results = solver.solve_jobs(built.model, jobs, so);
    for (std::size_t k = begin; k < end; ++k)
      fill_cell(out.cells[k], built, results[k - begin]);
  };

  bool threaded = opts.jobs > 1 && ncells > 1;
  if (!threaded) {
    run_range(0, ncells);
  } else {
    std::size_t chunk = opts.batch_size > 0 ? static_cast<std::size_t>(opts.batch_size) : 32;
    std::size_t nchunks = (ncells + chunk - 1) / chunk;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(opts.jobs)
#endif
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
      std::size_t begin = static_cast<std::size_t>(c) * chunk;
      run_range(begin, std::min(ncells, begin + chunk));
    }
  }
  return out;
}

} // namespace ccusplan::sweep
