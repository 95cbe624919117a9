#pragma once

#include <string>
#include <vector>

#include "ccusplan/engine.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/solver.hpp"

namespace ccusplan::sweep {

struct SweepOptions {
  double gap_tol = 1e-4; // sweeps trade gap for volume; tighten when asserting
  double time_limit_s = 0.0;
  int jobs = 1; // worker threads over cell chunks; 1 = one batched call
  int batch_size = 32; // cells per solver call in the threaded path
};

struct SweepCell {
  double tax = 0.0;
  double price = 0.0;
  milp::SolveStatus status = milp::SolveStatus::Error;
  double total_cost = 0.0;
  double invest_total = 0.0;
  int y_sum = 0;
  double carbon_emission = 0.0;
  double carbon_capture = 0.0;
  double carbon_storage = 0.0;
  double carbon_utilization = 0.0;
  double gap = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<double> tax_points;
  std::vector<double> price_points;
  std::vector<SweepCell> cells; // row-major, tax outer
  const SweepCell& at(std::size_t ti, std::size_t pi) const {
    return cells[ti * price_points.size() + pi];
  }
};

// One deterministic solve per (tax, price) cell. The model is built once;
// cells differ only in the objective coefficients of Q_EMI, Q_CC, and Q_CS,
// sent as per-job objective overrides. Failed cells keep their status and
// message without aborting the sweep.
SweepResult run_sweep(const PlanningInstance& inst, milp::Solver& solver,
                      const std::vector<double>& tax_axis,
                      const std::vector<double>& price_axis,
                      const SweepOptions& opts = {});

} // namespace ccusplan::sweep
