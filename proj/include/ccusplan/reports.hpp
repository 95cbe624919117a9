#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccusplan/engine.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/sweep.hpp"

namespace ccusplan::reports {

using LabeledSolution = std::pair<std::string, const engine::PlanningSolution*>;

// Table layout: one row per cost group and carbon total, one column per case.
std::string breakdown_csv(const std::vector<LabeledSolution>& cases);

// Long format: hour, case, emission (net of capture), capture, storage,
// utilization. Stochastic cases report the probability-weighted profile,
// robust cases the worst vertex.
std::string carbon_profile_csv(const std::vector<LabeledSolution>& cases);

// Long format: tax, price, metric, value; one block of metrics per cell in
// grid order.
std::string sweep_csv(const sweep::SweepResult& result);

// Full machine-readable solution, including everything verify needs to
// rebuild the model: instance reference, scenario set, robust method.
std::string solution_to_json(const PlanningInstance& inst, const std::string& instance_ref,
                             const engine::PlanningSolution& sol);

// The subset of a solution file the verifier needs.
struct SolutionSummary {
  std::string instance_ref;
  engine::PlanMode mode = engine::PlanMode::Deterministic;
  double objective = 0.0;
  std::vector<form::ScenarioDef> scenarios;
  std::string robust_method;
  std::optional<double> day_weight;
  double gap_tol = 1e-6;
};

SolutionSummary read_solution_summary(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

// breakdown.csv + carbon_profile.csv + <label>.json per case under out_dir.
void emit_reports(const std::string& out_dir, const PlanningInstance& inst,
                  const std::string& instance_ref,
                  const std::vector<LabeledSolution>& cases);

} // namespace ccusplan::reports
