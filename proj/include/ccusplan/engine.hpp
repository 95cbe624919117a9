#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccusplan/formulation.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/solver.hpp"

namespace ccusplan::engine {

enum class PlanMode { NoCcus, Deterministic, Stochastic, Robust };
std::string to_string(PlanMode mode);

struct ScenarioGrid {
  std::vector<double> tax_points;
  std::vector<double> price_points;
  std::vector<double> probabilities; // row-major, tax outer; empty means equal
};

struct Box {
  double tax_lo = 0.0, tax_hi = 0.0;
  double price_lo = 0.0, price_hi = 0.0;
};

struct UncertaintySpec {
  std::optional<ScenarioGrid> grid;
  std::optional<Box> box;
  static UncertaintySpec make_grid(std::vector<double> tax, std::vector<double> price,
                                   std::vector<double> probabilities = {});
  // Evenly spaced points including both endpoints.
  static UncertaintySpec grid_over(const Box& b, int tax_count, int price_count);
  static UncertaintySpec make_box(double tax_lo, double tax_hi, double price_lo,
                                  double price_hi);
  void validate() const;
};

struct CostBreakdown {
  double invest_ccus = 0.0;
  double invest_siting = 0.0;
  double ope_gs = 0.0;
  double ope_gen = 0.0;
  double ope_ptg = 0.0;
  double capture = 0.0;
  double storage = 0.0;
  double penalty = 0.0;
  double revenue = 0.0; // positive magnitude, subtracts from total
  double total = 0.0;
  double recompute_total() const {
    return invest_ccus + invest_siting + ope_gs + ope_gen + ope_ptg + capture + storage +
           penalty - revenue;
  }
};

struct CarbonVolumes {
  double emission = 0.0; // net of capture, the taxed quantity
  double capture = 0.0;
  double storage = 0.0;
  double utilization = 0.0;
};

// One scenario's hourly operation, [entity][t]. Commitment values are the raw
// solver values; consumers round them when they need exact integers.
struct ScenarioSchedule {
  std::string label;
  double tax = 0.0;
  double price = 0.0;
  double probability = 1.0;
  std::vector<std::vector<double>> source_out;
  std::vector<std::vector<double>> pipe_flow;
  std::vector<std::vector<double>> node_pressure_sq;
  std::vector<std::vector<double>> bus_angle;
  std::vector<std::vector<double>> line_flow;
  std::vector<std::vector<double>> gen_out;
  std::vector<std::vector<double>> gen_on;
  std::vector<std::vector<double>> gen_start;
  std::vector<std::vector<double>> gen_stop;
  std::vector<std::vector<double>> emitted; // per generator
  // per ccpp plant
  std::vector<std::vector<double>> grid_out;
  std::vector<std::vector<double>> capture_power;
  std::vector<std::vector<double>> ptg_power;
  std::vector<std::vector<double>> captured;
  std::vector<std::vector<double>> stored;
  std::vector<std::vector<double>> utilized;
  std::vector<std::vector<double>> methane;
  // per siting candidate
  std::vector<std::vector<double>> methane_injection;
  CostBreakdown op_cost; // operation groups only, unweighted
  CarbonVolumes carbon;
};

struct FirstStage {
  std::vector<int> ptg_modules; // y, by ccpp plant in instance order
  std::vector<int> siting;      // s, by candidate in instance order
};

struct PlanningSolution {
  PlanMode mode = PlanMode::Deterministic;
  std::string instance_name;
  FirstStage first_stage;
  std::vector<ScenarioSchedule> scenarios;
  CostBreakdown breakdown; // deterministic: the scenario; stochastic: expected;
                           // robust: worst vertex
  CarbonVolumes carbon;
  milp::SolveStatus status = milp::SolveStatus::Error;
  double objective = 0.0; // solver-reported
  double gap = 0.0;
  double wall_time_s = 0.0;
  std::string solver_name;
  std::string message;
  double worst_tax = 0.0; // robust only
  double worst_price = 0.0;
  std::map<std::string, std::string> metadata;
  bool optimal() const { return status == milp::SolveStatus::Optimal; }
};

struct RecourseEval {
  bool feasible = false;
  CostBreakdown breakdown;
  milp::SolveStatus status = milp::SolveStatus::Error;
  std::string message;
};

struct EngineOptions {
  double gap_tol = 1e-6;
  double time_limit_s = 0.0;
  int threads = 0;
  std::string robust_method = "corner"; // or "vertex_epigraph"
  std::optional<double> day_weight;     // overrides instance economics
  std::unordered_map<std::string, int> y_cap_override;
};

class PlanningEngine {
 public:
  explicit PlanningEngine(milp::Solver& solver, EngineOptions opts = {});

  PlanningSolution solve_no_ccus(const PlanningInstance& inst, double tax) const;
  PlanningSolution solve_deterministic(const PlanningInstance& inst, double tax,
                                       double price) const;
  PlanningSolution solve_stochastic(const PlanningInstance& inst,
                                    const UncertaintySpec& spec) const;
  PlanningSolution solve_robust(const PlanningInstance& inst,
                                const UncertaintySpec& spec) const;
  RecourseEval evaluate_fixed_first_stage(const PlanningInstance& inst, const FirstStage& fs,
                                          double tax, double price) const;

  // The model a given call would solve; used by the oracle and LP export.
  form::BuiltModel build_for(const PlanningInstance& inst, PlanMode mode,
                             const std::vector<form::ScenarioDef>& scenarios) const;

  const EngineOptions& options() const { return opts_; }

 private:
  milp::Solver& solver_;
  EngineOptions opts_;
};

// Fills schedules, per-scenario cost groups, and recomputed carbon volumes
// from a solved model's values.
PlanningSolution extract_solution(const PlanningInstance& inst, const form::BuiltModel& built,
                                  const milp::SolveResult& result, PlanMode mode);

} // namespace ccusplan::engine
