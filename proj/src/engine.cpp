#include "ccusplan/engine.hpp"

#include <algorithm>
#include <cmath>

#include "ccusplan/numfmt.hpp"

namespace ccusplan::engine {

namespace {

using form::BuiltModel;
using form::ScenarioDef;
using milp::SolveResult;
using milp::SolveStatus;

std::vector<std::vector<double>> grab(const std::vector<std::vector<form::VarHandle>>& handles,
                                      const std::vector<double>& values) {
  std::vector<std::vector<double>> out(handles.size());
  for (std::size_t i = 0; i < handles.size(); ++i) {
    out[i].reserve(handles[i].size());
    for (form::VarHandle h : handles[i]) out[i].push_back(values[h.index]);
  }
  return out;
}

CostBreakdown op_breakdown(const form::OpCostTerms& op, const std::vector<double>& values) {
  CostBreakdown b;
  b.ope_gs = form::evaluate_terms(op.ope_gs, values);
  b.ope_gen = form::evaluate_terms(op.ope_gen, values);
  b.ope_ptg = form::evaluate_terms(op.ope_ptg, values);
  b.capture = form::evaluate_terms(op.capture, values);
  b.storage = form::evaluate_terms(op.storage, values);
  b.penalty = form::evaluate_terms(op.penalty, values);
  b.revenue = -form::evaluate_terms(op.revenue, values);
  b.total = b.recompute_total();
  return b;
}

CarbonVolumes carbon_of(const ScenarioSchedule& s) {
  CarbonVolumes c;
  for (const auto& row : s.emitted)
    for (double v : row) c.emission += v;
  for (const auto& row : s.captured)
    for (double v : row) c.capture += v;
  for (const auto& row : s.stored)
    for (double v : row) c.storage += v;
  for (const auto& row : s.utilized)
    for (double v : row) c.utilization += v;
  c.emission -= c.capture; // taxed quantity is what escapes to the air
  return c;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_number(v[i]);
  }
  return out;
}

double op_total(const CostBreakdown& b) {
  return b.ope_gs + b.ope_gen + b.ope_ptg + b.capture + b.storage + b.penalty - b.revenue;
}

} // namespace

std::string to_string(PlanMode mode) {
  switch (mode) {
    case PlanMode::NoCcus: return "no-ccus";
    case PlanMode::Deterministic: return "deterministic";
    case PlanMode::Stochastic: return "stochastic";
    case PlanMode::Robust: return "robust";
  }
  return "unknown";
}

UncertaintySpec UncertaintySpec::make_grid(std::vector<double> tax, std::vector<double> price,
                                           std::vector<double> probabilities) {
  UncertaintySpec s;
  s.grid = ScenarioGrid{std::move(tax), std::move(price), std::move(probabilities)};
  s.validate();
  return s;
}

UncertaintySpec UncertaintySpec::grid_over(const Box& b, int tax_count, int price_count) {
  if (tax_count < 1 || price_count < 1)
    throw ValidationError("scenario grid needs at least one point per axis");
  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> out;
    if (n == 1) {
      out.push_back((lo + hi) / 2.0);
      return out;
    }
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
  };
  return make_grid(linspace(b.tax_lo, b.tax_hi, tax_count),
                   linspace(b.price_lo, b.price_hi, price_count));
}

UncertaintySpec UncertaintySpec::make_box(double tax_lo, double tax_hi, double price_lo,
                                          double price_hi) {
  UncertaintySpec s;
  s.box = Box{tax_lo, tax_hi, price_lo, price_hi};
  s.validate();
  return s;
}

void UncertaintySpec::validate() const {
  if (grid.has_value() == box.has_value())
    throw ValidationError("uncertainty spec needs exactly one of scenario grid or box");
  if (grid) {
    if (grid->tax_points.empty() || grid->price_points.empty())
      throw ValidationError("scenario grid axes must be nonempty");
    std::size_t cells = grid->tax_points.size() * grid->price_points.size();
    if (!grid->probabilities.empty()) {
      if (grid->probabilities.size() != cells)
        throw ValidationError("probabilities length does not match grid cell count");
      double sum = 0.0;
      for (double p : grid->probabilities) {
        if (p < 0.0) throw ValidationError("probabilities must be nonnegative");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-9)
        throw ValidationError("probabilities must sum to 1");
    }
    for (double v : grid->tax_points)
      if (v < 0.0) throw ValidationError("carbon tax points must be nonnegative");
    for (double v : grid->price_points)
      if (v < 0.0) throw ValidationError("carbon price points must be nonnegative");
  }
  if (box) {
    if (box->tax_lo > box->tax_hi || box->price_lo > box->price_hi)
      throw ValidationError("box ranges need lo <= hi");
    if (box->tax_lo < 0.0 || box->price_lo < 0.0)
      throw ValidationError("box ranges must be nonnegative");
  }
}

PlanningEngine::PlanningEngine(milp::Solver& solver, EngineOptions opts)
    : solver_(solver), opts_(std::move(opts)) {}

namespace {
PlanningInstance with_overrides(const PlanningInstance& inst, const EngineOptions& opts) {
  if (!opts.day_weight) return inst;
  PlanningInstance copy = inst;
  copy.economics.day_weight = *opts.day_weight;
  validate_instance(copy);
  return copy;
}
} // namespace

form::BuiltModel PlanningEngine::build_for(const PlanningInstance& inst, PlanMode mode,
                                           const std::vector<ScenarioDef>& scenarios) const {
  form::BuildOptions bopts;
  bopts.y_cap_override = opts_.y_cap_override;
  if (mode == PlanMode::NoCcus) {
    bopts.coupling = false;
    bopts.siting = false;
  }
  if (mode == PlanMode::Robust && opts_.robust_method == "vertex_epigraph" &&
      scenarios.size() > 1)
    bopts.objective = form::ObjectiveMode::Epigraph;
  return form::build_planning_model(with_overrides(inst, opts_), scenarios, bopts);
}

PlanningSolution extract_solution(const PlanningInstance& inst, const BuiltModel& built,
                                  const SolveResult& result, PlanMode mode) {
  PlanningSolution sol;
  sol.mode = mode;
  sol.instance_name = inst.name;
  sol.status = result.status;
  sol.objective = result.objective;
  sol.gap = result.gap;
  sol.wall_time_s = result.wall_time_s;
  sol.message = result.message;
  sol.metadata["mode"] = to_string(mode);
  if (!result.has_values()) return sol;

  const std::vector<double>& v = result.values;
  for (form::VarHandle h : built.map.y)
    sol.first_stage.ptg_modules.push_back(static_cast<int>(std::lround(v[h.index])));
  for (form::VarHandle h : built.map.s)
    sol.first_stage.siting.push_back(static_cast<int>(std::lround(v[h.index])));

  for (std::size_t k = 0; k < built.map.scen.size(); ++k) {
    const form::OperationVars& ov = built.map.scen[k];
    ScenarioSchedule s;
    s.label = built.scenarios[k].label;
    s.tax = built.scenarios[k].tax;
    s.price = built.scenarios[k].price;
    s.probability = built.scenarios[k].probability;
    s.source_out = grab(ov.src_out, v);
    s.pipe_flow = grab(ov.pipe_flow, v);
    s.node_pressure_sq = grab(ov.node_isq, v);
    s.bus_angle = grab(ov.bus_ang, v);
    s.line_flow = grab(ov.line_flow, v);
    s.gen_out = grab(ov.gen_out, v);
    s.gen_on = grab(ov.gen_on, v);
    s.gen_start = grab(ov.gen_start, v);
    s.gen_stop = grab(ov.gen_stop, v);
    s.emitted = grab(ov.q_emi, v);
    s.grid_out = grab(ov.grid_out, v);
    s.capture_power = grab(ov.cc_power, v);
    s.ptg_power = grab(ov.ptg_power, v);
    s.captured = grab(ov.q_cc, v);
    s.stored = grab(ov.q_cs, v);
    s.utilized = grab(ov.q_cu, v);
    s.methane = grab(ov.ch4_total, v);
    s.methane_injection = grab(ov.ch4_site, v);
    s.op_cost = op_breakdown(built.op[k], v);
    s.carbon = carbon_of(s);
    sol.scenarios.push_back(std::move(s));
  }

  double invest_ccus = form::evaluate_terms(built.invest.invest_ptg, v);
  double invest_siting = form::evaluate_terms(built.invest.invest_siting, v);

  if (built.options.objective == form::ObjectiveMode::Epigraph) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < sol.scenarios.size(); ++k)
      if (op_total(sol.scenarios[k].op_cost) > op_total(sol.scenarios[worst].op_cost) + 1e-12)
        worst = k;
    sol.breakdown = sol.scenarios[worst].op_cost;
    sol.carbon = sol.scenarios[worst].carbon;
    sol.worst_tax = sol.scenarios[worst].tax;
    sol.worst_price = sol.scenarios[worst].price;
  } else {
    CostBreakdown b;
    CarbonVolumes c;
    for (const ScenarioSchedule& s : sol.scenarios) {
      double p = s.probability;
      b.ope_gs += p * s.op_cost.ope_gs;
      b.ope_gen += p * s.op_cost.ope_gen;
      b.ope_ptg += p * s.op_cost.ope_ptg;
      b.capture += p * s.op_cost.capture;
      b.storage += p * s.op_cost.storage;
      b.penalty += p * s.op_cost.penalty;
      b.revenue += p * s.op_cost.revenue;
      c.emission += p * s.carbon.emission;
      c.capture += p * s.carbon.capture;
      c.storage += p * s.carbon.storage;
      c.utilization += p * s.carbon.utilization;
    }
    sol.breakdown = b;
    sol.carbon = c;
    if (mode == PlanMode::Robust && sol.scenarios.size() == 1) {
      sol.worst_tax = sol.scenarios[0].tax;
      sol.worst_price = sol.scenarios[0].price;
    }
  }
  sol.breakdown.invest_ccus = invest_ccus;
  sol.breakdown.invest_siting = invest_siting;
  sol.breakdown.total = sol.breakdown.recompute_total();
  return sol;
}

namespace {

PlanningSolution run_model(milp::Solver& solver, const EngineOptions& opts,
                           const PlanningInstance& inst, const BuiltModel& built,
                           PlanMode mode) {
  milp::SolveOptions so;
  so.gap_tol = opts.gap_tol;
  so.time_limit_s = opts.time_limit_s;
  so.threads = opts.threads;
  SolveResult res = solver.solve(built.model, so);
  PlanningSolution sol = extract_solution(inst, built, res, mode);
  sol.solver_name = solver.name();
  sol.metadata["gap_tol"] = format_number(opts.gap_tol);
  return sol;
}

} // namespace

PlanningSolution PlanningEngine::solve_no_ccus(const PlanningInstance& inst,
                                               double tax) const {
  std::vector<ScenarioDef> scens{{tax, 0.0, 1.0, ""}};
  BuiltModel built = build_for(inst, PlanMode::NoCcus, scens);
  PlanningSolution sol = run_model(solver_, opts_, inst, built, PlanMode::NoCcus);
  sol.metadata["tax"] = format_number(tax);
  return sol;
}

PlanningSolution PlanningEngine::solve_deterministic(const PlanningInstance& inst, double tax,
                                                     double price) const {
  if (!inst.ptg_technology || inst.siting_candidates.empty())
    throw ValidationError(
        "deterministic planning needs ptg_technology and at least one siting candidate");
  std::vector<ScenarioDef> scens{{tax, price, 1.0, ""}};
  BuiltModel built = build_for(inst, PlanMode::Deterministic, scens);
  PlanningSolution sol = run_model(solver_, opts_, inst, built, PlanMode::Deterministic);
  sol.metadata["tax"] = format_number(tax);
  sol.metadata["price"] = format_number(price);
  return sol;
}

PlanningSolution PlanningEngine::solve_stochastic(const PlanningInstance& inst,
                                                  const UncertaintySpec& spec) const {
  if (!spec.grid) throw ValidationError("stochastic planning needs a scenario grid");
  spec.validate();
  if (!inst.ptg_technology || inst.siting_candidates.empty())
    throw ValidationError(
        "stochastic planning needs ptg_technology and at least one siting candidate");
  const ScenarioGrid& g = *spec.grid;
  std::size_t cells = g.tax_points.size() * g.price_points.size();
  std::vector<ScenarioDef> scens;
  scens.reserve(cells);
  std::size_t k = 0;
  for (double tax : g.tax_points)
    for (double price : g.price_points) {
      double p = g.probabilities.empty() ? 1.0 / static_cast<double>(cells)
                                         : g.probabilities[k];
      scens.push_back({tax, price, p, "w" + std::to_string(k + 1)});
      ++k;
    }
  BuiltModel built = build_for(inst, PlanMode::Stochastic, scens);
  PlanningSolution sol = run_model(solver_, opts_, inst, built, PlanMode::Stochastic);
  sol.metadata["grid_tax"] = join_numbers(g.tax_points);
  sol.metadata["grid_price"] = join_numbers(g.price_points);
  sol.metadata["grid_weights"] =
      g.probabilities.empty() ? "equal" : join_numbers(g.probabilities);
  return sol;
}

PlanningSolution PlanningEngine::solve_robust(const PlanningInstance& inst,
                                              const UncertaintySpec& spec) const {
  if (!spec.box) throw ValidationError("robust planning needs a box");
  spec.validate();
  if (!inst.ptg_technology || inst.siting_candidates.empty())
    throw ValidationError(
        "robust planning needs ptg_technology and at least one siting candidate");
  const Box& b = *spec.box;
  PlanningSolution sol;
  if (opts_.robust_method == "corner") {
    // Recourse cost is nondecreasing in tax (coefficient Q_EMI - Q_CC >= 0 via
    // the capture cap) and nonincreasing in price (coefficient Q_CS >= 0), so
    // the inner max sits at this corner for every first stage.
    std::vector<ScenarioDef> scens{{b.tax_hi, b.price_lo, 1.0, ""}};
    BuiltModel built = build_for(inst, PlanMode::Robust, scens);
    sol = run_model(solver_, opts_, inst, built, PlanMode::Robust);
  } else if (opts_.robust_method == "vertex_epigraph") {
    std::vector<ScenarioDef> scens{{b.tax_lo, b.price_lo, 1.0, "w1"},
                                   {b.tax_lo, b.price_hi, 1.0, "w2"},
                                   {b.tax_hi, b.price_lo, 1.0, "w3"},
                                   {b.tax_hi, b.price_hi, 1.0, "w4"}};
    BuiltModel built = build_for(inst, PlanMode::Robust, scens);
    sol = run_model(solver_, opts_, inst, built, PlanMode::Robust);
  } else {
    throw ValidationError("unknown robust method: " + opts_.robust_method);
  }
  sol.metadata["method"] = opts_.robust_method;
  sol.metadata["box"] = format_number(b.tax_lo) + ":" + format_number(b.tax_hi) + "," +
                        format_number(b.price_lo) + ":" + format_number(b.price_hi);
  return sol;
}

RecourseEval PlanningEngine::evaluate_fixed_first_stage(const PlanningInstance& inst,
                                                        const FirstStage& fs, double tax,
                                                        double price) const {
  if (!inst.ptg_technology || inst.siting_candidates.empty())
    throw ValidationError(
        "first-stage evaluation needs ptg_technology and at least one siting candidate");
  InstanceIndex ix = make_index(inst);
  if (fs.ptg_modules.size() != ix.ccpp.size())
    throw ValidationError("first stage has wrong ptg_modules length");
  if (fs.siting.size() != inst.siting_candidates.size())
    throw ValidationError("first stage has wrong siting length");
  for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i) {
    if (fs.siting[i] != 0 && fs.siting[i] != 1)
      throw ValidationError("siting decisions must be 0 or 1");
    if (fs.siting[i] == 1) {
      int gi = ix.generator.at(inst.siting_candidates[i].plant);
      for (std::size_t c = 0; c < ix.ccpp.size(); ++c)
        if (ix.ccpp[c] == gi && fs.ptg_modules[c] < 1)
          throw ValidationError("siting at " + inst.siting_candidates[i].gas_node +
                                " requires PtG modules at plant " +
                                inst.siting_candidates[i].plant);
    }
  }

  std::vector<ScenarioDef> scens{{tax, price, 1.0, ""}};
  BuiltModel built = build_for(inst, PlanMode::Deterministic, scens);
  for (std::size_t c = 0; c < built.map.y.size(); ++c) {
    if (fs.ptg_modules[c] < 0 || fs.ptg_modules[c] > built.map.y_cap[c])
      throw ValidationError("ptg_modules outside [0, cap] for plant index " +
                            std::to_string(c));
  }

  milp::SolveJob job;
  for (std::size_t c = 0; c < built.map.y.size(); ++c) {
    double yv = fs.ptg_modules[c];
    job.fixes.push_back({built.map.y[c], yv, yv});
  }
  for (std::size_t i = 0; i < built.map.s.size(); ++i) {
    double sv = fs.siting[i];
    job.fixes.push_back({built.map.s[i], sv, sv});
  }
  milp::SolveOptions so;
  so.gap_tol = opts_.gap_tol;
  so.time_limit_s = opts_.time_limit_s;
  so.threads = opts_.threads;
  SolveResult res = solver_.solve_jobs(built.model, {job}, so).at(0);

  RecourseEval eval;
  eval.status = res.status;
  eval.message = res.message;
  eval.feasible = res.status == SolveStatus::Optimal;
  if (eval.feasible) {
    PlanningSolution sol =
        extract_solution(with_overrides(inst, opts_), built, res, PlanMode::Deterministic);
    eval.breakdown = sol.breakdown;
  }
  return eval;
}

} // namespace ccusplan::engine
