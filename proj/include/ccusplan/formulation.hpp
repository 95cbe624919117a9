#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ccusplan/instance.hpp"
#include "ccusplan/milp.hpp"

namespace ccusplan::form {

using milp::Model;
using milp::Term;
using milp::VarHandle;

// Breakpoints for one pipeline's incremental PWL of g(f) = f*|f|.
struct Pwl {
  std::vector<double> points; // F_1 < ... < F_last
  std::vector<double> images; // g(F_k)
  int segments() const { return static_cast<int>(points.size()) - 1; }
  double max_width() const;
  // Curvature bound on |linearized - exact| anywhere in range, |g''| <= 2.
  double error_bound() const { double w = max_width(); return w * w / 4.0; }
};

Pwl compute_breakpoints(const GasPipeline& pipe, int seg);
std::vector<Pwl> compute_breakpoints(const PlanningInstance& inst);

struct ScenarioDef {
  double tax = 0.0;
  double price = 0.0;
  double probability = 1.0;
  std::string label; // empty for single-scenario models, else "w1", "w2", ...
};

enum class ObjectiveMode { WeightedSum, Epigraph };

struct BuildOptions {
  bool coupling = true; // CCPP/PtG equations (21)-(27); off for the no-CCUS mode
  bool siting = true;   // siting logic (28)-(32); requires coupling
  ObjectiveMode objective = ObjectiveMode::WeightedSum;
  std::unordered_map<std::string, int> y_cap_override; // plant id -> module cap
};

// Handles for one scenario's operation variables, [entity][t] (t zero-based
// for hour t+1). Coupling vectors are empty when the block is disabled.
struct OperationVars {
  std::vector<std::vector<VarHandle>> src_out;   // P_i
  std::vector<std::vector<VarHandle>> pipe_flow; // f_gas
  std::vector<std::vector<VarHandle>> node_isq;  // I = pi^2
  std::vector<std::vector<std::vector<VarHandle>>> seg_fill; // delta [pipe][t][k]
  std::vector<std::vector<std::vector<VarHandle>>> seg_gate; // phi   [pipe][t][k-1]
  std::vector<std::vector<VarHandle>> bus_ang;   // theta
  std::vector<std::vector<VarHandle>> line_flow; // f_ele
  std::vector<std::vector<VarHandle>> gen_out;   // P_j
  std::vector<std::vector<VarHandle>> gen_on;    // u
  std::vector<std::vector<VarHandle>> gen_start; // v
  std::vector<std::vector<VarHandle>> gen_stop;  // w
  std::vector<std::vector<VarHandle>> q_emi;     // Q_EMI, all generators
  // by ccpp position (InstanceIndex::ccpp order)
  std::vector<std::vector<VarHandle>> grid_out;  // P_CCPP
  std::vector<std::vector<VarHandle>> cc_power;  // P_CC
  std::vector<std::vector<VarHandle>> ptg_power; // P_PtG
  std::vector<std::vector<VarHandle>> q_cc;
  std::vector<std::vector<VarHandle>> q_cs;
  std::vector<std::vector<VarHandle>> q_cu;
  std::vector<std::vector<VarHandle>> ch4_total; // V_CH4 per plant
  std::vector<std::vector<VarHandle>> ch4_site;  // V_CH4 per siting candidate
};

struct VariableMap {
  std::vector<VarHandle> y;  // PtG modules per ccpp plant
  std::vector<VarHandle> s;  // per siting candidate
  std::vector<int> y_cap;    // per ccpp plant
  std::vector<OperationVars> scen;
  std::vector<Pwl> pwl;      // per pipeline
  VarHandle epigraph;        // valid only in Epigraph models
};

// Operation cost groups for one scenario, already scaled by day_weight.
// Penalty and revenue carry the scenario's (tax, price).
struct OpCostTerms {
  std::vector<Term> ope_gs;
  std::vector<Term> ope_gen;
  std::vector<Term> ope_ptg;
  std::vector<Term> capture;
  std::vector<Term> storage;
  std::vector<Term> penalty;
  std::vector<Term> revenue; // negative coefficients; subtracts from cost
  std::vector<Term> all() const;
};

struct InvestTerms {
  std::vector<Term> invest_ptg;    // kappa * c_ptg * module_size * y
  std::vector<Term> invest_siting; // kappa * c_siting * s
  std::vector<Term> all() const;
};

double evaluate_terms(const std::vector<Term>& terms, const std::vector<double>& values);

// Individual builders, one per equation block of the formulation. All take a
// scenario's OperationVars and emit rows named "<row>[ids,t..]<@label>".
void declare_first_stage(Model& m, const PlanningInstance& inst, const BuildOptions& opts,
                         VariableMap& map);
OperationVars declare_operation_vars(Model& m, const PlanningInstance& inst,
                                     const std::vector<Pwl>& pwl, const BuildOptions& opts,
                                     const std::string& label);
void build_gas_block(Model& m, const PlanningInstance& inst, const std::vector<Pwl>& pwl,
                     const OperationVars& ov, bool with_injection, const std::string& label);
void build_electric_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          bool coupling, const std::string& label);
void build_emission_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          const std::string& label);
void build_coupling_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          const std::vector<VarHandle>& y, const std::string& label);
void build_siting_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                        const std::vector<VarHandle>& s, const std::vector<int>& y_cap,
                        const std::string& label);
void build_first_stage_links(Model& m, const PlanningInstance& inst,
                             const std::vector<VarHandle>& y,
                             const std::vector<VarHandle>& s);
OpCostTerms build_cost_terms(const PlanningInstance& inst, const OperationVars& ov,
                             double tax, double price);
InvestTerms build_invest_terms(const PlanningInstance& inst, const VariableMap& map);

int default_y_cap(const Generator& gen, const PtgTechnology& tech);

// Assembles the full model: first stage (if coupling), one operation block per
// scenario, objective invest + sum prob*op (WeightedSum) or invest + z with
// per-scenario epigraph rows (Epigraph).
struct BuiltModel {
  Model model;
  VariableMap map;
  BuildOptions options;
  std::vector<ScenarioDef> scenarios;
  InvestTerms invest;
  std::vector<OpCostTerms> op; // aligned with scenarios
};

BuiltModel build_planning_model(const PlanningInstance& inst,
                                const std::vector<ScenarioDef>& scenarios,
                                const BuildOptions& opts);

} // namespace ccusplan::form
