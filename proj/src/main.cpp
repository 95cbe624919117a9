#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccusplan/engine.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/numfmt.hpp"
#include "ccusplan/oracle.hpp"
#include "ccusplan/reports.hpp"
#include "ccusplan/solver.hpp"
#include "ccusplan/sweep.hpp"

namespace {

using namespace ccusplan;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitDisagreement = 3;

engine::PlanMode parse_mode(const std::string& s) {
  if (s == "no-ccus") return engine::PlanMode::NoCcus;
  if (s == "det" || s == "deterministic") return engine::PlanMode::Deterministic;
  if (s == "stoch" || s == "stochastic") return engine::PlanMode::Stochastic;
  if (s == "robust") return engine::PlanMode::Robust;
  throw ValidationError("unknown mode: " + s + " (use no-ccus|det|stoch|robust)");
}

// "LO:HI,LO:HI" -> box over tax then price
engine::Box parse_box(const std::string& s) {
  engine::Box b;
  if (std::sscanf(s.c_str(), "%lf:%lf,%lf:%lf", &b.tax_lo, &b.tax_hi, &b.price_lo,
                  &b.price_hi) != 4)
    throw ValidationError("box must look like LO:HI,LO:HI, got: " + s);
  return b;
}

// "NxM" -> tax count, price count
std::pair<int, int> parse_grid(const std::string& s) {
  int n = 0, m = 0;
  if (std::sscanf(s.c_str(), "%dx%d", &n, &m) != 2 || n < 1 || m < 1)
    throw ValidationError("grid must look like NxM, got: " + s);
  return {n, m};
}

// "LO:HI:STEP" or "v1,v2,..." -> strictly increasing axis
std::vector<double> parse_axis(const std::string& s) {
  std::vector<double> out;
  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) == 3) {
    if (step <= 0.0) throw ValidationError("axis step must be positive: " + s);
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
  std::string rest = s;
  while (!rest.empty()) {
    std::size_t comma = rest.find(',');
    std::string tok = rest.substr(0, comma);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ValidationError("axis must be LO:HI:STEP or a comma list, got: " + s);
    }
    if (comma == std::string::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.empty()) throw ValidationError("axis is empty: " + s);
  return out;
}

struct SolveArgs {
  std::string instance;
  std::string mode = "det";
  std::optional<double> tax;
  std::optional<double> price;
  std::string grid = "5x5";
  std::string box = "1:120,1:80";
  std::string robust_method = "corner";
  std::optional<double> day_weight;
  double gap = 1e-6;
  double time_limit = 0.0;
  std::string out_dir = "out";
};

int run_solve(const SolveArgs& a, bool export_lp_only, const std::string& lp_path) {
  PlanningInstance inst = resolve_instance(a.instance);
  engine::PlanMode mode = parse_mode(a.mode);
  double tax = a.tax.value_or(inst.economics.carbon_tax);
  double price = a.price.value_or(inst.economics.carbon_price);

  engine::EngineOptions eopts;
  eopts.gap_tol = a.gap;
  eopts.time_limit_s = a.time_limit;
  eopts.robust_method = a.robust_method;
  eopts.day_weight = a.day_weight;

  auto solver = milp::make_solver();
  engine::PlanningEngine eng(*solver, eopts);

  if (export_lp_only) {
    std::vector<form::ScenarioDef> scens;
    switch (mode) {
      case engine::PlanMode::NoCcus:
        scens.push_back({tax, 0.0, 1.0, ""});
        break;
      case engine::PlanMode::Deterministic:
        scens.push_back({tax, price, 1.0, ""});
        break;
      case engine::PlanMode::Stochastic: {
        auto [nt, np] = parse_grid(a.grid);
        auto spec = engine::UncertaintySpec::grid_over(parse_box(a.box), nt, np);
        const auto& g = *spec.grid;
        std::size_t cells = g.tax_points.size() * g.price_points.size();
        std::size_t k = 0;
        for (double tv : g.tax_points)
          for (double pv : g.price_points)
            scens.push_back({tv, pv, 1.0 / static_cast<double>(cells),
                             "w" + std::to_string(++k)});
        break;
      }
      case engine::PlanMode::Robust: {
        engine::Box b = parse_box(a.box);
        if (a.robust_method == "corner") {
          scens.push_back({b.tax_hi, b.price_lo, 1.0, ""});
        } else {
          scens = {{b.tax_lo, b.price_lo, 1.0, "w1"},
                   {b.tax_lo, b.price_hi, 1.0, "w2"},
                   {b.tax_hi, b.price_lo, 1.0, "w3"},
                   {b.tax_hi, b.price_hi, 1.0, "w4"}};
        }
        break;
      }
    }
    form::BuiltModel built = eng.build_for(inst, mode, scens);
    reports::write_text_file(lp_path, built.model.export_lp());
    std::printf("wrote %s (%zu variables, %zu constraints)\n", lp_path.c_str(),
                built.model.num_variables(), built.model.num_constraints());
    return kExitOk;
  }

  engine::PlanningSolution sol;
  switch (mode) {
    case engine::PlanMode::NoCcus:
      sol = eng.solve_no_ccus(inst, tax);
      break;
    case engine::PlanMode::Deterministic:
      sol = eng.solve_deterministic(inst, tax, price);
      break;
    case engine::PlanMode::Stochastic: {
      auto [nt, np] = parse_grid(a.grid);
      sol = eng.solve_stochastic(inst,
                                 engine::UncertaintySpec::grid_over(parse_box(a.box), nt, np));
      break;
    }
    case engine::PlanMode::Robust: {
      engine::Box b = parse_box(a.box);
      sol = eng.solve_robust(
          inst, engine::UncertaintySpec::make_box(b.tax_lo, b.tax_hi, b.price_lo, b.price_hi));
      break;
    }
  }

  PlanningInstance effective = inst;
  if (a.day_weight) {
    effective.economics.day_weight = *a.day_weight;
    validate_instance(effective);
  }
  std::string label = engine::to_string(mode);
  reports::emit_reports(a.out_dir, effective, a.instance, {{label, &sol}});

  std::printf("instance: %s\nmode: %s\nstatus: %s\n", inst.name.c_str(), label.c_str(),
              milp::to_string(sol.status).c_str());
  if (sol.optimal()) {
    std::printf("objective: %s\n", format_number(sol.objective).c_str());
    std::string mods;
    for (std::size_t i = 0; i < sol.first_stage.ptg_modules.size(); ++i)
      mods += (i ? "," : "") + std::to_string(sol.first_stage.ptg_modules[i]);
    std::string sits;
    for (std::size_t i = 0; i < sol.first_stage.siting.size(); ++i)
      sits += (i ? "," : "") + std::to_string(sol.first_stage.siting[i]);
    std::printf("ptg_modules: [%s]\nsiting: [%s]\n", mods.c_str(), sits.c_str());
    if (mode == engine::PlanMode::Robust)
      std::printf("worst corner: (%s, %s)\n", format_number(sol.worst_tax).c_str(),
                  format_number(sol.worst_price).c_str());
    std::printf("reports: %s\n", a.out_dir.c_str());
    return kExitOk;
  }
  std::printf("message: %s\n", sol.message.c_str());
  std::printf("reports: %s\n", a.out_dir.c_str());
  return kExitSolver;
}

int run_sweep_cmd(const std::string& instance, const std::string& tax_axis,
                  const std::string& price_axis, int jobs, double gap, double time_limit,
                  const std::string& out_dir) {
  PlanningInstance inst = resolve_instance(instance);
  auto solver = milp::make_solver();
  sweep::SweepOptions sopts;
  sopts.gap_tol = gap;
  sopts.time_limit_s = time_limit;
  sopts.jobs = jobs;
  sweep::SweepResult res =
      sweep::run_sweep(inst, *solver, parse_axis(tax_axis), parse_axis(price_axis), sopts);
  reports::write_text_file((std::filesystem::path(out_dir) / "sweep.csv").string(),
                           reports::sweep_csv(res));
  std::size_t ok = 0, failed = 0;
  for (const auto& c : res.cells) {
    if (c.status == milp::SolveStatus::Optimal) ++ok;
    else ++failed;
  }
  std::printf("sweep: %zu cells, %zu optimal, %zu failed\n", res.cells.size(), ok, failed);
  std::printf("reports: %s\n", out_dir.c_str());
  if (ok == 0) return kExitSolver;
  return kExitOk;
}

int run_verify(const std::string& solution_path, std::int64_t budget, double gap) {
  reports::SolutionSummary sum = reports::read_solution_summary(solution_path);
  PlanningInstance inst = resolve_instance(sum.instance_ref);

  engine::EngineOptions eopts;
  eopts.gap_tol = gap > 0.0 ? gap : sum.gap_tol;
  if (!sum.robust_method.empty()) eopts.robust_method = sum.robust_method;
  if (sum.day_weight && *sum.day_weight != inst.economics.day_weight)
    eopts.day_weight = sum.day_weight;

  auto solver = milp::make_solver();
  engine::PlanningEngine eng(*solver, eopts);
  form::BuiltModel built = eng.build_for(inst, sum.mode, sum.scenarios);

  oracle::OracleOptions oopts;
  oopts.budget = budget;
  oopts.gap_tol = eopts.gap_tol;
  oracle::OracleReport report = oracle::verify_solution(built.model, *solver, sum.objective, oopts);

  if (!report.feasible) {
    std::printf("oracle: no feasible assignment (%lld enumerated)\n",
                static_cast<long long>(report.enumerated));
    return kExitSolver;
  }
  std::printf("oracle optimum: %s\n", format_number(report.best_objective).c_str());
  std::printf("solution objective: %s\n", format_number(sum.objective).c_str());
  std::printf("abs delta: %s\nrel delta: %s\n", format_number(report.abs_delta).c_str(),
              format_number(report.rel_delta).c_str());
  std::printf("assignments: %lld enumerated, %lld feasible\n",
              static_cast<long long>(report.enumerated),
              static_cast<long long>(report.feasible_count));
  std::printf("agreement: %s\n", report.agreement ? "true" : "false");
  return report.agreement ? kExitOk : kExitDisagreement;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning tool for electricity-gas systems with CCUS and PtG retrofits"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Solve one planning problem");
  solve->add_option("--instance", sa.instance, "builtin name or JSON path")->required();
  solve->add_option("--mode", sa.mode, "no-ccus|det|stoch|robust");
  solve->add_option("--tax", sa.tax, "carbon tax $/ton (default: instance economics)");
  solve->add_option("--price", sa.price, "carbon price $/ton (default: instance economics)");
  solve->add_option("--grid", sa.grid, "stochastic scenario grid, NxM over the box");
  solve->add_option("--box", sa.box, "tax and price ranges LO:HI,LO:HI");
  solve->add_option("--robust-method", sa.robust_method, "corner|vertex_epigraph");
  solve->add_option("--day-weight", sa.day_weight, "override economics day_weight");
  solve->add_option("--gap", sa.gap, "MIP relative gap tolerance");
  solve->add_option("--time-limit", sa.time_limit, "seconds per solve, 0 = none");
  solve->add_option("--out", sa.out_dir, "report directory");

  std::string sw_instance, sw_tax = "0:120:10", sw_price = "0:80:10", sw_out = "out";
  int sw_jobs = 1;
  double sw_gap = 1e-4, sw_time = 0.0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Deterministic tax x price sweep");
  sweep_cmd->add_option("--instance", sw_instance, "builtin name or JSON path")->required();
  sweep_cmd->add_option("--tax-axis", sw_tax, "LO:HI:STEP or comma list");
  sweep_cmd->add_option("--price-axis", sw_price, "LO:HI:STEP or comma list");
  sweep_cmd->add_option("--jobs", sw_jobs, "parallel workers");
  sweep_cmd->add_option("--gap", sw_gap, "MIP relative gap tolerance");
  sweep_cmd->add_option("--time-limit", sw_time, "seconds per cell, 0 = none");
  sweep_cmd->add_option("--out", sw_out, "report directory");

  std::string vf_path;
  std::int64_t vf_budget = 4096;
  double vf_gap = 0.0;
  CLI::App* verify = app.add_subcommand("verify", "Check a solution file against the oracle");
  verify->add_option("solution", vf_path, "solution JSON written by solve")->required();
  verify->add_option("--budget", vf_budget, "max integer assignments");
  verify->add_option("--gap", vf_gap, "LP gap for oracle (default: from file)");

  SolveArgs ea;
  std::string lp_out = "model.lp";
  CLI::App* exp = app.add_subcommand("export-lp", "Write the model as LP format");
  exp->add_option("--instance", ea.instance, "builtin name or JSON path")->required();
  exp->add_option("--mode", ea.mode, "no-ccus|det|stoch|robust");
  exp->add_option("--tax", ea.tax, "carbon tax $/ton");
  exp->add_option("--price", ea.price, "carbon price $/ton");
  exp->add_option("--grid", ea.grid, "stochastic scenario grid, NxM over the box");
  exp->add_option("--box", ea.box, "tax and price ranges LO:HI,LO:HI");
  exp->add_option("--robust-method", ea.robust_method, "corner|vertex_epigraph");
  exp->add_option("--out", lp_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(sa, false, "");
    if (sweep_cmd->parsed())
      return run_sweep_cmd(sw_instance, sw_tax, sw_price, sw_jobs, sw_gap, sw_time, sw_out);
    if (verify->parsed()) return run_verify(vf_path, vf_budget, vf_gap);
    if (exp->parsed()) return run_solve(ea, true, lp_out);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const milp::ModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitUsage;
}
