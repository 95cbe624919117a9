// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each check carries its stated tolerance and runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ccusplan/engine.hpp"
#include "ccusplan/formulation.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/oracle.hpp"
#include "ccusplan/solver.hpp"
#include "ccusplan/sweep.hpp"

using namespace ccusplan;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kGap = 1e-6;

milp::Solver& solver() {
  static std::unique_ptr<milp::Solver> s = milp::make_solver();
  return *s;
}

engine::PlanningEngine& eng() {
  static engine::PlanningEngine e(solver());
  return e;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_delta(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

// --- 1. oracle equivalence -------------------------------------------------

Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  PlanningInstance inst = builtin_instance("toy3-ccus");
  engine::PlanningSolution sol = eng().solve_deterministic(inst, 50, 40);
  if (!sol.optimal()) return fail("deterministic solve not optimal: " + sol.message);

  form::BuiltModel built =
      eng().build_for(inst, engine::PlanMode::Deterministic, {{50, 40, 1.0, ""}});
  oracle::OracleReport rep = oracle::verify_solution(built.model, solver(), sol.objective);
  double secs = seconds_since(t0);
  if (!rep.feasible) return fail("oracle found no feasible assignment");
  if (!rep.agreement)
    return fail(fmt("objective %.6f vs oracle %.6f, rel delta %.2e", sol.objective,
                    rep.best_objective, rep.rel_delta));
  if (secs >= 60.0) return fail(fmt("took %.1f s, budget 60 s", secs));
  return {true, fmt("rel delta %.2e over %lld assignments (%lld feasible), %.1f s",
                    rep.rel_delta, static_cast<long long>(rep.enumerated),
                    static_cast<long long>(rep.feasible_count), secs)};
}

// --- 2. robust worst corner ------------------------------------------------

Outcome robust_corner() {
  auto t0 = Clock::now();
  PlanningInstance inst = builtin_instance("toy3-ccus");
  engine::UncertaintySpec box = engine::UncertaintySpec::make_box(1, 120, 1, 80);

  engine::PlanningSolution corner = eng().solve_robust(inst, box);
  engine::EngineOptions vo;
  vo.robust_method = "vertex_epigraph";
  engine::PlanningEngine veng(solver(), vo);
  engine::PlanningSolution vertex = veng.solve_robust(inst, box);
  double secs = seconds_since(t0);

  if (!corner.optimal()) return fail("corner method not optimal: " + corner.message);
  if (!vertex.optimal()) return fail("vertex method not optimal: " + vertex.message);
  for (const engine::PlanningSolution* s : {&corner, &vertex}) {
    if (std::fabs(s->worst_tax - 120.0) > 1e-9 || std::fabs(s->worst_price - 1.0) > 1e-9)
      return fail(fmt("worst corner reported as (%g, %g), want (120, 1)", s->worst_tax,
                      s->worst_price));
  }
  double rd = rel_delta(corner.objective, vertex.objective);
  if (rd > 1e-6) return fail(fmt("methods disagree: rel delta %.2e", rd));
  if (secs >= 120.0) return fail(fmt("took %.1f s, budget 120 s", secs));
  return {true, fmt("both methods at corner (120, 1), rel delta %.2e, %.1f s", rd, secs)};
}

// --- 3. no-investment region -----------------------------------------------

Outcome no_investment_region() {
  auto t0 = Clock::now();
  engine::UncertaintySpec grid =
      engine::UncertaintySpec::grid_over(engine::Box{1, 120, 1, 80}, 5, 5);
  sweep::SweepOptions opts;
  opts.gap_tol = kGap;
  sweep::SweepResult res =
      sweep::run_sweep(builtin_instance("toy3-ccus"), solver(), grid.grid->tax_points,
                       grid.grid->price_points, opts);
  double secs = seconds_since(t0);

  int region = 0;
  for (const sweep::SweepCell& cell : res.cells) {
    if (cell.status != milp::SolveStatus::Optimal)
      return fail(fmt("cell (%g, %g) not optimal", cell.tax, cell.price));
    if (cell.price > cell.tax) {
      ++region;
      if (cell.y_sum != 0)
        return fail(fmt("cell (%g, %g) invests y_sum=%d despite price > tax", cell.tax,
                        cell.price, cell.y_sum));
    }
  }
  if (secs >= 300.0) return fail(fmt("took %.1f s, budget 300 s", secs));
  return {true, fmt("y_sum = 0 on all %d price>tax cells of 25, %.1f s", region, secs)};
}

// --- 4. monotonicity suite ---------------------------------------------------

Outcome monotonicity() {
  auto t0 = Clock::now();
  std::vector<double> tax, price;
  for (int i = 0; i <= 12; ++i) tax.push_back(10.0 * i);  // 13 points
  for (int i = 0; i <= 8; ++i) price.push_back(10.0 * i); // 9 points
  sweep::SweepOptions opts;
  opts.gap_tol = kGap;
  sweep::SweepResult res =
      sweep::run_sweep(builtin_instance("toy3-ccus"), solver(), tax, price, opts);

  int violations = 0;
  std::string first;
  auto slack = [](double a, double b) {
    return 2.0 * kGap * std::max({1.0, std::fabs(a), std::fabs(b)});
  };
  for (std::size_t ti = 0; ti < tax.size(); ++ti)
    for (std::size_t pi = 0; pi < price.size(); ++pi) {
      const sweep::SweepCell& cell = res.at(ti, pi);
      if (cell.status != milp::SolveStatus::Optimal)
        return fail(fmt("cell (%g, %g) not optimal", cell.tax, cell.price));
      if (pi + 1 < price.size()) {
        double next = res.at(ti, pi + 1).total_cost;
        if (next > cell.total_cost + slack(next, cell.total_cost)) {
          ++violations;
          if (first.empty())
            first = fmt("cost rose with price at tax=%g: %.3f -> %.3f", cell.tax,
                        cell.total_cost, next);
        }
      }
      if (ti + 1 < tax.size()) {
        double next = res.at(ti + 1, pi).total_cost;
        if (next < cell.total_cost - slack(next, cell.total_cost)) {
          ++violations;
          if (first.empty())
            first = fmt("cost fell with tax at price=%g: %.3f -> %.3f", cell.price,
                        cell.total_cost, next);
        }
      }
    }
  double secs = seconds_since(t0);
  if (violations > 0) return fail(fmt("%d violations; first: %s", violations, first.c_str()));
  return {true, fmt("0 violations over 13x9 grid (212 ordered pairs), %.1f s", secs)};
}

// --- 5. stochastic bounds ----------------------------------------------------

Outcome stochastic_bounds() {
  auto t0 = Clock::now();
  PlanningInstance inst = builtin_instance("toy3-ccus");

  engine::PlanningSolution degen =
      eng().solve_stochastic(inst, engine::UncertaintySpec::make_grid({50}, {40}));
  engine::PlanningSolution det = eng().solve_deterministic(inst, 50, 40);
  if (!degen.optimal() || !det.optimal()) return fail("degenerate pair not optimal");
  double rd = rel_delta(degen.objective, det.objective);
  if (rd > 1e-6) return fail(fmt("degenerate grid off deterministic by rel %.2e", rd));

  engine::UncertaintySpec grid =
      engine::UncertaintySpec::grid_over(engine::Box{1, 120, 1, 80}, 5, 5);
  engine::PlanningSolution sp = eng().solve_stochastic(inst, grid);
  if (!sp.optimal()) return fail("stochastic program not optimal: " + sp.message);

  double mean_tax = 0.0, mean_price = 0.0;
  for (double v : grid.grid->tax_points) mean_tax += v / grid.grid->tax_points.size();
  for (double v : grid.grid->price_points) mean_price += v / grid.grid->price_points.size();
  engine::PlanningSolution ev = eng().solve_deterministic(inst, mean_tax, mean_price);
  if (!ev.optimal()) return fail("expected-value problem not optimal");

  double eev = 0.0;
  double p = 1.0 / 25.0;
  for (double tax : grid.grid->tax_points)
    for (double price : grid.grid->price_points) {
      engine::RecourseEval re =
          eng().evaluate_fixed_first_stage(inst, ev.first_stage, tax, price);
      if (!re.feasible) return fail(fmt("EV plan infeasible at (%g, %g)", tax, price));
      eev += p * re.breakdown.total;
    }
  double vss = eev - sp.objective;
  double floor = -kGap * std::max({1.0, std::fabs(eev), std::fabs(sp.objective)});
  double secs = seconds_since(t0);
  if (vss < floor) return fail(fmt("VSS %.6f below -gap floor %.6f", vss, floor));
  return {true, fmt("degenerate rel delta %.2e; VSS %.3g >= %.3g, %.1f s", rd, vss, floor,
                    secs)};
}

// --- 6. carbon conservation --------------------------------------------------

Outcome carbon_conservation() {
  PlanningInstance toy = builtin_instance("toy3-ccus");
  if (toy.generators[1].emission_factor != 1.005)
    return fail("toy3-ccus ccpp emission factor is not 1.005 ton/MWh");

  int hours = 0;
  double worst = 0.0;
  for (const char* name : {"toy3-ccus", "mesh6"}) {
    PlanningInstance inst = builtin_instance(name);
    engine::PlanningSolution sol = eng().solve_deterministic(inst, 50, 40);
    if (!sol.optimal()) return fail(std::string(name) + " solve not optimal");
    InstanceIndex ix = make_index(inst);
    for (const engine::ScenarioSchedule& s : sol.scenarios) {
      for (std::size_t j = 0; j < inst.generators.size(); ++j)
        for (std::size_t t = 0; t < s.gen_out[j].size(); ++t) {
          double want = inst.generators[j].emission_factor * s.gen_out[j][t];
          double err = std::fabs(s.emitted[j][t] - want);
          worst = std::max(worst, err);
          if (err > 1e-6 * std::max(1.0, want))
            return fail(fmt("%s: Q_EMI != emi*P at generator %zu hour %zu", name, j, t + 1));
        }
      for (std::size_t c = 0; c < ix.ccpp.size(); ++c)
        for (std::size_t t = 0; t < s.captured[c].size(); ++t) {
          ++hours;
          double qcc = s.captured[c][t];
          double split = s.stored[c][t] + s.utilized[c][t];
          double qemi = s.emitted[ix.ccpp[c]][t];
          worst = std::max(worst, std::fabs(qcc - split));
          if (std::fabs(qcc - split) > 1e-6 * std::max(1.0, qcc))
            return fail(fmt("%s: Q_CC != Q_CS + Q_CU at plant %zu hour %zu", name, c, t + 1));
          if (qcc < -1e-6 || qcc > qemi + 1e-6 * std::max(1.0, qemi))
            return fail(fmt("%s: Q_CC outside [0, Q_EMI] at plant %zu hour %zu", name, c,
                            t + 1));
        }
    }
  }
  return {true, fmt("emi=1.005 confirmed; %d plant-hours conserve, worst residual %.2e",
                    hours, worst)};
}

// --- 7. PWL error certificate ------------------------------------------------

Outcome pwl_certificate() {
  std::mt19937 rng(7041);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long points = 0;
  double worst_ratio = 0.0;
  for (const char* name : {"toy3", "mesh6"}) {
    PlanningInstance inst = builtin_instance(name);
    for (const form::Pwl& w : form::compute_breakpoints(inst)) {
      double bound = w.error_bound();
      int K = w.segments();
      std::uniform_int_distribution<int> seg(0, K - 1);
      for (int n = 0; n < 1000; ++n) {
        // incremental-feasible point: full prefix, one partial segment
        int k = seg(rng);
        double theta = unit(rng);
        double f = w.points.front();
        double img = w.images.front();
        for (int i = 0; i < k; ++i) {
          f += w.points[i + 1] - w.points[i];
          img += w.images[i + 1] - w.images[i];
        }
        f += theta * (w.points[k + 1] - w.points[k]);
        img += theta * (w.images[k + 1] - w.images[k]);
        double err = std::fabs(img - f * std::fabs(f));
        worst_ratio = std::max(worst_ratio, err / bound);
        if (err > bound + 1e-12)
          return fail(fmt("%s: error %.6e exceeds bound %.6e at f=%.4f", name, err, bound,
                          f));
        ++points;
      }
    }
  }
  return {true, fmt("%ld points across 9 pipelines, worst error is %.3f of the bound",
                    points, worst_ratio)};
}

// --- 8. UC validity ----------------------------------------------------------

// Run-length reading of Eqs. (17a)-(19) with the cold-start convention: the
// hour-1 run carries no startup/shutdown marker, later runs must last their
// minimum or reach the horizon.
std::string check_runs(const std::vector<double>& raw_u, int min_up, int min_down) {
  int T = static_cast<int>(raw_u.size());
  std::vector<int> u(T);
  for (int t = 0; t < T; ++t) {
    if (std::fabs(raw_u[t] - std::round(raw_u[t])) > 1e-6) return "fractional commitment";
    u[t] = static_cast<int>(std::round(raw_u[t]));
    if (u[t] != 0 && u[t] != 1) return "commitment outside {0,1}";
  }
  int start = 0;
  while (start < T) {
    int end = start;
    while (end + 1 < T && u[end + 1] == u[start]) ++end;
    int len = end - start + 1;
    bool boundary_exempt = start == 0 || end == T - 1;
    if (!boundary_exempt) {
      if (u[start] == 1 && len < min_up)
        return fmt("on-run of %d h violates min-up %d", len, min_up);
      if (u[start] == 0 && len < min_down)
        return fmt("off-run of %d h violates min-down %d", len, min_down);
    }
    start = end + 1;
  }
  return "";
}

// Direct replay of the Eq. (17a)-(19) rows on the extracted u/v/w values.
std::string check_uc_rows(const std::vector<double>& u, const std::vector<double>& v,
                          const std::vector<double>& w, int min_up, int min_down) {
  int T = static_cast<int>(u.size());
  const double tol = 1e-6;
  for (int t = 0; t < T; ++t)
    if (v[t] + w[t] > 1.0 + tol) return "v + w > 1";
  for (int t = 1; t < T; ++t)
    if (std::fabs(u[t] - u[t - 1] - v[t] + w[t]) > tol) return "commitment logic broken";
  for (int t = min_up - 1; t < T; ++t) {
    double sum = 0.0;
    for (int tau = t - min_up + 1; tau <= t; ++tau) sum += v[tau];
    if (sum > u[t] + tol) return "min-up window broken";
  }
  for (int t = min_down - 1; t < T; ++t) {
    double sum = 0.0;
    for (int tau = t - min_down + 1; tau <= t; ++tau) sum += w[tau];
    if (sum > 1.0 - u[t] + tol) return "min-down window broken";
  }
  return "";
}

Outcome uc_validity() {
  auto t0 = Clock::now();
  std::mt19937 rng(20240819);
  std::uniform_real_distribution<double> scale(0.85, 1.05);
  int schedules = 0;
  for (int round = 0; round < 25; ++round) {
    PlanningInstance inst = builtin_instance("mesh6");
    for (ElectricBus& bus : inst.buses) {
      double f = scale(rng);
      for (double& v : bus.load) v *= f;
    }
    for (GasNode& node : inst.gas_nodes) {
      double f = scale(rng);
      for (double& v : node.load) v *= f;
    }
    validate_instance(inst);
    engine::PlanningSolution sol = eng().solve_deterministic(inst, 50, 40);
    if (!sol.optimal()) return fail(fmt("perturbed round %d not optimal", round));
    const engine::ScenarioSchedule& s = sol.scenarios[0];
    for (std::size_t j = 0; j < inst.generators.size(); ++j) {
      const Generator& g = inst.generators[j];
      std::string err = check_runs(s.gen_on[j], g.min_up, g.min_down);
      if (err.empty())
        err = check_uc_rows(s.gen_on[j], s.gen_start[j], s.gen_stop[j], g.min_up,
                            g.min_down);
      if (!err.empty())
        return fail(fmt("round %d generator %s: %s", round, g.id.c_str(), err.c_str()));
      ++schedules;
    }
  }
  double secs = seconds_since(t0);
  return {true, fmt("%d schedules from 25 perturbed solves pass, %.1f s", schedules, secs)};
}

// --- 9. annualization ----------------------------------------------------------

Outcome annualization() {
  double kappa = annualization_coefficient(0.08, 20);
  double growth = std::pow(1.08, 20);
  double independent = 0.08 * growth / (growth - 1.0);
  if (std::fabs(kappa - independent) > 1e-12)
    return fail(fmt("closed form mismatch: %.12f vs %.12f", kappa, independent));
  if (std::fabs(kappa - 0.101852) > 1e-6)
    return fail(fmt("kappa %.9f not 0.101852 +/- 1e-6", kappa));
  return {true, fmt("kappa(0.08, 20) = %.9f, delta to 0.101852 is %.2e", kappa,
                    std::fabs(kappa - 0.101852))};
}

// --- 10. superset dominance -----------------------------------------------------

Outcome superset_dominance() {
  auto t0 = Clock::now();
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> tax_d(0.0, 120.0), price_d(0.0, 80.0);
  PlanningInstance inst = builtin_instance("toy3-ccus");
  double worst = -1e300;
  for (int n = 0; n < 10; ++n) {
    double tax = tax_d(rng), price = price_d(rng);
    engine::PlanningSolution with = eng().solve_deterministic(inst, tax, price);
    engine::PlanningSolution without = eng().solve_no_ccus(inst, tax);
    if (!with.optimal() || !without.optimal())
      return fail(fmt("pair (%g, %g) did not solve", tax, price));
    double slack = kGap * std::max({1.0, std::fabs(with.objective),
                                    std::fabs(without.objective)});
    double excess = with.objective - without.objective;
    worst = std::max(worst, excess / std::max(1.0, std::fabs(without.objective)));
    if (excess > slack)
      return fail(fmt("CCUS option raised cost at (%g, %g) by %.6f", tax, price, excess));
  }
  double secs = seconds_since(t0);
  return {true, fmt("10 pairs dominated; worst relative excess %.2e, %.1f s", worst, secs)};
}

} // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle-equivalence", oracle_equivalence},
      {"robust-worst-corner", robust_corner},
      {"no-investment-region", no_investment_region},
      {"monotonicity-suite", monotonicity},
      {"stochastic-bounds", stochastic_bounds},
      {"carbon-conservation", carbon_conservation},
      {"pwl-error-certificate", pwl_certificate},
      {"uc-validity", uc_validity},
      {"annualization", annualization},
      {"superset-dominance", superset_dominance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %02zu %-22s %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, out.detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("acceptance: %d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("acceptance: all %zu criteria pass\n", criteria.size());
  return 0;
}
