// Compares the serial reference paths against the OpenMP-chunked paths for
// the two batch kernels (oracle enumeration, tax-price sweep) and checks that
// both produce identical results. Timings are wall clock; on a single
// hardware thread the chunked path mostly measures solver-call overhead.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "ccusplan/engine.hpp"
#include "ccusplan/instance.hpp"
#include "ccusplan/oracle.hpp"
#include "ccusplan/reports.hpp"
#include "ccusplan/solver.hpp"
#include "ccusplan/sweep.hpp"

using namespace ccusplan;
using Clock = std::chrono::steady_clock;

namespace {

double timed(const std::function<void()>& fn) {
  auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs threaded kernel comparison"};
  int threads = 2;
  int repeats = 3;
  std::string instance = "toy3-ccus";
  app.add_option("--threads", threads, "worker threads for the parallel runs");
  app.add_option("--repeats", repeats, "timing repetitions, best-of");
  app.add_option("--instance", instance, "builtin name or JSON path");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP enabled, %d hardware threads available\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both runs use the serial path\n");
#endif

  std::unique_ptr<milp::Solver> solver = milp::make_solver();
  if (!solver->available()) {
    std::fprintf(stderr, "solver backend unavailable\n");
    return 1;
  }
  PlanningInstance inst = resolve_instance(instance);
  engine::PlanningEngine eng(*solver);

  // kernel 1: oracle enumeration over the first-stage assignments
  form::BuiltModel built =
      eng.build_for(inst, engine::PlanMode::Deterministic, {{50, 40, 1.0, ""}});
  oracle::OracleReport serial_rep, threaded_rep;
  double serial_oracle = 1e300, threaded_oracle = 1e300;
  for (int r = 0; r < repeats; ++r) {
    serial_oracle = std::min(serial_oracle, timed([&] {
      serial_rep = oracle::enumerate_optimum(built.model, *solver);
    }));
    oracle::OracleOptions opts;
    opts.threads = threads;
    opts.batch_size = 4;
    threaded_oracle = std::min(threaded_oracle, timed([&] {
      threaded_rep = oracle::enumerate_optimum(built.model, *solver, opts);
    }));
  }
  bool oracle_match = serial_rep.best_assignment == threaded_rep.best_assignment &&
                      serial_rep.best_objective == threaded_rep.best_objective &&
                      serial_rep.feasible_count == threaded_rep.feasible_count;
  std::printf("oracle %lld assignments : serial %.3f s | %d threads %.3f s | results %s\n",
              static_cast<long long>(serial_rep.enumerated), serial_oracle, threads,
              threaded_oracle, oracle_match ? "identical" : "DIFFER");

  // kernel 2: deterministic sweep over tax and price
  std::vector<double> tax = axis(1, 120, 13), price = axis(1, 80, 9);
  sweep::SweepResult serial_res, threaded_res;
  double serial_sweep = 1e300, threaded_sweep = 1e300;
  for (int r = 0; r < repeats; ++r) {
    sweep::SweepOptions s1;
    serial_sweep = std::min(serial_sweep, timed([&] {
      serial_res = sweep::run_sweep(inst, *solver, tax, price, s1);
    }));
    sweep::SweepOptions sn;
    sn.jobs = threads;
    sn.batch_size = 16;
    threaded_sweep = std::min(threaded_sweep, timed([&] {
      threaded_res = sweep::run_sweep(inst, *solver, tax, price, sn);
    }));
  }
  bool sweep_match = reports::sweep_csv(serial_res) == reports::sweep_csv(threaded_res);
  std::printf("sweep %zu cells        : serial %.3f s | %d threads %.3f s | results %s\n",
              serial_res.cells.size(), serial_sweep, threads, threaded_sweep,
              sweep_match ? "identical" : "DIFFER");

  if (!oracle_match || !sweep_match) return 1;
  return 0;
}
