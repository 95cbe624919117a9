#include <cstdlib>

#include "ccusplan/milp.hpp"
#include "ccusplan/solver.hpp"
#include "doctest.h"

using namespace ccusplan::milp;

namespace {

Solver& shared_solver() {
  static std::unique_ptr<Solver> s = make_solver();
  return *s;
}

Model min_x_geq_3() {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, -kInf, kInf);
  m.add_constraint("lb", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
  m.set_objective({{x, 1.0}});
  return m;
}

} // namespace

TEST_CASE("scipy backend is available in this environment") {
  REQUIRE(shared_solver().available());
  CHECK(shared_solver().name() == "scipy-milp");
}

TEST_CASE("min x subject to x >= 3 solves to 3") {
  Model m = min_x_geq_3();
  SolveResult r = shared_solver().solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-9));
  REQUIRE(r.has_values());
  CHECK(r.values[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(m.max_violation(r.values) <= 1e-6);
}

TEST_CASE("x >= 3 and x <= 2 is infeasible") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, -kInf, kInf);
  m.add_constraint("lb", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
  m.add_constraint("ub", {{x, 1.0}}, Sense::LessEqual, 2.0);
  m.set_objective({{x, 1.0}});
  SolveResult r = shared_solver().solve(m, {});
  CHECK(r.status == SolveStatus::Infeasible);
  CHECK_FALSE(r.has_values());
}

TEST_CASE("free minimization is unbounded") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, -kInf, kInf);
  m.set_objective({{x, 1.0}});
  SolveResult r = shared_solver().solve(m, {});
  CHECK(r.status == SolveStatus::Unbounded);
}

TEST_CASE("integer restriction rounds the optimum up") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Integer, 0.0, 10.0);
  m.add_constraint("lb", {{x, 1.0}}, Sense::GreaterEqual, 2.5);
  m.set_objective({{x, 1.0}});
  SolveResult r = shared_solver().solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("objective constant is included in reported objective") {
  Model m = min_x_geq_3();
  m.set_objective({{m.find_variable("x"), 1.0}}, 10.0);
  SolveResult r = shared_solver().solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(13.0).epsilon(1e-9));
}

TEST_CASE("jobs apply bound fixes, objective overrides, and relaxation") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Integer, 0.0, 5.0);
  VarHandle y = m.add_variable("y", VarKind::Continuous, 0.0, 5.0);
  m.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Sense::GreaterEqual, 3.3);
  m.set_objective({{x, 2.0}, {y, 3.0}});

  std::vector<SolveJob> jobs;
  jobs.push_back({}); // as-is: x=3.3 would be cheapest but x integer -> x=3,y=0.3? cost 6.9 vs x=4 cost 8
  jobs.push_back({{{x, 0.0, 0.0}}, {}, false});            // x fixed to 0 -> y=3.3, cost 9.9
  jobs.push_back({{}, {{x, 10.0}}, false});                // x now dear -> y=3.3, cost 9.9
  jobs.push_back({{}, {}, true});                          // LP relaxation -> x=3.3, cost 6.6
  std::vector<SolveResult> rs = shared_solver().solve_jobs(m, jobs, {});
  REQUIRE(rs.size() == 4);
  for (const SolveResult& r : rs) REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(rs[0].objective == doctest::Approx(6.9).epsilon(1e-9));
  CHECK(rs[1].objective == doctest::Approx(9.9).epsilon(1e-9));
  CHECK(rs[2].objective == doctest::Approx(9.9).epsilon(1e-9));
  CHECK(rs[3].objective == doctest::Approx(6.6).epsilon(1e-9));
  // overrides replace the base coefficient, they do not add to it
  CHECK(rs[2].values[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("batched problems answer independently") {
  Model a = min_x_geq_3();
  Model b;
  VarHandle x = b.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  b.add_constraint("lb", {{x, 1.0}}, Sense::GreaterEqual, 2.0); // infeasible
  b.set_objective({{x, 1.0}});

  std::vector<Solver::Batch> batch{{&a, {}}, {&b, {}}};
  auto rs = shared_solver().solve_batch(batch, {});
  REQUIRE(rs.size() == 2);
  REQUIRE(rs[0].size() == 1);
  REQUIRE(rs[1].size() == 1);
  CHECK(rs[0][0].status == SolveStatus::Optimal);
  CHECK(rs[1][0].status == SolveStatus::Infeasible);
}

TEST_CASE("repeated solves are deterministic") {
  Model m = min_x_geq_3();
  SolveResult a = shared_solver().solve(m, {});
  SolveResult b = shared_solver().solve(m, {});
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
}

TEST_CASE("binary values replay within integrality tolerance") {
  Model m;
  VarHandle u = m.add_variable("u", VarKind::Binary, 0.0, 1.0);
  VarHandle p = m.add_variable("p", VarKind::Continuous, 0.0, 10.0);
  m.add_constraint("cap", {{p, 1.0}, {u, -10.0}}, Sense::LessEqual, 0.0);
  m.add_constraint("demand", {{p, 1.0}}, Sense::GreaterEqual, 4.0);
  m.set_objective({{p, 1.0}, {u, 2.0}});
  SolveResult r = shared_solver().solve(m, {});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(m.max_violation(r.values) <= 1e-6);
}

TEST_CASE("null backend reports unavailable and errors every job") {
  NullSolver null;
  CHECK_FALSE(null.available());
  Model m = min_x_geq_3();
  SolveResult r = null.solve(m, {});
  CHECK(r.status == SolveStatus::Error);
  CHECK(!r.message.empty());
}

TEST_CASE("backend selection honours CCUSPLAN_SOLVER_BACKEND") {
  ::setenv("CCUSPLAN_SOLVER_BACKEND", "none", 1);
  auto s = make_solver();
  CHECK(s->name() == "none");
  ::unsetenv("CCUSPLAN_SOLVER_BACKEND");
  auto d = make_solver();
  CHECK(d->name() == "scipy-milp");
}
