#include <cmath>

#include "ccusplan/milp.hpp"
#include "doctest.h"

using namespace ccusplan::milp;

namespace {

Model small_model() {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 10.0);
  VarHandle y = m.add_variable("y", VarKind::Binary, 0.0, 1.0);
  VarHandle z = m.add_variable("z", VarKind::Integer, -3.0, 7.0);
  m.add_constraint("r1", {{x, 1.0}, {y, 2.0}}, Sense::LessEqual, 5.0);
  m.add_constraint("r2", {{x, 1.0}, {z, -1.0}}, Sense::GreaterEqual, -2.0);
  m.add_constraint("r3", {{y, 1.0}, {z, 1.0}}, Sense::Equal, 1.0);
  m.set_objective({{x, 1.0}, {y, 5.0}, {z, 0.5}}, 2.0);
  return m;
}

} // namespace

TEST_CASE("variables carry names, kinds, and bounds") {
  Model m;
  VarHandle x = m.add_variable("x[a,b]", VarKind::Continuous, -1.0, 4.0);
  CHECK(x.valid());
  CHECK(m.variable(x).name == "x[a,b]");
  CHECK(m.variable(x).lower == -1.0);
  CHECK(m.variable(x).upper == 4.0);
  CHECK(m.find_variable("x[a,b]") == x);
  CHECK_FALSE(m.find_variable("nope").valid());
}

TEST_CASE("duplicate and empty variable names are rejected") {
  Model m;
  m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  CHECK_THROWS_AS(m.add_variable("x", VarKind::Continuous, 0.0, 1.0), ModelError);
  CHECK_THROWS_AS(m.add_variable("", VarKind::Continuous, 0.0, 1.0), ModelError);
}

TEST_CASE("inverted bounds and binary outside [0,1] are rejected") {
  Model m;
  CHECK_THROWS_AS(m.add_variable("a", VarKind::Continuous, 2.0, 1.0), ModelError);
  CHECK_THROWS_AS(m.add_variable("b", VarKind::Binary, 0.0, 2.0), ModelError);
  CHECK_THROWS_AS(m.add_variable("c", VarKind::Binary, -1.0, 1.0), ModelError);
}

TEST_CASE("constraint terms merge duplicates: (1,x) + (2,x) -> (3,x)") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  m.add_constraint("r", {{x, 1.0}, {x, 2.0}}, Sense::LessEqual, 4.0);
  const Constraint& row = m.constraints()[0];
  REQUIRE(row.terms.size() == 1);
  CHECK(row.terms[0].var == x);
  CHECK(row.terms[0].coeff == 3.0);
}

TEST_CASE("terms are sorted by variable handle") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  VarHandle y = m.add_variable("y", VarKind::Continuous, 0.0, 1.0);
  m.add_constraint("r", {{y, 1.0}, {x, 1.0}}, Sense::Equal, 1.0);
  const Constraint& row = m.constraints()[0];
  REQUIRE(row.terms.size() == 2);
  CHECK(row.terms[0].var == x);
  CHECK(row.terms[1].var == y);
}

TEST_CASE("non-finite coefficients and rhs are rejected") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  double nan = std::nan("");
  CHECK_THROWS_AS(m.add_constraint("r", {{x, nan}}, Sense::Equal, 0.0), ModelError);
  CHECK_THROWS_AS(m.add_constraint("r", {{x, kInf}}, Sense::Equal, 0.0), ModelError);
  CHECK_THROWS_AS(m.add_constraint("r", {{x, 1.0}}, Sense::Equal, nan), ModelError);
  CHECK_THROWS_AS(m.set_objective({{x, nan}}), ModelError);
}

TEST_CASE("unknown handles are rejected") {
  Model m;
  m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  VarHandle bogus{7};
  CHECK_THROWS_AS(m.add_constraint("r", {{bogus, 1.0}}, Sense::Equal, 0.0), ModelError);
  CHECK_THROWS_AS(m.variable(bogus), ModelError);
  CHECK_THROWS_AS(m.set_bounds(bogus, 0.0, 1.0), ModelError);
}

TEST_CASE("add_objective_term accumulates onto existing coefficients") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 1.0);
  m.set_objective({{x, 1.0}});
  m.add_objective_term(x, 2.0);
  std::vector<double> v{1.0};
  CHECK(m.objective_value(v) == doctest::Approx(3.0));
}

TEST_CASE("set_bounds overwrites and validates") {
  Model m;
  VarHandle x = m.add_variable("x", VarKind::Continuous, 0.0, 10.0);
  m.set_bounds(x, 2.0, 2.0);
  CHECK(m.variable(x).lower == 2.0);
  CHECK(m.variable(x).upper == 2.0);
  CHECK_THROWS_AS(m.set_bounds(x, 3.0, 1.0), ModelError);
}

TEST_CASE("max_violation measures bounds, rows, and integrality") {
  Model m = small_model();
  SUBCASE("a feasible point has zero violation") {
    // x=1, y=1, z=0: r1 = 3 <= 5, r2 = 1 >= -2, r3 = 1.
    CHECK(m.max_violation({1.0, 1.0, 0.0}) == doctest::Approx(0.0));
  }
  SUBCASE("bound violation is reported") {
    CHECK(m.max_violation({11.0, 0.0, 0.0}) >= 1.0);
  }
  SUBCASE("fractional integer is reported") {
    CHECK(m.max_violation({1.0, 0.0, 1.4}) >= doctest::Approx(0.4).epsilon(1e-9));
  }
  SUBCASE("equality violation is two-sided") {
    CHECK(m.max_violation({0.0, 0.0, 0.0}) >= 1.0); // r3 activity 0 vs rhs 1
  }
}

TEST_CASE("objective_value includes the constant") {
  Model m = small_model();
  // 1*x + 5*y + 0.5*z + 2
  CHECK(m.objective_value({2.0, 1.0, 4.0}) == doctest::Approx(2 + 5 + 2 + 2));
}

TEST_CASE("export_lp is deterministic and mangles names") {
  Model m = small_model();
  std::string a = m.export_lp();
  std::string b = m.export_lp();
  CHECK(a == b);
  CHECK(a.find("Minimize") != std::string::npos);
  CHECK(a.find("Subject To") != std::string::npos);
  CHECK(a.find("Binaries") != std::string::npos);
  CHECK(a.find("Generals") != std::string::npos);
  CHECK(a.find("End") != std::string::npos);

  Model m2;
  m2.add_variable("p[a b]", VarKind::Continuous, 0.0, 1.0);
  std::string lp = m2.export_lp();
  CHECK(lp.find("p(a_b)") != std::string::npos);
  CHECK(lp.find('[') == std::string::npos);
}

TEST_CASE("status names are stable") {
  CHECK(to_string(SolveStatus::Optimal) == "optimal");
  CHECK(to_string(SolveStatus::Infeasible) == "infeasible");
  CHECK(to_string(SolveStatus::Unbounded) == "unbounded");
  CHECK(to_string(SolveStatus::GapLimit) == "gap-limit");
  CHECK(to_string(SolveStatus::TimeLimit) == "time-limit");
  CHECK(to_string(SolveStatus::Error) == "error");
}
