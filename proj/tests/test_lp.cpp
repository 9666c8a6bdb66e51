#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "roadopt/lp.hpp"

using namespace roadopt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LinearProgram make_lp(std::size_t vars, std::size_t rows) {
  LinearProgram lp;
  lp.num_vars = vars;
  lp.cost.assign(vars, 0.0);
  lp.lower.assign(vars, 0.0);
  lp.upper.assign(vars, kInf);
  lp.senses.assign(rows, RowSense::Equal);
  lp.rhs.assign(rows, 0.0);
  return lp;
}

}  // namespace

TEST_CASE("one variable, one bound: min x s.t. x >= 3") {
  LinearProgram lp = make_lp(1, 1);
  lp.cost[0] = 1.0;
  lp.senses[0] = RowSense::GreaterEqual;
  lp.rhs[0] = 3.0;
  lp.entries.push_back({0, 0, 1.0});
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.certified());
}

TEST_CASE("free variable pinned by an equality") {
  LinearProgram lp = make_lp(1, 1);
  lp.cost[0] = 1.0;
  lp.lower[0] = -kInf;
  lp.rhs[0] = -5.0;
  lp.entries.push_back({0, 0, 1.0});
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(sol.certified());
}

TEST_CASE("upper bound caps the maximizing direction") {
  LinearProgram lp = make_lp(1, 0);
  lp.cost[0] = -1.0;
  lp.upper[0] = 7.0;
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(sol.certified());
}

TEST_CASE("contradictory rows are infeasible") {
  LinearProgram lp = make_lp(1, 2);
  lp.senses[0] = RowSense::LessEqual;
  lp.rhs[0] = 1.0;
  lp.senses[1] = RowSense::GreaterEqual;
  lp.rhs[1] = 2.0;
  lp.entries.push_back({0, 0, 1.0});
  lp.entries.push_back({1, 0, 1.0});
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("missing bound means unbounded") {
  LinearProgram lp = make_lp(1, 0);
  lp.cost[0] = -1.0;
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("negative lower bounds are honoured") {
  LinearProgram lp = make_lp(2, 1);
  lp.cost = {1.0, 2.0};
  lp.lower = {-4.0, -1.0};
  lp.upper = {4.0, 1.0};
  lp.senses[0] = RowSense::GreaterEqual;
  lp.rhs[0] = -3.0;
  lp.entries.push_back({0, 0, 1.0});
  lp.entries.push_back({0, 1, 1.0});
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] + sol.x[1] >= -3.0 - 1e-9);
  CHECK(sol.objective == doctest::Approx(-4.0).epsilon(1e-9));  // x = (-2, -1)
  CHECK(sol.certified());
}

TEST_CASE("beale's cycling example terminates at the known optimum") {
  // min -0.75 x1 + 150 x2 - 0.02 x3 + 6 x4, the classic degenerate instance
  LinearProgram lp = make_lp(4, 3);
  lp.cost = {-0.75, 150.0, -0.02, 6.0};
  lp.senses = {RowSense::LessEqual, RowSense::LessEqual, RowSense::LessEqual};
  lp.rhs = {0.0, 0.0, 1.0};
  const double rows[3][4] = {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0},
                             {0.0, 0.0, 1.0, 0.0}};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (rows[r][c] != 0.0) lp.entries.push_back({r, c, rows[r][c]});
    }
  }
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
  CHECK(sol.certified());
}

TEST_CASE("redundant equalities do not break the solve") {
  LinearProgram lp = make_lp(2, 3);
  lp.cost = {1.0, 1.0};
  lp.rhs = {2.0, 2.0, 4.0};  // x0+x1=2 twice, 2x0+2x1=4
  lp.entries = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0},
                {2, 0, 2.0}, {2, 1, 2.0}};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.certified());
}

TEST_CASE("random bounded programs come back with a complete certificate") {
  testutil::TestRng rng(99);
  int optimal_count = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.raw() % 6;
    const std::size_t m = 1 + rng.raw() % 5;
    LinearProgram lp = make_lp(n, m);
    for (std::size_t j = 0; j < n; ++j) {
      lp.cost[j] = rng.uniform(-3, 3);
      lp.upper[j] = rng.uniform(1, 10);  // keeps everything bounded
      if (rng.raw() % 4 == 0) lp.lower[j] = -rng.uniform(0, 5);
    }
    for (std::size_t r = 0; r < m; ++r) {
      const int kind = static_cast<int>(rng.raw() % 3);
      lp.senses[r] = kind == 0 ? RowSense::LessEqual
                               : (kind == 1 ? RowSense::GreaterEqual : RowSense::Equal);
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.raw() % 2 == 0) lp.entries.push_back({r, j, rng.uniform(-2, 2)});
      }
    }
    // pick rhs so that the zero-ish point is feasible for <= and >= rows
    for (std::size_t r = 0; r < m; ++r) {
      if (lp.senses[r] == RowSense::LessEqual) {
        lp.rhs[r] = rng.uniform(0.5, 5);
      } else if (lp.senses[r] == RowSense::GreaterEqual) {
        lp.rhs[r] = -rng.uniform(0.5, 5);
      } else {
        lp.rhs[r] = 0.0;
      }
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Optimal) {
      ++optimal_count;
      // primal + dual feasibility + zero gap is a full optimality proof
      CHECK(sol.certified());
    } else {
      CHECK(sol.status == LpStatus::Infeasible);  // equality rows may clash with bounds
    }
  }
  CHECK(optimal_count > 30);
}
