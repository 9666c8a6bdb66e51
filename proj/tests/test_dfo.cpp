#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "roadopt/dfo.hpp"

using namespace roadopt;

namespace {

BlackBox quadratic(const std::vector<double>& target) {
  return [target](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      s += (x[j] - target[j]) * (x[j] - target[j]);
    }
    return EvalOutcome::finite(s);
  };
}

bool same_result(const RunResult& a, const RunResult& b) {
  return a.best_point == b.best_point && a.best_cost == b.best_cost &&
         a.evaluations == b.evaluations && a.inner_solves == b.inner_solves &&
         a.cache_hits == b.cache_hits && a.trace == b.trace && a.termination == b.termination;
}

double inf_norm_error(const std::vector<double>& x, const std::vector<double>& target) {
  double e = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    e = std::max(e, std::abs(x[j] - target[j]));
  }
  return e;
}

}  // namespace

TEST_CASE("deterministic poll set is the 2d coordinate pattern") {
  const auto candidates = poll_set({1.0, 2.0}, 0.5, {1.0, 1.0}, PollMode::Deterministic);
  REQUIRE(candidates.size() == 4);
  CHECK(candidates[0] == std::vector<double>{1.5, 2.0});
  CHECK(candidates[1] == std::vector<double>{0.5, 2.0});
  CHECK(candidates[2] == std::vector<double>{1.0, 2.5});
  CHECK(candidates[3] == std::vector<double>{1.0, 1.5});
}

TEST_CASE("poll displacements have scaled infinity-norm delta") {
  Rng rng(5);
  const std::vector<double> x = {0.0, 0.0, 0.0};
  const std::vector<double> scales = {1.0, 2.0, 0.5};
  for (const PollMode mode : {PollMode::Deterministic, PollMode::Stochastic}) {
    const auto candidates = poll_set(x, 0.8, scales, mode, &rng);
    for (const auto& c : candidates) {
      double norm = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        norm = std::max(norm, std::abs(c[j] - x[j]) / scales[j]);
      }
      CHECK(norm == doctest::Approx(0.8).epsilon(1e-12));
    }
  }
}

TEST_CASE("stochastic poll set spans every direction positively") {
  Rng rng(17);
  const std::vector<double> x(4, 0.0);
  const std::vector<double> scales(4, 1.0);
  testutil::TestRng probe(3);
  const auto candidates = poll_set(x, 1.0, scales, PollMode::Stochastic, &rng);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(4);
    for (double& c : v) c = probe.uniform(-1, 1);
    double vnorm = 0.0;
    for (const double c : v) vnorm += c * c;
    if (vnorm < 1e-6) continue;
    double best = -1.0;
    for (const auto& cand : candidates) {
      double d = 0.0;
      for (std::size_t j = 0; j < 4; ++j) d += cand[j] * v[j];
      best = std::max(best, d);
    }
    CHECK(best > 0.0);  // some candidate makes progress along v
  }
}

TEST_CASE("both solvers find a quadratic minimum to mesh accuracy") {
  testutil::TestRng rng(8);
  for (const std::size_t d : {2u, 6u, 12u}) {
    std::vector<double> target(d), x0(d);
    for (std::size_t j = 0; j < d; ++j) {
      target[j] = rng.uniform(-10, 10);
      x0[j] = rng.uniform(-15, 15);
    }
    SearchConfig cfg;
    cfg.max_evals = 200000;
    const RunResult det = pattern_search_deterministic(quadratic(target), x0, cfg);
    CHECK(inf_norm_error(det.best_point, target) <= 0.2);
    CHECK(det.termination == Termination::MinStep);
    const RunResult sto = pattern_search_stochastic(quadratic(target), x0, cfg, 42);
    CHECK(inf_norm_error(sto.best_point, target) <= 0.2);
  }
}

TEST_CASE("barrier regions are never entered") {
  // global minimum at x=10 is fenced off by an infeasible strip [4, 6];
  // the search must settle near the local minimum at x=2 on the start's side
  const BlackBox f = [](const std::vector<double>& x) {
    if (x[0] >= 4.0 && x[0] <= 6.0) return EvalOutcome::infeasible(true);
    const double local = (x[0] - 2.0) * (x[0] - 2.0) + 1.0;
    const double global = 0.1 * (x[0] - 10.0) * (x[0] - 10.0);
    return EvalOutcome::finite(std::min(local, global));
  };
  SearchConfig cfg;
  cfg.delta0 = 1.0;  // polls from x0=1 never jump the strip
  const RunResult r = pattern_search_deterministic(f, {1.0}, cfg);
  CHECK(std::abs(r.best_point[0] - 2.0) <= 0.2);
  CHECK(r.best_point[0] < 4.0);
}

TEST_CASE("infeasible start is a hard error") {
  const BlackBox f = [](const std::vector<double>&) { return EvalOutcome::infeasible(true); };
  CHECK_THROWS_AS(pattern_search_deterministic(f, {0.0}, SearchConfig{}),
                  std::runtime_error);
}

TEST_CASE("deterministic solver is bit-reproducible") {
  const BlackBox f = quadratic({3.0, -2.0, 0.5});
  SearchConfig cfg;
  const RunResult a = pattern_search_deterministic(f, {0.0, 0.0, 0.0}, cfg);
  const RunResult b = pattern_search_deterministic(f, {0.0, 0.0, 0.0}, cfg);
  CHECK(same_result(a, b));
}

TEST_CASE("serial and concurrent polling produce identical results") {
  const BlackBox f = quadratic({3.0, -2.0, 0.5, 1.0});
  SearchConfig serial;
  SearchConfig threaded;
  threaded.poll_threads = 4;
  const RunResult a = pattern_search_deterministic(f, {9.0, 9.0, 9.0, 9.0}, serial);
  const RunResult b = pattern_search_deterministic(f, {9.0, 9.0, 9.0, 9.0}, threaded);
  CHECK(same_result(a, b));
}

TEST_CASE("fixed seed reproduces the stochastic run exactly") {
  const BlackBox f = quadratic({-1.0, 4.0});
  SearchConfig cfg;
  const RunResult a = pattern_search_stochastic(f, {5.0, 5.0}, cfg, 7);
  const RunResult b = pattern_search_stochastic(f, {5.0, 5.0}, cfg, 7);
  CHECK(same_result(a, b));
}

TEST_CASE("different seeds may settle in different basins of a multimodal f") {
  // two wells of equal depth; which one wins depends on the polls
  const BlackBox f = [](const std::vector<double>& x) {
    const double a = (x[0] + 5.0) * (x[0] + 5.0);
    const double b = (x[0] - 5.0) * (x[0] - 5.0);
    return EvalOutcome::finite(std::min(a, b) + 0.05 * x[1] * x[1]);
  };
  SearchConfig cfg;
  std::vector<double> found;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const RunResult r = pattern_search_stochastic(f, {0.0, 3.0}, cfg, seed);
    found.push_back(r.best_point[0]);
    CHECK(std::abs(std::abs(r.best_point[0]) - 5.0) <= 0.3);  // one of the wells
  }
  const bool saw_left = std::any_of(found.begin(), found.end(), [](double v) { return v < 0; });
  const bool saw_right = std::any_of(found.begin(), found.end(), [](double v) { return v > 0; });
  CHECK(saw_left);
  CHECK(saw_right);
}

TEST_CASE("escape perturbations can hop out of a shallow dimple") {
  // local dimple at 0 worth 0.1, true well at 2.2; the poll pattern stalls in
  // the dimple and only the 5 x min_step jump reaches the good basin
  const BlackBox f = [](const std::vector<double>& x) {
    const double local = x[0] * x[0] + 0.1;
    const double global = (x[0] - 2.2) * (x[0] - 2.2);
    return EvalOutcome::finite(std::min(local, global));
  };
  SearchConfig cfg;
  cfg.delta0 = 0.5;
  cfg.min_step = 0.5;  // perturbation radius 2.5 spans the gap
  bool escaped = false;
  for (std::uint64_t seed = 0; seed < 6 && !escaped; ++seed) {
    const RunResult r = pattern_search_stochastic(f, {0.0}, cfg, seed);
    escaped = std::abs(r.best_point[0] - 2.2) < 0.5;
  }
  CHECK(escaped);

  // with the escape disabled the search stays in the dimple
  SearchConfig no_escape = cfg;
  no_escape.escape_tries = 0;
  const RunResult stuck = pattern_search_stochastic(f, {0.0}, no_escape, 0);
  CHECK(std::abs(stuck.best_point[0]) < 0.5);
}

TEST_CASE("incumbent trace is nonincreasing and accounting adds up") {
  const BlackBox f = quadratic({2.0, 2.0, -3.0, 1.0, 0.0});
  SearchConfig cfg;
  const RunResult r = pattern_search_deterministic(f, {8.0, -8.0, 8.0, -8.0, 8.0}, cfg);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.back().second == r.best_cost);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    CHECK(r.trace[k].second <= r.trace[k - 1].second);
    CHECK(r.trace[k].first >= r.trace[k - 1].first);
  }
  CHECK(r.inner_solves <= r.evaluations);
  // the pure quadratic never skips an inner solve
  CHECK(r.inner_solves == r.evaluations);
}

TEST_CASE("mesh-local optimality at deterministic termination") {
  const BlackBox f = quadratic({1.2, -0.7});
  SearchConfig cfg;
  const RunResult r = pattern_search_deterministic(f, {5.0, 5.0}, cfg);
  REQUIRE(r.termination == Termination::MinStep);
  REQUIRE(r.final_delta >= cfg.min_step);
  const auto final_poll =
      poll_set(r.best_point, r.final_delta, {1.0, 1.0}, PollMode::Deterministic);
  for (const auto& candidate : final_poll) {
    const EvalOutcome out = f(candidate);
    CHECK((!out.feasible || out.cost >= r.best_cost));
  }
}

TEST_CASE("eval budget terminates the search") {
  const BlackBox f = quadratic({100.0, 100.0});
  SearchConfig cfg;
  cfg.max_evals = 17;
  const RunResult r = pattern_search_deterministic(f, {0.0, 0.0}, cfg);
  CHECK(r.termination == Termination::EvalBudget);
  CHECK(r.evaluations <= 17);
}

TEST_CASE("cache hits do not count as evaluations") {
  // after a successful move the reverse poll direction lands on the previous
  // incumbent, which is already cached
  const BlackBox f = quadratic({3.05, 0.05});
  SearchConfig cfg;
  const RunResult r = pattern_search_deterministic(f, {0.0, 0.0}, cfg);
  CHECK(r.cache_hits > 0);
  CHECK(r.inner_solves == r.evaluations);
}
