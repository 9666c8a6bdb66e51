#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "roadopt/bilevel.hpp"
#include "roadopt/synth.hpp"

using namespace roadopt;

namespace {

SynthSpec small_valley() {
  SynthSpec spec;
  spec.family = TerrainFamily::Valley;
  spec.station_count = 12;
  spec.station_spacing = 10.0;
  spec.point_count = 2;
  spec.t_star = 0.75;
  return spec;
}

}  // namespace

TEST_CASE("pack and unpack are inverse") {
  const Corridor corridor = synthesize_corridor(small_valley());
  const Alignment baseline = baseline_alignment(corridor);
  const OuterVector v = pack(baseline);
  CHECK(v.size() == 3 * corridor.boxes.size());
  const Alignment back = unpack(corridor, v);
  REQUIRE(back.points.size() == baseline.points.size());
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    CHECK(back.points[i].point == baseline.points[i].point);
    CHECK(back.points[i].radius == baseline.points[i].radius);
  }
  CHECK(back.points.front().radius == 0.0);
  CHECK(back.points.back().radius == 0.0);

  testutil::TestRng rng(4);
  OuterVector random(v.size());
  for (double& c : random) c = rng.uniform(-100, 100);
  CHECK(pack(unpack(corridor, random)) == random);
}

TEST_CASE("wrong vector length is rejected") {
  const Corridor corridor = synthesize_corridor(small_valley());
  CHECK_THROWS_AS(unpack(corridor, OuterVector(5, 0.0)), std::invalid_argument);
}

TEST_CASE("baseline evaluation equals the inner cost at its crossings") {
  const Corridor corridor = synthesize_corridor(small_valley());
  const OuterVector v = pack(baseline_alignment(corridor));
  const Evaluation ev = evaluate_full(corridor, v);
  REQUIRE(ev.outcome.feasible);
  REQUIRE(ev.inner_ran);
  const VAlignOutcome direct = valign_cost(make_valign_problem(corridor, ev.feasibility));
  CHECK(ev.outcome.cost == direct.cost);
  CHECK(ev.outcome.cost > 0.0);  // the centerline baseline pays for the hump
}

TEST_CASE("box violation skips the inner solve") {
  const Corridor corridor = synthesize_corridor(small_valley());
  OuterVector v = pack(baseline_alignment(corridor));
  v[0] += 1e4;  // way outside the first box
  const Evaluation ev = evaluate_full(corridor, v);
  CHECK(!ev.outcome.feasible);
  CHECK(ev.outcome.inner_skipped);
  CHECK(!ev.inner_ran);
}

TEST_CASE("flat corridor evaluates to zero for any feasible vector") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  spec.station_count = 10;
  spec.point_count = 2;
  const Corridor corridor = synthesize_corridor(spec);
  testutil::TestRng rng(6);
  int feasible_count = 0;
  for (int trial = 0; trial < 30; ++trial) {
    OuterVector v = pack(baseline_alignment(corridor));
    for (std::size_t k = 0; k < v.size(); k += 3) {
      v[k] += rng.uniform(-5, 5);
      v[k + 1] += rng.uniform(-12, 12);
      v[k + 2] += rng.uniform(0, 20);
    }
    const EvalOutcome out = evaluate(corridor, v);
    if (out.feasible) {
      ++feasible_count;
      CHECK(out.cost == 0.0);
    }
  }
  CHECK(feasible_count > 5);
}

TEST_CASE("evaluate agrees exactly with the feasibility verdict") {
  const Corridor corridor = synthesize_corridor(small_valley());
  testutil::TestRng rng(12);
  const OuterVector base = pack(baseline_alignment(corridor));
  for (int trial = 0; trial < 100; ++trial) {
    OuterVector v = base;
    for (std::size_t k = 0; k < v.size(); k += 3) {
      v[k] += rng.uniform(-40, 40);
      v[k + 1] += rng.uniform(-40, 40);
      v[k + 2] += rng.uniform(-10, 30);
    }
    const EvalOutcome out = evaluate(corridor, v);
    const FeasibilityReport report = evaluate_feasibility(corridor, unpack(corridor, v));
    CHECK(out.feasible == report.feasible);
  }
}

TEST_CASE("evaluate is a pure function of its inputs") {
  const Corridor corridor = synthesize_corridor(small_valley());
  const OuterVector v = pack(baseline_alignment(corridor));
  const EvalOutcome a = evaluate(corridor, v);
  const EvalOutcome b = evaluate(corridor, v);
  CHECK(a.feasible == b.feasible);
  CHECK(a.cost == b.cost);
}

TEST_CASE("optimize improves the valley baseline and accounts for skips") {
  const Corridor corridor = synthesize_corridor(small_valley());
  OptimizeConfig cfg;
  cfg.search.max_evals = 1200;
  const OptimizationReport report = optimize(corridor, cfg);
  CHECK(report.optimized_cost < report.initial_cost);
  CHECK(report.improvement_percent() > 0.0);
  CHECK(report.inner_solves < report.evaluations);
  CHECK(report.evaluations <= 1200);
  CHECK(report.run.trace.front().second == report.initial_cost);
  // reported improvement must match the costs to a tenth of a point
  const double recomputed =
      (report.initial_cost - report.optimized_cost) / report.initial_cost * 100.0;
  CHECK(std::abs(recomputed - report.improvement_percent()) < 0.1);
}

TEST_CASE("two-point corridor evaluates through a single segment") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  spec.station_count = 4;
  spec.point_count = 1;
  Corridor corridor = synthesize_corridor(spec);
  corridor.boxes.clear();  // n = 2: endpoints only
  const OuterVector empty;
  const Evaluation ev = evaluate_full(corridor, empty);
  REQUIRE(ev.outcome.feasible);
  CHECK(ev.outcome.cost == 0.0);
  REQUIRE(ev.feasibility.path.has_value());
  CHECK(ev.feasibility.path->pieces.size() == 1);
}

TEST_CASE("concurrent candidate evaluation reproduces the serial optimum") {
  const Corridor corridor = synthesize_corridor(small_valley());
  OptimizeConfig serial;
  serial.search.max_evals = 600;
  OptimizeConfig threaded = serial;
  threaded.search.poll_threads = 2;
  const OptimizationReport a = optimize(corridor, serial);
  const OptimizationReport b = optimize(corridor, threaded);
  CHECK(a.optimized_cost == b.optimized_cost);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.inner_solves == b.inner_solves);
  CHECK(pack(a.best_alignment) == pack(b.best_alignment));
}

TEST_CASE("optimize refuses an infeasible baseline") {
  Corridor corridor = synthesize_corridor(small_valley());
  corridor.r_min = 1e6;  // baseline radii violate the minimum radius wildly
  InitialAlignment bad;
  for (const Box& b : corridor.boxes) {
    bad.points.push_back(b.center());
    bad.radii.push_back(1.0);
  }
  corridor.initial = bad;
  CHECK_THROWS_AS(optimize(corridor, OptimizeConfig{}), std::runtime_error);
}
