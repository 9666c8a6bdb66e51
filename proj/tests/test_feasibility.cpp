#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "roadopt/bilevel.hpp"
#include "roadopt/feasibility.hpp"
#include "roadopt/synth.hpp"

using namespace roadopt;

namespace {

Alignment right_angle_alignment(double r) {
  Alignment a;
  a.points = {{{0, 0}, 0.0}, {{1, 0}, r}, {{1, 1}, 0.0}};
  return a;
}

}  // namespace

TEST_CASE("zero radii margins equal the leg lengths") {
  Alignment a;
  a.points = {{{0, 0}, 0.0}, {{3, 0}, 0.0}, {{3, 4}, 0.0}, {{6, 4}, 0.0}};
  const auto margins = check_continuity(a);
  REQUIRE(margins.size() == 3);
  CHECK(margins[0] == doctest::Approx(3.0));
  CHECK(margins[1] == doctest::Approx(4.0));
  CHECK(margins[2] == doctest::Approx(3.0));
}

TEST_CASE("right-angle margins match the worked value") {
  const auto margins = check_continuity(right_angle_alignment(0.2));
  REQUIRE(margins.size() == 2);
  CHECK(margins[0] == doctest::Approx(1.0 - 0.2 - 0.0).epsilon(1e-12));
  CHECK(margins[1] == doctest::Approx(1.0 - 0.2 - 0.0).epsilon(1e-12));
}

TEST_CASE("inflated radii flip a margin negative exactly when the build fails") {
  for (const double r : {0.2, 0.5, 0.9, 0.99, 1.01, 1.5, 5.0}) {
    const Alignment a = right_angle_alignment(r);
    const auto margins = check_continuity(a);
    const bool any_negative =
        std::any_of(margins.begin(), margins.end(), [](double m) { return m < 0.0; });
    const auto built = build_path(a);
    CHECK(any_negative == std::holds_alternative<BuildError>(built));
  }
}

TEST_CASE("radius margins are plain subtraction") {
  Alignment a;
  a.points = {{{0, 0}, 0.0}, {{10, 1}, 3.0}, {{20, 0}, 0.0}};
  auto margins = check_radius(a, 3.0);
  REQUIRE(margins.size() == 1);
  CHECK(margins[0] == 0.0);

  a.points[1].radius = 0.0;
  margins = check_radius(a, 3.0);
  CHECK(margins[0] == -3.0);

  testutil::TestRng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double r = rng.uniform(0, 10);
    const double r_min = rng.uniform(0, 10);
    a.points[1].radius = r;
    CHECK(check_radius(a, r_min)[0] == doctest::Approx(r - r_min).epsilon(1e-15));
  }
}

TEST_CASE("box violations are per-coordinate distances") {
  Alignment a;
  a.points = {{{0, 0}, 0.0}, {{5, 5}, 0.0}, {{10, 0}, 0.0}};
  std::vector<Box> boxes = {{{4, 4}, {6, 6}}};

  SUBCASE("corner is inside") {
    a.points[1].point = {4, 4};
    CHECK(check_boxes(a, boxes)[0].ok());
  }
  SUBCASE("one meter past the right face") {
    a.points[1].point = {7, 5};
    const auto v = check_boxes(a, boxes);
    CHECK(v[0].dx == doctest::Approx(1.0));
    CHECK(v[0].dy == 0.0);
  }
  SUBCASE("interior point") {
    CHECK(check_boxes(a, boxes)[0].ok());
  }
}

TEST_CASE("baseline of a flat synthetic corridor runs dead centre") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  const Corridor corridor = synthesize_corridor(spec);
  const Alignment baseline = baseline_alignment(corridor);
  const FeasibilityReport report = evaluate_feasibility(corridor, baseline);
  REQUIRE(report.feasible);
  for (const ContainmentEntry& e : report.containment) {
    CHECK(*e.t == doctest::Approx(0.5).epsilon(1e-9));
  }
  // crossing chainages strictly increase along the path
  for (std::size_t j = 1; j < report.crossing_chainages.size(); ++j) {
    CHECK(report.crossing_chainages[j] > report.crossing_chainages[j - 1]);
  }
}

TEST_CASE("edge-hugging path reports t = 0 at every station") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  spec.point_count = 1;
  const Corridor corridor = synthesize_corridor(spec);
  // straight run along the left boundary line y = -20
  Alignment a;
  a.points = {{{corridor.start_point.x, -20.0}, 0.0}, {{corridor.end_point.x, -20.0}, 0.0}};
  const auto built = build_path(a);
  const auto entries = check_containment(std::get<Path>(built), corridor);
  REQUIRE(entries.size() == corridor.n_stations());
  for (const ContainmentEntry& e : entries) {
    REQUIRE(e.t.has_value());
    CHECK(std::abs(*e.t) <= 1e-9);
    CHECK(e.inside);  // the boundary itself still counts as inside
  }
}

TEST_CASE("path exiting the corridor is flagged") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  spec.point_count = 1;
  const Corridor corridor = synthesize_corridor(spec);
  Alignment a = baseline_alignment(corridor);
  a.points[1].point.y = 25.0;  // beyond the 20 m half width but inside no box anyway
  const FeasibilityReport report = evaluate_feasibility(corridor, a);
  CHECK(!report.feasible);
  bool outside = false;
  for (const ContainmentEntry& e : report.containment) {
    if (!e.inside) outside = true;
  }
  CHECK(outside);
}

TEST_CASE("feasible iff margins, boxes, containment and build all pass") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  const Corridor corridor = synthesize_corridor(spec);
  const Alignment baseline = baseline_alignment(corridor);

  CHECK(evaluate_feasibility(corridor, baseline).feasible);

  Alignment bad_radius = baseline;
  bad_radius.points[1].radius = corridor.r_min / 2.0;
  CHECK(!evaluate_feasibility(corridor, bad_radius).feasible);

  Alignment bad_box = baseline;
  bad_box.points[1].point.x += 1000.0;
  CHECK(!evaluate_feasibility(corridor, bad_box).feasible);
}

TEST_CASE("feasibility is preserved when shrinking radii toward r_min") {
  SynthSpec spec;
  spec.family = TerrainFamily::Flat;
  const Corridor corridor = synthesize_corridor(spec);
  Alignment a = baseline_alignment(corridor);
  for (auto& p : a.points) {
    if (p.radius > 0) p.radius = corridor.r_min * 4.0;
  }
  REQUIRE(evaluate_feasibility(corridor, a).feasible);
  for (double f = 4.0; f >= 1.0; f -= 0.5) {
    Alignment shrunk = a;
    for (auto& p : shrunk.points) {
      if (p.radius > 0) p.radius = corridor.r_min * f;
    }
    CHECK(evaluate_feasibility(corridor, shrunk).feasible);
  }
}

TEST_CASE("degenerate geometry yields a -inf sentinel margin") {
  Alignment a;
  // near-U-turn at the middle point with a positive radius
  a.points = {{{0, 0}, 0.0}, {{10, 0}, 1.0}, {{0.001, 0.0005}, 0.0}};
  const auto margins = check_continuity(a);
  CHECK(std::isinf(margins[0]));
  CHECK(margins[0] < 0);
}
