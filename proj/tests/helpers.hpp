#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "roadopt/geometry.hpp"
#include "roadopt/terrain.hpp"

namespace testutil {

/// Deterministic test randomness; mt19937_64 keeps streams stable across
/// library implementations.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Zig-zag alignment marching along +x whose radii leave slack in every
/// continuity margin, so build_path always succeeds.
inline roadopt::Alignment random_feasible_alignment(TestRng& rng, int n_points) {
  using roadopt::Alignment;
  using roadopt::turn_angle;
  while (true) {
    Alignment a;
    double x = 0.0;
    for (int i = 0; i < n_points; ++i) {
      a.points.push_back({{x, rng.uniform(-8.0, 8.0)}, 0.0});
      x += rng.uniform(10.0, 25.0);
    }
    bool ok = true;
    for (std::size_t i = 1; i + 1 < a.points.size() && ok; ++i) {
      const double theta =
          turn_angle(a.points[i - 1].point, a.points[i].point, a.points[i + 1].point);
      if (theta < 0.3) {
        ok = false;
        break;
      }
      const double leg = std::min(distance(a.points[i].point, a.points[i - 1].point),
                                  distance(a.points[i].point, a.points[i + 1].point));
      // each leg is shared by two tangent lengths; cap each at 45% of it
      a.points[i].radius = rng.uniform(0.0, 0.9) * 0.5 * leg * std::tan(theta / 2.0);
    }
    if (ok) return a;
  }
}

/// Straight corridor along +x with the given per-station samples.
inline roadopt::Corridor straight_corridor(std::size_t stations, double spacing, double half_width,
                                           const std::vector<std::pair<double, double>>& samples) {
  roadopt::Corridor c;
  for (std::size_t j = 0; j < stations; ++j) {
    roadopt::Station st;
    st.index = j;
    const double x = spacing * static_cast<double>(j);
    st.base_point = {x, 0.0};
    st.left_end = {x, -half_width};
    st.right_end = {x, half_width};
    for (const auto& [off, elev] : samples) {
      st.samples.push_back({off, elev});
    }
    c.stations.push_back(st);
  }
  c.start_point = {0.0, 0.0};
  c.end_point = {spacing * static_cast<double>(stations - 1), 0.0};
  c.r_min = 1.0;
  c.design.segments = 1;
  c.design.grade_lo = -0.5;
  c.design.grade_hi = 0.5;
  c.design.cut_cost = 10.0;
  c.design.fill_cost = 10.0;
  c.design.haul_cost = 1.0;
  c.design.road_width = 8.0;
  c.design.borrow = {{0, 2.0, 1e7}};
  c.design.waste = {{stations - 1, 2.0, 1e7}};
  return c;
}

}  // namespace testutil
