#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "roadopt/terrain.hpp"

namespace roadopt {

enum class TerrainFamily { Flat, TiltedPlane, Valley, Ridge };

/// Recipe for a synthetic corridor with a straight baseline along +x.
struct SynthSpec {
  TerrainFamily family = TerrainFamily::Valley;
  std::size_t station_count = 20;
  double station_spacing = 10.0;  // m
  double half_width = 20.0;       // m
  double t_star = 0.75;           // valley/ridge lateral position in [0,1]
  double depth = 6.0;             // m
  std::size_t point_count = 3;    // interior intersection points
  std::uint64_t seed = 0;
};

inline void validate_synth_spec(const SynthSpec& s) {
  if (s.station_count < 2) throw std::invalid_argument("synth: need at least 2 stations");
  if (!(s.station_spacing > 0)) throw std::invalid_argument("synth: spacing must be positive");
  if (!(s.half_width > 0)) throw std::invalid_argument("synth: half_width must be positive");
  if (!(s.t_star >= 0 && s.t_star <= 1)) throw std::invalid_argument("synth: t_star in [0,1]");
}

namespace synthdetail {

inline double elevation(const SynthSpec& spec, double x, double t) {
  const double length = spec.station_spacing * static_cast<double>(spec.station_count - 1);
  switch (spec.family) {
    case TerrainFamily::Flat: return 0.0;
    case TerrainFamily::TiltedPlane: return spec.depth * (length > 0 ? x / length : 0.0);
    case TerrainFamily::Valley: return spec.depth * (t - spec.t_star) * (t - spec.t_star);
    case TerrainFamily::Ridge: return -spec.depth * (t - spec.t_star) * (t - spec.t_star);
  }
  return 0.0;
}

}  // namespace synthdetail

/// Builds a corridor whose baseline runs along the x axis. Valley and ridge
/// families carry a sample exactly at t_star so the extreme line is resolved,
/// and the valley endpoints sit on the valley floor, which makes the zero-cost
/// path realizable. Deterministic for a given spec.
inline Corridor synthesize_corridor(const SynthSpec& spec) {
  validate_synth_spec(spec);
  const double hw = spec.half_width;
  const double length = spec.station_spacing * static_cast<double>(spec.station_count - 1);

  // lateral sample offsets: uniform plus the exact extreme line and the base point
  std::set<double> offset_set;
  const std::size_t lateral_samples = 11;
  for (std::size_t k = 0; k < lateral_samples; ++k) {
    offset_set.insert(-hw + 2.0 * hw * static_cast<double>(k) / (lateral_samples - 1));
  }
  offset_set.insert(0.0);
  if (spec.family == TerrainFamily::Valley || spec.family == TerrainFamily::Ridge) {
    offset_set.insert((2.0 * spec.t_star - 1.0) * hw);
  }
  const std::vector<double> offsets(offset_set.begin(), offset_set.end());

  Corridor c;
  for (std::size_t j = 0; j < spec.station_count; ++j) {
    Station st;
    st.index = j;
    const double x = spec.station_spacing * static_cast<double>(j);
    st.base_point = {x, 0.0};
    st.left_end = {x, -hw};
    st.right_end = {x, hw};
    for (const double off : offsets) {
      const double t = (off + hw) / (2.0 * hw);
      st.samples.push_back({off, synthdetail::elevation(spec, x, t)});
    }
    c.stations.push_back(std::move(st));
  }

  const double end_y =
      spec.family == TerrainFamily::Valley ? (2.0 * spec.t_star - 1.0) * hw : 0.0;
  c.start_point = {0.0, end_y};
  c.end_point = {length, end_y};

  const double gap = length / static_cast<double>(spec.point_count + 1);
  for (std::size_t k = 1; k <= spec.point_count; ++k) {
    const double x = gap * static_cast<double>(k);
    Box box;
    box.lo = {x - 0.35 * gap, -0.95 * hw};
    box.hi = {x + 0.35 * gap, 0.95 * hw};
    c.boxes.push_back(box);
  }
  c.r_min = 5.0;

  VAlignConfig design;
  design.segments = std::max<std::size_t>(1, spec.station_count / 5);
  // Valley and ridge corridors get grade bounds well below the cross-slope of
  // their walls, so the design profile cannot chase lateral detours and the
  // inner cost rewards hugging the extreme line. The tilted plane needs room
  // for its own longitudinal grade.
  double grade = 0.005;
  if (spec.family == TerrainFamily::TiltedPlane && length > 0) {
    grade = std::max(0.01, 2.0 * std::abs(spec.depth) / length);
  }
  design.grade_lo = -grade;
  design.grade_hi = grade;
  design.cut_cost = 10.0;
  design.fill_cost = 10.0;
  design.haul_cost = 1.0;
  design.road_width = 8.0;
  design.borrow = {{0, 2.0, 1e7}};
  design.waste = {{spec.station_count - 1, 2.0, 1e7}};
  c.design = design;

  validate_corridor(c);
  return c;
}

}  // namespace roadopt
