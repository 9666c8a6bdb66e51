#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadopt/geom2d.hpp"
#include "roadopt/valign_config.hpp"

namespace roadopt {

/// Corridor / alignment input that fails validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// One sampled ground point on a cross-section.
/// lateral_offset is signed distance from the base data point, negative = left.
struct GroundSample {
  double lateral_offset = 0.0;  // m
  double elevation = 0.0;       // m
};

/// A base data point with its offset data points, spanning the corridor width.
struct Station {
  std::size_t index = 0;
  Vec2 base_point;
  Vec2 left_end;   // U_j, extreme left offset data point
  Vec2 right_end;  // V_j, extreme right offset data point
  std::vector<GroundSample> samples;

  double min_offset() const { return samples.front().lateral_offset; }
  double max_offset() const { return samples.back().lateral_offset; }
};

/// Axis-aligned feasible box for one interior intersection point.
struct Box {
  Vec2 lo;
  Vec2 hi;

  bool contains(Vec2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Vec2 center() const { return {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0}; }
};

/// Optional engineer-provided starting alignment, stored as raw fields so the
/// terrain layer does not depend on the path geometry layer.
struct InitialAlignment {
  std::vector<Vec2> points;   // interior intersection points only
  std::vector<double> radii;  // one radius per interior point
};

/// Immutable corridor input: stations, endpoints, per-point boxes and the
/// vertical-alignment design parameters. Safe for concurrent reads.
struct Corridor {
  std::vector<Station> stations;
  Vec2 start_point;  // P_0
  Vec2 end_point;    // P_{n-1}
  std::vector<Box> boxes;
  double r_min = 0.0;
  VAlignConfig design;
  std::optional<InitialAlignment> initial;
  std::vector<std::string> load_warnings;

  std::size_t n_stations() const { return stations.size(); }
  /// Number of intersection points including the fixed endpoints.
  std::size_t n_intersection_points() const { return boxes.size() + 2; }
};

namespace detail {

inline void validate_station(const Station& st) {
  const std::string where = "station " + std::to_string(st.index);
  if (st.samples.size() < 2) {
    throw ValidationError(where + ": needs at least 2 samples");
  }
  for (std::size_t k = 1; k < st.samples.size(); ++k) {
    if (!(st.samples[k].lateral_offset > st.samples[k - 1].lateral_offset)) {
      throw ValidationError(where + ": samples not strictly increasing in offset (sample " +
                            std::to_string(k) + ")");
    }
  }
  const bool has_base = std::any_of(st.samples.begin(), st.samples.end(),
                                    [](const GroundSample& s) { return s.lateral_offset == 0.0; });
  if (!has_base) {
    throw ValidationError(where + ": no sample at offset 0 (base data point)");
  }
  const double width = distance(st.left_end, st.right_end);
  if (!(width > 0.0)) {
    throw ValidationError(where + ": left and right ends coincide");
  }
  if (point_line_distance(st.base_point, st.left_end, st.right_end) > 1e-9) {
    throw ValidationError(where + ": base point not collinear with left/right ends");
  }
  // The world-space span must agree with the sampled offset span, otherwise the
  // t parameter and the lateral offsets would describe different lines.
  const double span = st.max_offset() - st.min_offset();
  if (std::abs(width - span) > 1e-6) {
    throw ValidationError(where + ": |right-left| differs from sampled offset span");
  }
  const Vec2 dir = unit(st.right_end - st.left_end);
  const Vec2 expected_left = st.base_point + st.min_offset() * dir;
  if (distance(expected_left, st.left_end) > 1e-6) {
    throw ValidationError(where + ": left end inconsistent with min sample offset");
  }
}

}  // namespace detail

/// Checks all corridor invariants; fills load_warnings (station spacing) in place.
inline void validate_corridor(Corridor& c) {
  if (c.stations.size() < 2) {
    throw ValidationError("corridor: needs at least 2 stations");
  }
  for (std::size_t j = 0; j < c.stations.size(); ++j) {
    if (c.stations[j].index != j) {
      throw ValidationError("station " + std::to_string(j) + ": index out of order");
    }
    detail::validate_station(c.stations[j]);
  }
  for (std::size_t j = 1; j < c.stations.size(); ++j) {
    const double spacing = distance(c.stations[j].base_point, c.stations[j - 1].base_point);
    if (!(spacing > 0.0)) {
      throw ValidationError("station " + std::to_string(j) + ": coincides with previous station");
    }
    if (spacing > 30.0) {
      c.load_warnings.push_back("station " + std::to_string(j) + ": spacing " +
                                std::to_string(spacing) + " m exceeds 30 m");
    }
  }
  for (std::size_t b = 0; b < c.boxes.size(); ++b) {
    if (!(c.boxes[b].lo.x <= c.boxes[b].hi.x && c.boxes[b].lo.y <= c.boxes[b].hi.y)) {
      throw ValidationError("box " + std::to_string(b) + ": lo exceeds hi");
    }
  }
  if (c.r_min < 0.0) {
    throw ValidationError("corridor: r_min must be nonnegative");
  }
  if (c.initial) {
    if (c.initial->points.size() != c.boxes.size() || c.initial->radii.size() != c.boxes.size()) {
      throw ValidationError("initial: needs one point and one radius per box");
    }
  }
  validate_valign_config(c.design, c.stations.size());
}

/// Point on the cross-section line L_j(t) = (1-t) U_j + t V_j, t unrestricted.
inline Vec2 cross_section_point(const Station& st, double t) {
  return (1.0 - t) * st.left_end + t * st.right_end;
}

/// Affine map from t in [0,1] to the signed lateral offset range.
/// Out-of-corridor t yields nullopt; the caller applies the barrier.
inline std::optional<double> lateral_offset_of_t(const Station& st, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    return std::nullopt;
  }
  return st.min_offset() + t * (st.max_offset() - st.min_offset());
}

/// Ground elevation at parameter t, linearly interpolated between the two
/// samples bracketing the mapped offset. Exact at sample offsets.
inline std::optional<double> ground_elevation(const Station& st, double t) {
  const auto offset = lateral_offset_of_t(st, t);
  if (!offset) {
    return std::nullopt;
  }
  const auto& ss = st.samples;
  auto hi = std::lower_bound(ss.begin(), ss.end(), *offset,
                             [](const GroundSample& s, double o) { return s.lateral_offset < o; });
  if (hi == ss.end()) {
    return ss.back().elevation;
  }
  if (hi == ss.begin() || hi->lateral_offset == *offset) {
    return hi->elevation;
  }
  const auto lo = hi - 1;
  const double w = (*offset - lo->lateral_offset) / (hi->lateral_offset - lo->lateral_offset);
  return lo->elevation + w * (hi->elevation - lo->elevation);
}

}  // namespace roadopt
