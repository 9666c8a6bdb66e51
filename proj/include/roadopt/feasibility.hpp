#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "roadopt/geometry.hpp"
#include "roadopt/terrain.hpp"

namespace roadopt {

/// Signed per-coordinate box violation: 0 inside, positive meters outside.
struct BoxViolation {
  double dx = 0.0;
  double dy = 0.0;

  bool ok() const { return dx == 0.0 && dy == 0.0; }
};

struct ContainmentEntry {
  std::optional<double> t;  // crossing parameter; nullopt when no crossing exists
  bool inside = false;      // t present and within [0,1]
};

/// Verdict of the outer problem's explicit constraints, with margins.
/// feasible holds iff every margin is >= 0 (ties allowed), every station
/// crossing lands in [0,1], and the path build succeeded.
struct FeasibilityReport {
  std::vector<double> continuity_margins;  // one per leg, -inf when degenerate
  std::vector<double> radius_margins;      // r_i - r_min per interior point
  std::vector<BoxViolation> box_violations;
  std::vector<ContainmentEntry> containment;
  bool feasible = false;

  std::optional<BuildError> build_error;
  // Kept so callers do not rebuild; crossing chainages are strictly increasing.
  std::optional<Path> path;
  std::vector<double> crossing_chainages;
};

/// Tangent length at each alignment point; +inf marks degenerate geometry
/// (turn too sharp or coincident neighbours) where Eq-style margins lose meaning.
namespace detail {
inline std::vector<double> tangent_lengths(const Alignment& a) {
  const std::size_t n = a.points.size();
  std::vector<double> lt(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 u = a.points[i - 1].point - a.points[i].point;
    const Vec2 v = a.points[i + 1].point - a.points[i].point;
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu <= 1e-9 || nv <= 1e-9) {
      lt[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    const double theta = std::acos(c);
    if (theta >= kPi - kStraightTolerance || a.points[i].radius <= 0.0) {
      lt[i] = 0.0;
    } else if (theta <= kMinTurnAngle) {
      lt[i] = std::numeric_limits<double>::infinity();
    } else {
      lt[i] = a.points[i].radius / std::tan(theta / 2.0);
    }
  }
  return lt;
}
}  // namespace detail

/// Continuity margins |P_i - P_{i-1}| - |P_{i-1} - F_{i-1}| - |P_i - E_i| for
/// every leg i = 1..n-1, with F_0 = P_0 and E_{n-1} = P_{n-1}. Degenerate
/// tangent geometry yields -inf.
inline std::vector<double> check_continuity(const Alignment& a) {
  const auto lt = detail::tangent_lengths(a);
  std::vector<double> margins;
  margins.reserve(a.points.size() - 1);
  for (std::size_t i = 1; i < a.points.size(); ++i) {
    const double leg = distance(a.points[i].point, a.points[i - 1].point);
    const double used = lt[i - 1] + lt[i];
    margins.push_back(std::isinf(used) ? -std::numeric_limits<double>::infinity() : leg - used);
  }
  return margins;
}

/// r_i - r_min per interior point.
inline std::vector<double> check_radius(const Alignment& a, double r_min) {
  std::vector<double> margins;
  for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
    margins.push_back(a.points[i].radius - r_min);
  }
  return margins;
}

inline std::vector<BoxViolation> check_boxes(const Alignment& a, const std::vector<Box>& boxes) {
  if (boxes.size() + 2 != a.points.size()) {
    throw ValidationError("check_boxes: box count must be n-2");
  }
  std::vector<BoxViolation> v(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Vec2 p = a.points[i + 1].point;
    v[i].dx = std::max({0.0, boxes[i].lo.x - p.x, p.x - boxes[i].hi.x});
    v[i].dy = std::max({0.0, boxes[i].lo.y - p.y, p.y - boxes[i].hi.y});
  }
  return v;
}

/// Station crossings in travel order; out-of-[0,1] or missing crossings flag
/// the alignment as leaving the corridor.
inline std::vector<ContainmentEntry> check_containment(const Path& path, const Corridor& corridor) {
  std::vector<ContainmentEntry> out;
  out.reserve(corridor.stations.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (const Station& st : corridor.stations) {
    ContainmentEntry entry;
    if (const auto crossing = path_station_parameter(path, st, prev)) {
      entry.t = crossing->t;
      entry.inside = crossing->t >= 0.0 && crossing->t <= 1.0;
      prev = crossing->chainage;
    }
    out.push_back(entry);
  }
  return out;
}

/// Runs every outer-level check for one candidate alignment.
inline FeasibilityReport evaluate_feasibility(const Corridor& corridor, const Alignment& a) {
  FeasibilityReport report;
  report.continuity_margins = check_continuity(a);
  report.radius_margins = check_radius(a, corridor.r_min);
  report.box_violations = check_boxes(a, corridor.boxes);

  bool ok = true;
  for (const double m : report.continuity_margins) ok = ok && m >= 0.0;
  for (const double m : report.radius_margins) ok = ok && m >= 0.0;
  for (const BoxViolation& v : report.box_violations) ok = ok && v.ok();

  auto built = build_path(a);
  if (auto* err = std::get_if<BuildError>(&built)) {
    report.build_error = *err;
    report.feasible = false;
    return report;
  }
  report.path = std::move(std::get<Path>(built));

  double prev = -std::numeric_limits<double>::infinity();
  for (const Station& st : corridor.stations) {
    ContainmentEntry entry;
    if (const auto crossing = path_station_parameter(*report.path, st, prev)) {
      entry.t = crossing->t;
      entry.inside = crossing->t >= 0.0 && crossing->t <= 1.0;
      report.crossing_chainages.push_back(crossing->chainage);
      prev = crossing->chainage;
    }
    report.containment.push_back(entry);
    ok = ok && entry.inside;
  }

  report.feasible = ok;
  return report;
}

}  // namespace roadopt
