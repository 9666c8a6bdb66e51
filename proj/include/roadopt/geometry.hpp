#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "roadopt/geom2d.hpp"
#include "roadopt/terrain.hpp"

namespace roadopt {

inline constexpr double kPi = 3.14159265358979323846;

/// Turns sharper than this (theta near 0 is a U-turn at a point) are degenerate.
inline constexpr double kMinTurnAngle = 1e-3;
/// Theta this close to pi is treated as straight-through and the arc is elided.
inline constexpr double kStraightTolerance = 1e-9;

/// An intersection point with its radius of curvature.
struct AlignmentPoint {
  Vec2 point;
  double radius = 0.0;
};

/// Horizontal alignment: ((P_0,0),(P_1,r_1),...,(P_{n-1},0)).
struct Alignment {
  std::vector<AlignmentPoint> points;

  std::size_t size() const { return points.size(); }
};

inline void validate_alignment(const Alignment& a) {
  if (a.points.size() < 2) {
    throw ValidationError("alignment: needs at least 2 points");
  }
  if (a.points.front().radius != 0.0 || a.points.back().radius != 0.0) {
    throw ValidationError("alignment: endpoint radii must be 0");
  }
  for (std::size_t i = 1; i < a.points.size(); ++i) {
    if (distance(a.points[i].point, a.points[i - 1].point) <= 1e-9) {
      throw ValidationError("alignment: points " + std::to_string(i - 1) + " and " +
                            std::to_string(i) + " coincide");
    }
  }
}

/// Geometry that cannot form a valid linear-circular path. `index` is the
/// intersection point (or leg) at fault; the outer solver treats this as
/// infeasible rather than fatal.
struct BuildError {
  enum class Kind { DegenerateTurn, TangentOverrun, Continuity, CoincidentPoints };
  Kind kind;
  std::size_t index = 0;

  std::string message() const {
    switch (kind) {
      case Kind::DegenerateTurn: return "degenerate turn at point " + std::to_string(index);
      case Kind::TangentOverrun: return "tangent overrun at point " + std::to_string(index);
      case Kind::Continuity:     return "continuity violation at point " + std::to_string(index);
      case Kind::CoincidentPoints: return "coincident points at " + std::to_string(index);
    }
    return "build error";
  }
};

struct TangentSegment {
  Vec2 from;
  Vec2 to;
};

struct CircularArc {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;  // radians, angle of (start point - center)
  double sweep = 0.0;        // signed radians, positive = counter-clockwise
};

struct PathPiece {
  std::variant<TangentSegment, CircularArc> shape;
  double start_chainage = 0.0;
  double length = 0.0;

  bool is_arc() const { return std::holds_alternative<CircularArc>(shape); }

  Vec2 point_at(double local_chainage) const {
    if (const auto* seg = std::get_if<TangentSegment>(&shape)) {
      return seg->from + (local_chainage / length) * (seg->to - seg->from);
    }
    const auto& arc = std::get<CircularArc>(shape);
    const double phi = arc.start_angle + (arc.sweep < 0 ? -1.0 : 1.0) * local_chainage / arc.radius;
    return arc.center + Vec2{arc.radius * std::cos(phi), arc.radius * std::sin(phi)};
  }

  /// Unit travel direction at a local chainage.
  Vec2 direction_at(double local_chainage) const {
    if (const auto* seg = std::get_if<TangentSegment>(&shape)) {
      return unit(seg->to - seg->from);
    }
    const auto& arc = std::get<CircularArc>(shape);
    const double sgn = arc.sweep < 0 ? -1.0 : 1.0;
    const double phi = arc.start_angle + sgn * local_chainage / arc.radius;
    return {-sgn * std::sin(phi), sgn * std::cos(phi)};
  }
};

/// Realized linear-circular curve with chainage bookkeeping.
struct Path {
  std::vector<PathPiece> pieces;
  double total_length = 0.0;

  Vec2 start() const { return pieces.front().point_at(0.0); }
  Vec2 end() const { return pieces.back().point_at(pieces.back().length); }
};

/// Angle at P between the legs toward P_prev and P_next, in (0, pi].
inline double turn_angle(Vec2 p_prev, Vec2 p, Vec2 p_next) {
  const Vec2 u = p_prev - p;
  const Vec2 v = p_next - p;
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu <= 1e-9 || nv <= 1e-9 || distance(p_prev, p_next) <= 1e-9) {
    throw ValidationError("turn_angle: coincident input points");
  }
  const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

/// Distance from the intersection point to each tangential point, l_t = r / tan(theta/2).
inline double tangent_length(double r, double theta) {
  if (theta >= kPi - kStraightTolerance) {
    return 0.0;
  }
  if (r > 0.0 && theta <= kMinTurnAngle) {
    throw ValidationError("tangent_length: turn too sharp (theta <= 1e-3 rad)");
  }
  return r / std::tan(theta / 2.0);
}

struct TangentPoints {
  Vec2 entry;  // E_i, on segment P_prev--P
  Vec2 exit;   // F_i, on segment P--P_next
};

/// E_i = P + l_t e_U, F_i = P + l_t e_V.
inline TangentPoints tangent_points(Vec2 p_prev, Vec2 p, Vec2 p_next, double r) {
  const double theta = turn_angle(p_prev, p, p_next);
  const double lt = tangent_length(r, theta);
  const Vec2 u = p_prev - p;
  const Vec2 v = p_next - p;
  if (lt > norm(u) || lt > norm(v)) {
    throw ValidationError("tangent_points: tangent length exceeds a leg");
  }
  return {p + lt * unit(u), p + lt * unit(v)};
}

/// Foot of the angle bisector from P on segment P_prev--P_next (Q_i).
inline Vec2 bisector_foot(Vec2 p_prev, Vec2 p, Vec2 p_next) {
  const Vec2 u = p_prev - p;
  const Vec2 v = p_next - p;
  const Vec2 w = p_next - p_prev;
  const double theta = turn_angle(p_prev, p, p_next);
  if (theta >= kPi - kStraightTolerance) {
    throw ValidationError("bisector_foot: collinear points form no triangle");
  }
  const double lb = norm(u) * norm(w) / (norm(u) + norm(v));
  return p_prev + lb * unit(w);
}

/// Center of the circular curve at P: C_i = P + l_x e_X with l_x = l_t / cos(theta/2).
inline Vec2 curve_center(Vec2 p_prev, Vec2 p, Vec2 p_next, double r) {
  const double theta = turn_angle(p_prev, p, p_next);
  const double lt = tangent_length(r, theta);
  if (lt > norm(p_prev - p) || lt > norm(p_next - p)) {
    throw ValidationError("curve_center: tangent length exceeds a leg");
  }
  const double lx = lt / std::cos(theta / 2.0);
  const Vec2 q = bisector_foot(p_prev, p, p_next);
  return p + lx * unit(q - p);
}

namespace detail {

struct CurveGeometry {
  bool has_arc = false;
  double tangent_len = 0.0;
  TangentPoints tangents;   // both equal to P when has_arc is false
  Vec2 center;
  double sweep = 0.0;       // signed
};

/// Per-interior-point tangent geometry; BuildError instead of exceptions so the
/// caller can report the offending index.
inline std::variant<CurveGeometry, BuildError> curve_geometry(Vec2 p_prev, Vec2 p, Vec2 p_next,
                                                              double r, std::size_t index) {
  const Vec2 u = p_prev - p;
  const Vec2 v = p_next - p;
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu <= 1e-9 || nv <= 1e-9) {
    return BuildError{BuildError::Kind::CoincidentPoints, index};
  }
  const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
  const double theta = std::acos(c);

  CurveGeometry g;
  if (r <= 0.0 || theta >= kPi - kStraightTolerance) {
    g.tangents = {p, p};
    return g;  // straight through, arc elided
  }
  if (theta <= kMinTurnAngle) {
    return BuildError{BuildError::Kind::DegenerateTurn, index};
  }
  g.tangent_len = r / std::tan(theta / 2.0);
  if (g.tangent_len > nu || g.tangent_len > nv) {
    return BuildError{BuildError::Kind::TangentOverrun, index};
  }
  g.has_arc = true;
  g.tangents = {p + g.tangent_len * unit(u), p + g.tangent_len * unit(v)};
  const double lx = g.tangent_len / std::cos(theta / 2.0);
  const Vec2 w = p_next - p_prev;
  const double lb = nu * norm(w) / (nu + nv);
  const Vec2 q = p_prev + lb * unit(w);
  g.center = p + lx * unit(q - p);
  // Orientation from the turn of the travel directions, robust near collinear.
  const double turn = cross(p - p_prev, p_next - p);
  g.sweep = (turn >= 0.0 ? 1.0 : -1.0) * (kPi - theta);
  return g;
}

}  // namespace detail

/// Expands an alignment into tangent segments and circular arcs with chainage.
/// Zero-length pieces are elided; the result is G1-continuous.
inline std::variant<Path, BuildError> build_path(const Alignment& a) {
  validate_alignment(a);
  const auto& pts = a.points;
  const std::size_t n = pts.size();

  std::vector<detail::CurveGeometry> curves(n);
  curves[0].tangents = {pts[0].point, pts[0].point};
  curves[n - 1].tangents = {pts[n - 1].point, pts[n - 1].point};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    auto g = detail::curve_geometry(pts[i - 1].point, pts[i].point, pts[i + 1].point,
                                    pts[i].radius, i);
    if (auto* err = std::get_if<BuildError>(&g)) {
      return *err;
    }
    curves[i] = std::get<detail::CurveGeometry>(g);
  }

  // Tangent points must appear in travel order on every leg.
  for (std::size_t i = 1; i < n; ++i) {
    const double leg = distance(pts[i].point, pts[i - 1].point);
    const double used = curves[i - 1].tangent_len + curves[i].tangent_len;
    if (used > leg) {
      return BuildError{BuildError::Kind::Continuity, i};
    }
  }

  Path path;
  double chainage = 0.0;
  const auto push = [&](PathPiece piece) {
    if (piece.length <= 1e-12) {
      return;
    }
    piece.start_chainage = chainage;
    chainage += piece.length;
    path.pieces.push_back(piece);
  };

  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 from = curves[i - 1].tangents.exit;
    const Vec2 to = curves[i].tangents.entry;
    push({TangentSegment{from, to}, 0.0, distance(from, to)});
    if (curves[i].has_arc) {
      const Vec2 e = curves[i].tangents.entry;
      CircularArc arc;
      arc.center = curves[i].center;
      arc.radius = pts[i].radius;
      arc.start_angle = std::atan2(e.y - arc.center.y, e.x - arc.center.x);
      arc.sweep = curves[i].sweep;
      push({arc, 0.0, arc.radius * std::abs(arc.sweep)});
    }
  }
  if (path.pieces.empty()) {
    return BuildError{BuildError::Kind::Continuity, n - 1};
  }
  path.total_length = chainage;
  return path;
}

/// A crossing of a cross-section line, as the line parameter and path chainage.
struct StationCrossing {
  double t = 0.0;
  double chainage = 0.0;
};

namespace detail {

/// Whether angle phi lies on the arc sweep, and the arc-length position if so.
inline std::optional<double> arc_position(const CircularArc& arc, double phi) {
  double rel = phi - arc.start_angle;
  const double two_pi = 2.0 * kPi;
  rel = std::fmod(rel, two_pi);
  if (arc.sweep >= 0.0) {
    if (rel < 0) rel += two_pi;
    if (rel <= arc.sweep + 1e-9) return arc.radius * std::min(rel, arc.sweep);
  } else {
    if (rel > 0) rel -= two_pi;
    if (rel >= arc.sweep - 1e-9) return arc.radius * std::min(-rel, -arc.sweep);
  }
  return std::nullopt;
}

inline void collect_crossings(const PathPiece& piece, Vec2 u, Vec2 v,
                              std::vector<StationCrossing>& out) {
  const Vec2 d = v - u;
  if (const auto* seg = std::get_if<TangentSegment>(&piece.shape)) {
    const Vec2 e = seg->to - seg->from;
    const double denom = cross(d, e);
    if (std::abs(denom) < 1e-12) {
      return;  // parallel
    }
    const Vec2 rhs = seg->from - u;
    const double t = cross(rhs, e) / denom;  // parameter on the station line
    const double s = cross(rhs, d) / denom;  // parameter along the segment
    if (s >= -1e-9 && s <= 1.0 + 1e-9) {
      out.push_back({t, piece.start_chainage + std::clamp(s, 0.0, 1.0) * piece.length});
    }
    return;
  }
  const auto& arc = std::get<CircularArc>(piece.shape);
  // |u + t d - c|^2 = r^2
  const Vec2 m = u - arc.center;
  const double a = dot(d, d);
  const double b = 2.0 * dot(m, d);
  const double c = dot(m, m) - arc.radius * arc.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return;
  }
  const double sq = std::sqrt(disc);
  for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    const Vec2 x = u + t * d;
    const double phi = std::atan2(x.y - arc.center.y, x.x - arc.center.x);
    if (const auto pos = arc_position(arc, phi)) {
      out.push_back({t, piece.start_chainage + std::min(*pos, piece.length)});
    }
    if (disc == 0.0) {
      break;  // tangent line, single root
    }
  }
}

}  // namespace detail

/// First crossing of the station line strictly ahead of prev_chainage.
/// t may fall outside [0,1]; the caller applies the barrier. nullopt when the
/// path never crosses the line ahead of prev_chainage.
inline std::optional<StationCrossing> path_station_parameter(const Path& path, const Station& st,
                                                             double prev_chainage) {
  std::vector<StationCrossing> crossings;
  for (const PathPiece& piece : path.pieces) {
    detail::collect_crossings(piece, st.left_end, st.right_end, crossings);
  }
  std::optional<StationCrossing> best;
  for (const StationCrossing& c : crossings) {
    if (c.chainage > prev_chainage + 1e-9 && (!best || c.chainage < best->chainage)) {
      best = c;
    }
  }
  return best;
}

}  // namespace roadopt
