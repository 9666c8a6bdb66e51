#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadopt/geometry.hpp"
#include "roadopt/terrain.hpp"

namespace roadopt {

struct RenderSpec {
  double canvas_width = 900.0;   // px
  double canvas_height = 600.0;  // px
  double contour_interval = 1.0; // m
  bool draw_boundary = true;
};

inline void validate_render_spec(const RenderSpec& s) {
  if (!(s.canvas_width > 0 && s.canvas_height > 0)) {
    throw std::invalid_argument("render: canvas must be positive");
  }
  if (!(s.contour_interval > 0)) {
    throw std::invalid_argument("render: contour interval must be positive");
  }
}

namespace renderdetail {

/// Uniform world-to-canvas transform with a margin and a y flip.
struct Transform {
  double scale = 1.0;
  Vec2 world_min;
  double canvas_height = 0.0;
  double margin = 0.0;

  Vec2 operator()(Vec2 w) const {
    return {margin + (w.x - world_min.x) * scale,
            canvas_height - margin - (w.y - world_min.y) * scale};
  }
};

inline Transform fit_transform(const Corridor& corridor, const RenderSpec& spec) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x, max_x = -min_x, max_y = -min_x;
  const auto extend = [&](Vec2 p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const Station& st : corridor.stations) {
    extend(st.left_end);
    extend(st.right_end);
  }
  extend(corridor.start_point);
  extend(corridor.end_point);

  Transform t;
  t.margin = 0.04 * std::min(spec.canvas_width, spec.canvas_height);
  const double usable_w = spec.canvas_width - 2 * t.margin;
  const double usable_h = spec.canvas_height - 2 * t.margin;
  const double span_x = std::max(1e-9, max_x - min_x);
  const double span_y = std::max(1e-9, max_y - min_y);
  t.scale = std::min(usable_w / span_x, usable_h / span_y);
  t.world_min = {min_x, min_y};
  t.canvas_height = spec.canvas_height;
  return t;
}

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string svg_point(const Transform& tr, Vec2 w) {
  const Vec2 p = tr(w);
  return px(p.x) + " " + px(p.y);
}

/// Marching squares on the station x offset-parameter grid. Emits world-space
/// segments per contour level.
inline std::vector<std::pair<Vec2, Vec2>> contour_segments(const Corridor& corridor, double level,
                                                           std::size_t lateral_nodes) {
  std::vector<std::pair<Vec2, Vec2>> segments;
  const std::size_t rows = corridor.stations.size();
  const std::size_t cols = lateral_nodes;

  const auto t_of = [&](std::size_t k) {
    return static_cast<double>(k) / static_cast<double>(cols - 1);
  };
  const auto elev = [&](std::size_t j, std::size_t k) {
    return *ground_elevation(corridor.stations[j], t_of(k));
  };
  const auto world = [&](std::size_t j, std::size_t k) {
    return cross_section_point(corridor.stations[j], t_of(k));
  };
  // Cell corners: a=(j,k) b=(j,k+1) c=(j+1,k+1) d=(j+1,k). Crossing points are
  // linearly interpolated along the edges in world space.
  for (std::size_t j = 0; j + 1 < rows; ++j) {
    for (std::size_t k = 0; k + 1 < cols; ++k) {
      const double va = elev(j, k), vb = elev(j, k + 1), vc = elev(j + 1, k + 1),
                   vd = elev(j + 1, k);
      const Vec2 pa = world(j, k), pb = world(j, k + 1), pc = world(j + 1, k + 1),
                 pd = world(j + 1, k);
      const auto cut = [&](double v0, double v1, Vec2 p0, Vec2 p1) {
        const double w = (level - v0) / (v1 - v0);
        return p0 + w * (p1 - p0);
      };
      std::vector<Vec2> hits;
      if ((va < level) != (vb < level)) hits.push_back(cut(va, vb, pa, pb));
      if ((vb < level) != (vc < level)) hits.push_back(cut(vb, vc, pb, pc));
      if ((vd < level) != (vc < level)) hits.push_back(cut(vd, vc, pd, pc));
      if ((va < level) != (vd < level)) hits.push_back(cut(va, vd, pa, pd));
      if (hits.size() == 2) {
        segments.emplace_back(hits[0], hits[1]);
      } else if (hits.size() == 4) {
        // saddle: pair edges by order, good enough for display contours
        segments.emplace_back(hits[0], hits[1]);
        segments.emplace_back(hits[2], hits[3]);
      }
    }
  }
  return segments;
}

inline std::string piece_path_d(const Transform& tr, const PathPiece& piece) {
  if (const auto* seg = std::get_if<TangentSegment>(&piece.shape)) {
    return "M " + svg_point(tr, seg->from) + " L " + svg_point(tr, seg->to);
  }
  const auto& arc = std::get<CircularArc>(piece.shape);
  const Vec2 from = piece.point_at(0.0);
  const Vec2 to = piece.point_at(piece.length);
  const double r_px = arc.radius * tr.scale;
  const int large = std::abs(arc.sweep) > kPi ? 1 : 0;
  // canvas y points down, so a world-ccw sweep renders clockwise
  const int sweep_flag = arc.sweep > 0 ? 1 : 0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "M %s A %.2f %.2f 0 %d %d %s", svg_point(tr, from).c_str(), r_px,
                r_px, large, sweep_flag, svg_point(tr, to).c_str());
  return buf;
}

}  // namespace renderdetail

/// Corridor boundary, terrain contours and the given alignments as one SVG
/// document. Alignment strokes cycle solid/dashed/dotted in input order, so
/// the first (baseline) is solid black. Each path piece becomes one element.
inline std::string render_svg(const Corridor& corridor, const std::vector<Alignment>& alignments,
                              const RenderSpec& spec = {}) {
  validate_render_spec(spec);
  const renderdetail::Transform tr = renderdetail::fit_transform(corridor, spec);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + renderdetail::px(spec.canvas_width) +
         "\" height=\"" + renderdetail::px(spec.canvas_height) + "\" viewBox=\"0 0 " +
         renderdetail::px(spec.canvas_width) + " " + renderdetail::px(spec.canvas_height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // terrain contours
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t lateral_nodes = 2;
  for (const Station& st : corridor.stations) {
    lateral_nodes = std::max(lateral_nodes, st.samples.size());
    for (const GroundSample& s : st.samples) {
      lo = std::min(lo, s.elevation);
      hi = std::max(hi, s.elevation);
    }
  }
  const double first_level = std::ceil(lo / spec.contour_interval) * spec.contour_interval;
  for (double level = first_level; level < hi; level += spec.contour_interval) {
    const auto segments = renderdetail::contour_segments(corridor, level, lateral_nodes);
    if (segments.empty()) continue;
    std::string d;
    for (const auto& [a, b] : segments) {
      d += "M " + renderdetail::svg_point(tr, a) + " L " + renderdetail::svg_point(tr, b) + " ";
    }
    svg += "<path class=\"contour\" d=\"" + d + "\" stroke=\"#b8b8b8\" stroke-width=\"0.7\" fill=\"none\"/>\n";
  }

  if (spec.draw_boundary) {
    std::string d = "M";
    for (const Station& st : corridor.stations) {
      d += " " + renderdetail::svg_point(tr, st.left_end);
    }
    for (auto it = corridor.stations.rbegin(); it != corridor.stations.rend(); ++it) {
      d += " " + renderdetail::svg_point(tr, it->right_end);
    }
    d += " Z";
    svg += "<path class=\"boundary\" d=\"" + d + "\" stroke=\"#404040\" stroke-width=\"1.2\" fill=\"none\"/>\n";
  }

  static const char* kDashes[] = {"", "8 5", "2 4"};  // solid, dashed, dotted
  for (std::size_t idx = 0; idx < alignments.size(); ++idx) {
    auto built = build_path(alignments[idx]);
    if (std::holds_alternative<BuildError>(built)) {
      continue;  // unrepresentable candidate, skip silently in the drawing
    }
    const Path& path = std::get<Path>(built);
    const char* dash = kDashes[idx % 3];
    for (const PathPiece& piece : path.pieces) {
      svg += "<path class=\"alignment\" d=\"" + renderdetail::piece_path_d(tr, piece) +
             "\" stroke=\"black\" stroke-width=\"1.6\" fill=\"none\"";
      if (dash[0] != '\0') {
        svg += " stroke-dasharray=\"" + std::string(dash) + "\"";
      }
      svg += "/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace roadopt
