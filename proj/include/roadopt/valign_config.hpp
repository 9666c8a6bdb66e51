#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadopt {

/// External material source (borrow) or sink (waste) with one access section.
struct Pit {
  std::size_t access_section = 0;  // station index the pit connects to
  double unit_cost = 0.0;          // currency per m^3 moved through the access
  double capacity = 0.0;           // m^3
};

/// Design parameters of the vertical-alignment subproblem.
struct VAlignConfig {
  /// Spline layout: either a segment count (stations split evenly) or an
  /// explicit knot list of station indices. Consecutive segments share a knot.
  std::optional<std::size_t> segments;
  std::optional<std::vector<std::size_t>> knots;

  double grade_lo = -0.1;  // G_L, dimensionless slope
  double grade_hi = 0.1;   // G_U
  double cut_cost = 1.0;   // p, currency per m^3
  double fill_cost = 1.0;  // q, currency per m^3
  double haul_cost = 0.0;  // c^r, currency per m^3 per section-arc
  double road_width = 1.0; // w, meters
  std::vector<Pit> borrow;
  std::vector<Pit> waste;
  bool fix_ends = false;   // pin the spline to the ground at both endpoints
};

/// Knot station indices for n_s stations: g+1 entries from 0 to n_s-1.
inline std::vector<std::size_t> resolve_knots(const VAlignConfig& cfg, std::size_t n_stations) {
  if (cfg.knots) {
    return *cfg.knots;
  }
  std::size_t g = cfg.segments ? *cfg.segments : std::max<std::size_t>(1, n_stations / 10);
  g = std::min(g, n_stations - 1);  // a segment needs two distinct knot stations
  std::vector<std::size_t> knots(g + 1);
  for (std::size_t k = 0; k <= g; ++k) {
    knots[k] = (k * (n_stations - 1)) / g;
  }
  return knots;
}

inline void validate_valign_config(const VAlignConfig& cfg, std::size_t n_stations) {
  if (cfg.segments && cfg.knots) {
    throw std::invalid_argument("valign: give either segments or knots, not both");
  }
  if (cfg.segments && *cfg.segments < 1) {
    throw std::invalid_argument("valign: segments must be >= 1");
  }
  if (cfg.knots) {
    const auto& k = *cfg.knots;
    if (k.size() < 2 || k.front() != 0 || k.back() != n_stations - 1) {
      throw std::invalid_argument("valign: knots must run from 0 to the last station");
    }
    for (std::size_t i = 1; i < k.size(); ++i) {
      if (!(k[i] > k[i - 1])) {
        throw std::invalid_argument("valign: knots must be strictly increasing");
      }
    }
  }
  if (!(cfg.grade_lo < cfg.grade_hi)) {
    throw std::invalid_argument("valign: grade bounds must satisfy g_lo < g_hi");
  }
  if (cfg.cut_cost < 0 || cfg.fill_cost < 0 || cfg.haul_cost < 0) {
    throw std::invalid_argument("valign: costs must be nonnegative");
  }
  // With p + q = 0 a section could cut and fill simultaneously at no cost and
  // the volume split would be meaningless.
  if (!(cfg.cut_cost + cfg.fill_cost > 0)) {
    throw std::invalid_argument("valign: cut_cost + fill_cost must be positive");
  }
  for (const auto* pits : {&cfg.borrow, &cfg.waste}) {
    for (const Pit& p : *pits) {
      if (p.access_section >= n_stations) {
        throw std::invalid_argument("valign: pit access section out of range");
      }
      if (p.unit_cost < 0 || p.capacity < 0) {
        throw std::invalid_argument("valign: pit cost and capacity must be nonnegative");
      }
    }
  }
}

}  // namespace roadopt
