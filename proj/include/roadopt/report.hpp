#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadopt/bilevel.hpp"

namespace roadopt {

/// Cost with thousands separators: 1897 -> "1,897". Non-integers keep two
/// decimals.
inline std::string format_cost(double v) {
  const bool negative = v < 0;
  const double a = std::abs(v);
  const double rounded = std::round(a);
  const bool integral = std::abs(a - rounded) < 1e-9;
  char buf[64];
  std::snprintf(buf, sizeof buf, integral ? "%.0f" : "%.2f", a);
  std::string digits(buf);
  const std::size_t dot = digits.find('.');
  std::string intpart = dot == std::string::npos ? digits : digits.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : digits.substr(dot);
  std::string grouped;
  for (std::size_t i = 0; i < intpart.size(); ++i) {
    if (i > 0 && (intpart.size() - i) % 3 == 0) grouped += ',';
    grouped += intpart[i];
  }
  return (negative ? "-" : "") + grouped + frac;
}

/// "28.3%" style; one decimal, as in the benchmark tables.
inline std::string format_percent(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

/// Signed percent with an explicit plus: "+5.2%" / "-4.6%".
inline std::string format_signed_percent(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.1f%%", pct);
  return buf;
}

inline std::string table2_header() {
  return "name           initial      optimized    improvement  evaluations  wall-clock (s)";
}

inline std::string table2_row(const std::string& name, const OptimizationReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-12s %-12s %-12s %-12zu %.1f", name.c_str(),
                format_cost(r.initial_cost).c_str(), format_cost(r.optimized_cost).c_str(),
                format_percent(r.improvement_percent()).c_str(), r.evaluations, r.wall_seconds);
  return buf;
}

/// One deterministic-vs-stochastic comparison run. Positive cost difference
/// means the stochastic run found a cheaper optimum; positive evaluation
/// difference means it needed fewer evaluations.
struct ComparisonRow {
  std::size_t run = 0;
  double det_cost = 0.0;
  double stoch_cost = 0.0;
  std::size_t det_evals = 0;
  std::size_t stoch_evals = 0;

  double cost_diff_percent() const {
    return det_cost == 0.0 ? 0.0 : (det_cost - stoch_cost) / det_cost * 100.0;
  }
  double eval_diff_percent() const {
    return det_evals == 0 ? 0.0
                          : (static_cast<double>(det_evals) - static_cast<double>(stoch_evals)) /
                                static_cast<double>(det_evals) * 100.0;
  }
};

inline std::string table3_header() {
  return "run   det cost     stoch cost   diff cost    det evals    stoch evals  diff evals";
}

inline std::string table3_row(const ComparisonRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "#%-4zu %-12s %-12s %-12s %-12zu %-12zu %s", r.run,
                format_cost(r.det_cost).c_str(), format_cost(r.stoch_cost).c_str(),
                format_signed_percent(r.cost_diff_percent()).c_str(), r.det_evals, r.stoch_evals,
                format_signed_percent(r.eval_diff_percent()).c_str());
  return buf;
}

struct WinTieCounts {
  double tolerance_percent = 0.0;
  std::size_t det_wins = 0;
  std::size_t stoch_wins = 0;
  std::size_t ties = 0;
};

/// Counting rule of the solver comparison: differences within +-tol tie;
/// beyond it the sign decides the winner.
inline WinTieCounts count_wins(const std::vector<double>& cost_diffs_percent, double tol_percent) {
  WinTieCounts c;
  c.tolerance_percent = tol_percent;
  for (const double d : cost_diffs_percent) {
    if (std::abs(d) <= tol_percent) {
      ++c.ties;
    } else if (d > 0) {
      ++c.stoch_wins;
    } else {
      ++c.det_wins;
    }
  }
  return c;
}

/// Win/tie table over +-1% .. +-10%. Ties are nondecreasing in tolerance.
inline std::vector<WinTieCounts> tolerance_sweep(const std::vector<double>& cost_diffs_percent) {
  std::vector<WinTieCounts> rows;
  for (int tol = 1; tol <= 10; ++tol) {
    rows.push_back(count_wins(cost_diffs_percent, static_cast<double>(tol)));
  }
  return rows;
}

inline std::string table4_header() {
  return "tolerance  det wins   stoch wins ties";
}

inline std::string table4_row(const WinTieCounts& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "+-%-8.0f %-10zu %-10zu %zu", c.tolerance_percent, c.det_wins,
                c.stoch_wins, c.ties);
  return buf;
}

inline nlohmann::ordered_json alignment_to_json(const Alignment& a) {
  nlohmann::ordered_json j;
  j["points"] = nlohmann::ordered_json::array();
  for (const AlignmentPoint& p : a.points) {
    j["points"].push_back({p.point.x, p.point.y});
  }
  j["radii"] = nlohmann::ordered_json::array();
  for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
    j["radii"].push_back(a.points[i].radius);
  }
  return j;
}

/// Stable report schema, documented in the README.
inline nlohmann::ordered_json report_to_json(const OptimizationReport& r) {
  nlohmann::ordered_json j;
  j["solver"] = r.solver_id;
  j["seed"] = r.seed;
  j["initial_cost"] = r.initial_cost;
  j["optimized_cost"] = r.optimized_cost;
  j["improvement_percent"] = r.improvement_percent();
  j["evaluations"] = r.evaluations;
  j["inner_solves"] = r.inner_solves;
  j["cache_hits"] = r.run.cache_hits;
  j["wall_seconds"] = r.wall_seconds;
  j["termination"] = r.run.termination == Termination::MinStep ? "min_step" : "eval_budget";
  j["alignment"] = alignment_to_json(r.best_alignment);
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& [evals, cost] : r.run.trace) {
    trace.push_back({evals, cost});
  }
  j["trace"] = trace;
  return j;
}

}  // namespace roadopt
