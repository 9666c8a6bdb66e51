#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadopt/dfo.hpp"
#include "roadopt/feasibility.hpp"
#include "roadopt/geometry.hpp"
#include "roadopt/terrain.hpp"
#include "roadopt/valign.hpp"

namespace roadopt {

/// Flat outer variable vector ((x_1,y_1,r_1),...,(x_{n-2},y_{n-2},r_{n-2})).
/// Endpoints are fixed and excluded.
using OuterVector = std::vector<double>;

inline OuterVector pack(const Alignment& a) {
  OuterVector v;
  v.reserve(3 * (a.points.size() - 2));
  for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
    v.push_back(a.points[i].point.x);
    v.push_back(a.points[i].point.y);
    v.push_back(a.points[i].radius);
  }
  return v;
}

inline Alignment unpack(const Corridor& corridor, const OuterVector& v) {
  const std::size_t interior = corridor.boxes.size();
  if (v.size() != 3 * interior) {
    throw std::invalid_argument("unpack: expected vector of dimension " +
                                std::to_string(3 * interior) + ", got " +
                                std::to_string(v.size()));
  }
  Alignment a;
  a.points.reserve(interior + 2);
  a.points.push_back({corridor.start_point, 0.0});
  for (std::size_t i = 0; i < interior; ++i) {
    a.points.push_back({{v[3 * i], v[3 * i + 1]}, v[3 * i + 2]});
  }
  a.points.push_back({corridor.end_point, 0.0});
  return a;
}

/// Engineer-provided starting alignment when present, else box centers with
/// the minimum radius.
inline Alignment baseline_alignment(const Corridor& corridor) {
  Alignment a;
  a.points.push_back({corridor.start_point, 0.0});
  if (corridor.initial) {
    for (std::size_t i = 0; i < corridor.initial->points.size(); ++i) {
      a.points.push_back({corridor.initial->points[i], corridor.initial->radii[i]});
    }
  } else {
    for (const Box& box : corridor.boxes) {
      a.points.push_back({box.center(), corridor.r_min});
    }
  }
  a.points.push_back({corridor.end_point, 0.0});
  return a;
}

/// Full evaluation result; kept separate from EvalOutcome so callers can
/// inspect the inner solution and the feasibility report.
struct Evaluation {
  EvalOutcome outcome;
  FeasibilityReport feasibility;
  VAlignOutcome inner;  // valid when the inner solve ran
  bool inner_ran = false;
};

/// The inner problem for an already-checked candidate: section chainages are
/// the station crossing chainages, elevations sampled at the crossing t_j.
inline VAlignProblem make_valign_problem(const Corridor& corridor,
                                         const FeasibilityReport& report) {
  VAlignProblem problem;
  problem.config = corridor.design;
  problem.chainages = report.crossing_chainages;
  problem.elevations.reserve(corridor.stations.size());
  for (std::size_t j = 0; j < corridor.stations.size(); ++j) {
    const auto elev = ground_elevation(corridor.stations[j], *report.containment[j].t);
    problem.elevations.push_back(*elev);
  }
  return problem;
}

/// f(X): outer constraints first; any violation skips the inner solve and
/// returns the barrier verdict. Pure function of (corridor, v).
inline Evaluation evaluate_full(const Corridor& corridor, const OuterVector& v) {
  Evaluation ev;
  const Alignment a = unpack(corridor, v);
  ev.feasibility = evaluate_feasibility(corridor, a);
  if (!ev.feasibility.feasible) {
    ev.outcome = EvalOutcome::infeasible(/*skipped=*/true);
    return ev;
  }
  ev.inner = valign_cost(make_valign_problem(corridor, ev.feasibility));
  ev.inner_ran = true;
  if (ev.inner.status != VAlignStatus::Optimal) {
    ev.outcome = EvalOutcome::infeasible(/*skipped=*/false);
    return ev;
  }
  ev.outcome = EvalOutcome::finite(ev.inner.cost);
  return ev;
}

inline EvalOutcome evaluate(const Corridor& corridor, const OuterVector& v) {
  return evaluate_full(corridor, v).outcome;
}

inline BlackBox make_blackbox(const Corridor& corridor) {
  return [&corridor](const std::vector<double>& v) { return evaluate(corridor, v); };
}

enum class SolverKind { Deterministic, Stochastic };

struct OptimizeConfig {
  SolverKind solver = SolverKind::Deterministic;
  SearchConfig search;
  std::uint64_t seed = 0;
};

/// Run summary in the shape of the benchmark tables: costs, improvement,
/// evaluation accounting and the winning alignment.
struct OptimizationReport {
  double initial_cost = 0.0;
  double optimized_cost = 0.0;
  std::size_t evaluations = 0;
  std::size_t inner_solves = 0;
  double wall_seconds = 0.0;
  Alignment best_alignment;
  std::string solver_id;
  std::uint64_t seed = 0;
  RunResult run;

  double improvement_percent() const {
    return initial_cost == 0.0 ? 0.0
                               : (initial_cost - optimized_cost) / initial_cost * 100.0;
  }
};

/// Optimizes the corridor's alignment starting from the baseline.
inline OptimizationReport optimize(const Corridor& corridor, const OptimizeConfig& cfg) {
  const Alignment baseline = baseline_alignment(corridor);
  const OuterVector x0 = pack(baseline);
  const BlackBox f = make_blackbox(corridor);

  const EvalOutcome base = f(x0);
  if (!base.feasible) {
    throw std::runtime_error(
        "optimize: baseline alignment is infeasible; repair the corridor's boxes, "
        "radii or initial alignment before optimizing");
  }

  OptimizationReport report;
  report.initial_cost = base.cost;
  report.seed = cfg.seed;
  report.solver_id = cfg.solver == SolverKind::Deterministic ? "det" : "stoch";

  const auto t0 = std::chrono::steady_clock::now();
  report.run = cfg.solver == SolverKind::Deterministic
                   ? pattern_search_deterministic(f, x0, cfg.search)
                   : pattern_search_stochastic(f, x0, cfg.search, cfg.seed);
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  report.optimized_cost = report.run.best_cost;
  report.evaluations = report.run.evaluations;
  report.inner_solves = report.run.inner_solves;
  report.best_alignment = unpack(corridor, report.run.best_point);
  return report;
}

}  // namespace roadopt
