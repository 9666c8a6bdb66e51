#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "roadopt/lp.hpp"
#include "roadopt/valign_config.hpp"

namespace roadopt {

/// Inner-problem instance: per-section chainage and ground elevation along a
/// fixed horizontal alignment, plus the design parameters.
struct VAlignProblem {
  std::vector<double> chainages;   // s_i, strictly increasing, meters
  std::vector<double> elevations;  // h_i, meters
  VAlignConfig config;

  std::size_t sections() const { return chainages.size(); }
};

inline void validate_valign_problem(const VAlignProblem& p) {
  if (p.chainages.size() < 2 || p.chainages.size() != p.elevations.size()) {
    throw std::invalid_argument("valign: needs >= 2 sections with matching elevations");
  }
  for (std::size_t i = 1; i < p.chainages.size(); ++i) {
    if (!(p.chainages[i] > p.chainages[i - 1])) {
      throw std::invalid_argument("valign: chainages must be strictly increasing");
    }
  }
  validate_valign_config(p.config, p.chainages.size());
}

/// Tributary length of each section: half the distance to each neighbour.
inline std::vector<double> tributary_lengths(const std::vector<double>& s) {
  const std::size_t m = s.size();
  std::vector<double> len(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i == 0 ? s[0] : s[i - 1];
    const double right = i + 1 == m ? s[m - 1] : s[i + 1];
    len[i] = (right - left) / 2.0;
  }
  return len;
}

/// Optimal design profile and earthwork plan. The quadratic spline is stored
/// in the normalized abscissa z = (s - origin) / scale for conditioning;
/// value() and grade() evaluate in plain meters.
struct VAlignSolution {
  struct SegmentCoeffs {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;  // P(z) = a1 + a2 z + a3 z^2
  };
  std::vector<SegmentCoeffs> spline;
  std::vector<double> knot_chainages;  // g+1 entries bracketing the segments
  double origin = 0.0;                 // normalization offset
  double scale = 1.0;                  // normalization scale

  std::vector<double> offsets;        // u_i = P(s_i) - h_i
  std::vector<double> cut_volumes;    // V_i^+
  std::vector<double> fill_volumes;   // V_i^-
  std::vector<double> flow_forward;   // f_{i,i+1}, size m-1
  std::vector<double> flow_backward;  // f_{i+1,i}, size m-1
  std::vector<double> borrow_flows;   // per borrow pit
  std::vector<double> waste_flows;    // per waste pit
  double total_cost = 0.0;

  std::size_t segment_of(double s) const {
    for (std::size_t g = 1; g + 1 < knot_chainages.size(); ++g) {
      if (s < knot_chainages[g]) return g - 1;
    }
    return spline.size() - 1;
  }

  double value(double s) const {
    const auto& c = spline[segment_of(s)];
    const double z = (s - origin) / scale;
    return c.a1 + c.a2 * z + c.a3 * z * z;
  }

  double value_on(std::size_t g, double s) const {
    const double z = (s - origin) / scale;
    return spline[g].a1 + spline[g].a2 * z + spline[g].a3 * z * z;
  }

  double grade(double s) const { return grade_on(segment_of(s), s); }

  double grade_on(std::size_t g, double s) const {
    const double z = (s - origin) / scale;
    return (spline[g].a2 + 2.0 * spline[g].a3 * z) / scale;
  }
};

/// Column/row layout of the assembled LP, kept alongside it so the solution
/// can be unpacked and tests can count dimensions.
struct AssembledValign {
  LinearProgram lp;
  std::size_t sections = 0;
  std::size_t segments = 0;
  std::vector<std::size_t> knots;  // station indices, g+1 entries
  double origin = 0.0;
  double scale = 1.0;
  std::vector<double> tributary;

  // column offsets
  std::size_t col_spline = 0;   // 3 per segment
  std::size_t col_u = 0;        // per section
  std::size_t col_cut = 0;      // V+
  std::size_t col_fill = 0;     // V-
  std::size_t col_fwd = 0;      // forward flows, m-1
  std::size_t col_bwd = 0;      // backward flows, m-1
  std::size_t col_borrow = 0;
  std::size_t col_waste = 0;

  std::size_t segment_of_station(std::size_t i) const {
    for (std::size_t g = 1; g + 1 < knots.size(); ++g) {
      if (i < knots[g]) return g - 1;
    }
    return segments - 1;
  }
};

/// Builds the continuous relaxation: spline offsets, signed-volume coupling,
/// per-section flow conservation and capacity-bounded pit exchanges.
inline AssembledValign assemble(const VAlignProblem& problem) {
  validate_valign_problem(problem);
  const std::size_t m = problem.sections();
  const auto& s = problem.chainages;
  const auto& h = problem.elevations;
  const VAlignConfig& cfg = problem.config;

  AssembledValign out;
  out.sections = m;
  out.knots = resolve_knots(cfg, m);
  out.segments = out.knots.size() - 1;
  out.origin = s.front();
  out.scale = std::max(1.0, s.back() - s.front());
  out.tributary = tributary_lengths(s);

  const std::size_t g_count = out.segments;
  const std::size_t nb = cfg.borrow.size();
  const std::size_t nw = cfg.waste.size();

  out.col_spline = 0;
  out.col_u = 3 * g_count;
  out.col_cut = out.col_u + m;
  out.col_fill = out.col_cut + m;
  out.col_fwd = out.col_fill + m;
  out.col_bwd = out.col_fwd + (m - 1);
  out.col_borrow = out.col_bwd + (m - 1);
  out.col_waste = out.col_borrow + nb;
  const std::size_t n_vars = out.col_waste + nw;

  LinearProgram& lp = out.lp;
  lp.num_vars = n_vars;
  lp.cost.assign(n_vars, 0.0);
  lp.lower.assign(n_vars, 0.0);
  lp.upper.assign(n_vars, lpdetail::kInf);
  for (std::size_t j = 0; j < out.col_cut; ++j) {
    lp.lower[j] = -lpdetail::kInf;  // spline coefficients and offsets are free
  }
  for (std::size_t k = 0; k < nb; ++k) {
    lp.upper[out.col_borrow + k] = cfg.borrow[k].capacity;
  }
  for (std::size_t k = 0; k < nw; ++k) {
    lp.upper[out.col_waste + k] = cfg.waste[k].capacity;
  }

  for (std::size_t i = 0; i < m; ++i) {
    lp.cost[out.col_cut + i] = cfg.cut_cost;
    lp.cost[out.col_fill + i] = cfg.fill_cost;
  }
  for (std::size_t e = 0; e + 1 < m; ++e) {
    lp.cost[out.col_fwd + e] = cfg.haul_cost;
    lp.cost[out.col_bwd + e] = cfg.haul_cost;
  }
  for (std::size_t k = 0; k < nb; ++k) {
    lp.cost[out.col_borrow + k] = cfg.borrow[k].unit_cost;
  }
  for (std::size_t k = 0; k < nw; ++k) {
    lp.cost[out.col_waste + k] = cfg.waste[k].unit_cost;
  }

  std::size_t row = 0;
  const auto z_of = [&](double chainage) { return (chainage - out.origin) / out.scale; };
  const auto add = [&](std::size_t r, std::size_t c, double v) {
    if (v != 0.0) lp.entries.push_back({r, c, v});
  };
  const auto new_row = [&](RowSense sense, double rhs) {
    lp.senses.push_back(sense);
    lp.rhs.push_back(rhs);
    return row++;
  };

  // offset definition: P_g(s_i) - u_i = h_i
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t g = out.segment_of_station(i);
    const double z = z_of(s[i]);
    const std::size_t r = new_row(RowSense::Equal, h[i]);
    add(r, out.col_spline + 3 * g + 0, 1.0);
    add(r, out.col_spline + 3 * g + 1, z);
    add(r, out.col_spline + 3 * g + 2, z * z);
    add(r, out.col_u + i, -1.0);
  }

  // smoothness at interior knots: value and derivative agree
  for (std::size_t g = 1; g < g_count; ++g) {
    const double z = z_of(s[out.knots[g]]);
    std::size_t r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_spline + 3 * (g - 1) + 0, 1.0);
    add(r, out.col_spline + 3 * (g - 1) + 1, z);
    add(r, out.col_spline + 3 * (g - 1) + 2, z * z);
    add(r, out.col_spline + 3 * g + 0, -1.0);
    add(r, out.col_spline + 3 * g + 1, -z);
    add(r, out.col_spline + 3 * g + 2, -z * z);
    r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_spline + 3 * (g - 1) + 1, 1.0);
    add(r, out.col_spline + 3 * (g - 1) + 2, 2.0 * z);
    add(r, out.col_spline + 3 * g + 1, -1.0);
    add(r, out.col_spline + 3 * g + 2, -2.0 * z);
  }

  // grade bounds at both ends of every segment; P' is affine so this is exact
  for (std::size_t g = 0; g < g_count; ++g) {
    for (const std::size_t knot : {out.knots[g], out.knots[g + 1]}) {
      const double z = z_of(s[knot]);
      std::size_t r = new_row(RowSense::GreaterEqual, cfg.grade_lo * out.scale);
      add(r, out.col_spline + 3 * g + 1, 1.0);
      add(r, out.col_spline + 3 * g + 2, 2.0 * z);
      r = new_row(RowSense::LessEqual, cfg.grade_hi * out.scale);
      add(r, out.col_spline + 3 * g + 1, 1.0);
      add(r, out.col_spline + 3 * g + 2, 2.0 * z);
    }
  }

  // signed volume linking: V+ - V- + w l_i u_i = 0
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_cut + i, 1.0);
    add(r, out.col_fill + i, -1.0);
    add(r, out.col_u + i, cfg.road_width * out.tributary[i]);
  }

  // conservation of material at each section
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_cut + i, 1.0);
    add(r, out.col_fill + i, -1.0);
    if (i > 0) {
      add(r, out.col_fwd + (i - 1), 1.0);   // inflow from the left
      add(r, out.col_bwd + (i - 1), -1.0);  // outflow to the left
    }
    if (i + 1 < m) {
      add(r, out.col_fwd + i, -1.0);  // outflow to the right
      add(r, out.col_bwd + i, 1.0);   // inflow from the right
    }
    for (std::size_t k = 0; k < nb; ++k) {
      if (cfg.borrow[k].access_section == i) add(r, out.col_borrow + k, 1.0);
    }
    for (std::size_t k = 0; k < nw; ++k) {
      if (cfg.waste[k].access_section == i) add(r, out.col_waste + k, -1.0);
    }
  }

  if (cfg.fix_ends) {
    std::size_t r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_u + 0, 1.0);
    r = new_row(RowSense::Equal, 0.0);
    add(r, out.col_u + (m - 1), 1.0);
  }

  return out;
}

enum class VAlignStatus { Optimal, Infeasible, NumericalFailure };

struct VAlignOutcome {
  VAlignStatus status = VAlignStatus::NumericalFailure;
  double cost = 0.0;
  VAlignSolution solution;
};

/// Solves the inner problem. Infeasibility (e.g. grade bounds incompatible
/// with fixed ends) is a distinct outcome the outer level maps to the barrier.
inline VAlignOutcome valign_cost(const VAlignProblem& problem) {
  const AssembledValign a = assemble(problem);
  const LpSolution lps = solve_lp(a.lp);

  VAlignOutcome out;
  if (lps.status == LpStatus::Infeasible) {
    out.status = VAlignStatus::Infeasible;
    return out;
  }
  if (lps.status != LpStatus::Optimal || !lps.certified()) {
    out.status = VAlignStatus::NumericalFailure;
    return out;
  }

  const std::size_t m = a.sections;
  VAlignSolution& sol = out.solution;
  sol.origin = a.origin;
  sol.scale = a.scale;
  sol.spline.resize(a.segments);
  for (std::size_t g = 0; g < a.segments; ++g) {
    sol.spline[g] = {lps.x[a.col_spline + 3 * g + 0], lps.x[a.col_spline + 3 * g + 1],
                     lps.x[a.col_spline + 3 * g + 2]};
  }
  sol.knot_chainages.resize(a.knots.size());
  for (std::size_t k = 0; k < a.knots.size(); ++k) {
    sol.knot_chainages[k] = problem.chainages[a.knots[k]];
  }
  const auto slice = [&](std::size_t from, std::size_t count) {
    return std::vector<double>(lps.x.begin() + from, lps.x.begin() + from + count);
  };
  sol.offsets = slice(a.col_u, m);
  sol.cut_volumes = slice(a.col_cut, m);
  sol.fill_volumes = slice(a.col_fill, m);
  sol.flow_forward = slice(a.col_fwd, m - 1);
  sol.flow_backward = slice(a.col_bwd, m - 1);
  sol.borrow_flows = slice(a.col_borrow, problem.config.borrow.size());
  sol.waste_flows = slice(a.col_waste, problem.config.waste.size());
  sol.total_cost = lps.objective;

  out.cost = lps.objective;
  out.status = VAlignStatus::Optimal;
  return out;
}

/// Worst residuals of every solution invariant; tests assert against these.
struct VAlignResiduals {
  double smoothness = 0.0;    // value and derivative mismatch at knots
  double grade_slack = 0.0;   // most negative slack (>= -1e-9 wanted)
  double volume_identity = 0.0;
  double conservation = 0.0;
  double pit_balance = 0.0;   // bound violation of pit flows
  double mass_balance = 0.0;

  bool within(double tol = 1e-6, double grade_tol = 1e-9) const {
    return smoothness <= tol && grade_slack >= -grade_tol && volume_identity <= tol &&
           conservation <= tol && pit_balance <= tol && mass_balance <= tol;
  }
};

inline VAlignResiduals check_valign_solution(const VAlignProblem& p, const VAlignSolution& sol) {
  VAlignResiduals res;
  const std::size_t m = p.sections();
  const auto& s = p.chainages;
  const auto tributary = tributary_lengths(s);
  const VAlignConfig& cfg = p.config;

  for (std::size_t g = 1; g < sol.spline.size(); ++g) {
    const double knot = sol.knot_chainages[g];
    res.smoothness = std::max(
        res.smoothness, std::abs(sol.value_on(g - 1, knot) - sol.value_on(g, knot)));
    res.smoothness = std::max(
        res.smoothness, std::abs(sol.grade_on(g - 1, knot) - sol.grade_on(g, knot)));
  }
  res.grade_slack = 0.0;
  for (std::size_t g = 0; g < sol.spline.size(); ++g) {
    for (const double end : {sol.knot_chainages[g], sol.knot_chainages[g + 1]}) {
      const double grade = sol.grade_on(g, end);
      res.grade_slack = std::min({res.grade_slack, grade - cfg.grade_lo, cfg.grade_hi - grade});
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double vol = sol.cut_volumes[i] - sol.fill_volumes[i];
    const double expected = cfg.road_width * tributary[i] * (p.elevations[i] - sol.value(s[i]));
    res.volume_identity = std::max(res.volume_identity, std::abs(vol - expected));
    if (sol.cut_volumes[i] < 0 || sol.fill_volumes[i] < 0) {
      res.volume_identity = std::max(res.volume_identity,
                                     std::max(-sol.cut_volumes[i], -sol.fill_volumes[i]));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double net = sol.cut_volumes[i] - sol.fill_volumes[i];
    if (i > 0) net += sol.flow_forward[i - 1] - sol.flow_backward[i - 1];
    if (i + 1 < m) net += sol.flow_backward[i] - sol.flow_forward[i];
    for (std::size_t k = 0; k < cfg.borrow.size(); ++k) {
      if (cfg.borrow[k].access_section == i) net += sol.borrow_flows[k];
    }
    for (std::size_t k = 0; k < cfg.waste.size(); ++k) {
      if (cfg.waste[k].access_section == i) net -= sol.waste_flows[k];
    }
    res.conservation = std::max(res.conservation, std::abs(net));
  }
  for (std::size_t k = 0; k < cfg.borrow.size(); ++k) {
    res.pit_balance = std::max({res.pit_balance, -sol.borrow_flows[k],
                                sol.borrow_flows[k] - cfg.borrow[k].capacity});
  }
  for (std::size_t k = 0; k < cfg.waste.size(); ++k) {
    res.pit_balance = std::max({res.pit_balance, -sol.waste_flows[k],
                                sol.waste_flows[k] - cfg.waste[k].capacity});
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mass += sol.cut_volumes[i] - sol.fill_volumes[i];
  }
  for (const double f : sol.borrow_flows) mass += f;
  for (const double f : sol.waste_flows) mass -= f;
  res.mass_balance = std::abs(mass);
  return res;
}

}  // namespace roadopt
