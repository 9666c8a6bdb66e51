#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadopt {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// General-form linear program: min cost'x subject to rows A x {<=,=,>=} rhs
/// and per-variable bounds. Matrix in sparse triplet form.
struct LinearProgram {
  struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
  };

  std::size_t num_vars = 0;
  std::vector<double> cost;
  std::vector<Triplet> entries;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed

  std::size_t num_rows() const { return rhs.size(); }

  void validate() const {
    if (cost.size() != num_vars || lower.size() != num_vars || upper.size() != num_vars) {
      throw std::invalid_argument("lp: cost/bound sizes disagree with num_vars");
    }
    if (senses.size() != rhs.size()) {
      throw std::invalid_argument("lp: senses/rhs sizes disagree");
    }
    for (const double c : cost) {
      if (!std::isfinite(c)) throw std::invalid_argument("lp: non-finite cost");
    }
    for (const double b : rhs) {
      if (!std::isfinite(b)) throw std::invalid_argument("lp: non-finite rhs");
    }
    for (const Triplet& t : entries) {
      if (t.row >= num_rows() || t.col >= num_vars) {
        throw std::invalid_argument("lp: triplet index out of range");
      }
      if (!std::isfinite(t.value)) throw std::invalid_argument("lp: non-finite entry");
    }
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
        throw std::invalid_argument("lp: bad bounds on variable " + std::to_string(j));
      }
    }
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

/// Primal solution plus the certificate residuals computed from a fresh
/// factorization of the final basis (independent of the pivot arithmetic).
struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> duals;  // per original row

  double primal_residual = 0.0;  // scaled max constraint violation
  double dual_residual = 0.0;    // max reduced-cost violation
  double duality_gap = 0.0;      // scaled |c'x - b'y|

  bool certified(double primal_tol = 1e-8, double dual_tol = 1e-6) const {
    return status == LpStatus::Optimal && primal_residual <= primal_tol &&
           dual_residual <= dual_tol && duality_gap <= dual_tol;
  }
};

namespace lpdetail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense standard-form program min c'y, A y = b, y >= 0, built by shifting
/// finite lower bounds, splitting free variables, turning finite upper bounds
/// into rows, and appending slack/artificial columns.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;           // structural + slack + artificial
  std::size_t structural = 0;     // columns before slacks
  std::vector<double> a;          // pristine row-major rows x cols
  std::vector<double> b;          // >= 0
  std::vector<double> c;          // phase-2 costs (0 on slacks/artificials)
  std::vector<bool> artificial;   // per column
  std::vector<bool> row_needs_artificial;
  double objective_offset = 0.0;

  // mapping back to original variables
  std::vector<std::size_t> pos_col;  // internal column of x_j (shifted part)
  std::vector<std::size_t> neg_col;  // column of the negative split, or npos
  std::vector<double> shift;         // x_j = y_pos - y_neg + shift_j
  std::vector<bool> row_flipped;     // original row negated to make b >= 0
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline StandardForm standardize(const LinearProgram& lp) {
  StandardForm sf;
  const std::size_t m0 = lp.num_rows();

  sf.pos_col.assign(lp.num_vars, npos);
  sf.neg_col.assign(lp.num_vars, npos);
  sf.shift.assign(lp.num_vars, 0.0);

  std::size_t col = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (std::isfinite(lp.lower[j])) {
      sf.shift[j] = lp.lower[j];
      sf.pos_col[j] = col++;
    } else {
      sf.pos_col[j] = col++;
      sf.neg_col[j] = col++;
    }
  }
  sf.structural = col;

  // Finite upper bounds become extra <= rows on the shifted variables.
  std::vector<std::size_t> bound_var;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (std::isfinite(lp.upper[j])) {
      bound_var.push_back(j);
    }
  }
  const std::size_t m = m0 + bound_var.size();
  sf.rows = m;

  // Assemble dense structural matrix and rhs in original orientation.
  std::vector<double> dense(m * sf.structural, 0.0);
  std::vector<double> rhs(m, 0.0);
  std::vector<RowSense> senses(m, RowSense::LessEqual);

  const auto add = [&](std::size_t r, std::size_t j, double v) {
    dense[r * sf.structural + sf.pos_col[j]] += v;
    if (sf.neg_col[j] != npos) {
      dense[r * sf.structural + sf.neg_col[j]] -= v;
    }
    rhs[r] -= v * sf.shift[j];
  };

  for (std::size_t r = 0; r < m0; ++r) {
    rhs[r] = lp.rhs[r];
    senses[r] = lp.senses[r];
  }
  for (const auto& t : lp.entries) {
    dense[t.row * sf.structural + sf.pos_col[t.col]] += t.value;
    if (sf.neg_col[t.col] != npos) {
      dense[t.row * sf.structural + sf.neg_col[t.col]] -= t.value;
    }
  }
  // rhs shift from the dense matrix (covers duplicate triplets)
  for (std::size_t r = 0; r < m0; ++r) {
    double adjust = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      if (sf.shift[j] != 0.0) {
        adjust += dense[r * sf.structural + sf.pos_col[j]] * sf.shift[j];
      }
    }
    rhs[r] -= adjust;
  }
  for (std::size_t k = 0; k < bound_var.size(); ++k) {
    const std::size_t r = m0 + k;
    const std::size_t j = bound_var[k];
    add(r, j, 1.0);
    rhs[r] += lp.upper[j];  // row: x_j - shift <= upper - shift
    senses[r] = RowSense::LessEqual;
  }

  sf.row_flipped.assign(m, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (rhs[r] < 0.0) {
      sf.row_flipped[r] = true;
      rhs[r] = -rhs[r];
      for (std::size_t j = 0; j < sf.structural; ++j) {
        dense[r * sf.structural + j] = -dense[r * sf.structural + j];
      }
      if (senses[r] == RowSense::LessEqual) {
        senses[r] = RowSense::GreaterEqual;
      } else if (senses[r] == RowSense::GreaterEqual) {
        senses[r] = RowSense::LessEqual;
      }
    }
  }

  // slack (+1 for <=, -1 for >=) then artificial columns where needed
  std::size_t n_slack = 0;
  for (const RowSense s : senses) {
    if (s != RowSense::Equal) ++n_slack;
  }
  std::size_t n_art = 0;
  for (const RowSense s : senses) {
    if (s != RowSense::LessEqual) ++n_art;
  }
  sf.cols = sf.structural + n_slack + n_art;
  sf.a.assign(m * sf.cols, 0.0);
  sf.b = rhs;
  sf.c.assign(sf.cols, 0.0);
  sf.artificial.assign(sf.cols, false);

  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < sf.structural; ++j) {
      sf.a[r * sf.cols + j] = dense[r * sf.structural + j];
    }
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    sf.c[sf.pos_col[j]] += lp.cost[j];
    if (sf.neg_col[j] != npos) {
      sf.c[sf.neg_col[j]] -= lp.cost[j];
    }
    sf.objective_offset += lp.cost[j] * sf.shift[j];
  }

  std::size_t next = sf.structural;
  for (std::size_t r = 0; r < m; ++r) {
    if (senses[r] == RowSense::LessEqual) {
      sf.a[r * sf.cols + next++] = 1.0;
    } else if (senses[r] == RowSense::GreaterEqual) {
      sf.a[r * sf.cols + next++] = -1.0;
    }
  }
  sf.row_needs_artificial.assign(m, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (senses[r] != RowSense::LessEqual) {
      sf.a[r * sf.cols + next] = 1.0;
      sf.artificial[next] = true;
      sf.row_needs_artificial[r] = true;
      ++next;
    }
  }
  return sf;
}

/// Dense LU with partial pivoting plus iterative refinement. Refinement keeps
/// the residuals at machine level even when the basis is poorly conditioned,
/// which the optimality certificate depends on.
class LuSolver {
 public:
  /// mat is row-major m x m and is copied.
  bool factor(std::vector<double> mat, std::size_t m) {
    m_ = m;
    original_ = mat;
    lu_ = std::move(mat);
    perm_.resize(m);
    for (std::size_t r = 0; r < m; ++r) perm_[r] = r;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (std::abs(lu_[i * m + k]) > std::abs(lu_[piv * m + k])) piv = i;
      }
      if (std::abs(lu_[piv * m + k]) < 1e-13) {
        return false;
      }
      if (piv != k) {
        for (std::size_t j = 0; j < m; ++j) std::swap(lu_[piv * m + j], lu_[k * m + j]);
        std::swap(perm_[piv], perm_[k]);
      }
      for (std::size_t i = k + 1; i < m; ++i) {
        lu_[i * m + k] /= lu_[k * m + k];
        const double f = lu_[i * m + k];
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < m; ++j) {
          lu_[i * m + j] -= f * lu_[k * m + j];
        }
      }
    }
    return true;
  }

  std::vector<double> solve_raw(const std::vector<double>& rhs) const {
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = rhs[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) {
        s -= lu_[i * m_ + j] * y[j];
      }
      y[i] = s;
    }
    for (std::size_t i = m_; i-- > 0;) {
      double s = y[i];
      for (std::size_t j = i + 1; j < m_; ++j) {
        s -= lu_[i * m_ + j] * y[j];
      }
      y[i] = s / lu_[i * m_ + i];
    }
    return y;
  }

  /// Two rounds of iterative refinement against the original matrix.
  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::vector<double> x = solve_raw(rhs);
    for (int round = 0; round < 2; ++round) {
      std::vector<double> residual(m_);
      for (std::size_t r = 0; r < m_; ++r) {
        double s = rhs[r];
        for (std::size_t j = 0; j < m_; ++j) {
          s -= original_[r * m_ + j] * x[j];
        }
        residual[r] = s;
      }
      const std::vector<double> dx = solve_raw(residual);
      for (std::size_t j = 0; j < m_; ++j) {
        x[j] += dx[j];
      }
    }
    return x;
  }

 private:
  std::size_t m_ = 0;
  std::vector<double> original_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

/// Solve B^T y = c_B from the pristine basis columns.
inline bool basis_duals(const StandardForm& sf, const std::vector<std::size_t>& basis,
                        std::vector<double>& y) {
  const std::size_t m = sf.rows;
  std::vector<double> mat(m * m);
  for (std::size_t i = 0; i < m; ++i) {  // row i of B^T = column basis[i] of A
    for (std::size_t r = 0; r < m; ++r) {
      mat[i * m + r] = sf.a[r * sf.cols + basis[i]];
    }
  }
  LuSolver lu;
  if (!lu.factor(std::move(mat), m)) {
    return false;
  }
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = sf.c[basis[i]];
  }
  y = lu.solve(rhs);
  return true;
}

/// Dense tableau simplex over one phase. Dantzig pricing switches permanently
/// to Bland's rule after a stretch of degenerate pivots, which guarantees
/// termination on cycling instances.
class Tableau {
 public:
  Tableau(const StandardForm& sf) : sf_(sf), m_(sf.rows), n_(sf.cols), a_(sf.a), b_(sf.b) {}

  bool phase1() {
    basis_.assign(m_, npos);
    // initial basis: slack where it has +1, else artificial
    std::vector<double> cost(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (sf_.artificial[j]) cost[j] = 1.0;
    }
    // identify identity columns among slacks/artificials row by row
    for (std::size_t j = sf_.structural; j < n_; ++j) {
      std::size_t one_row = npos;
      bool identity = true;
      for (std::size_t r = 0; r < m_; ++r) {
        const double v = a_[r * n_ + j];
        if (v == 1.0 && one_row == npos) {
          one_row = r;
        } else if (v != 0.0) {
          identity = false;
          break;
        }
      }
      if (identity && one_row != npos && basis_[one_row] == npos) {
        basis_[one_row] = j;
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] == npos) {
        return false;  // should not happen: every row gets a slack or artificial
      }
    }
    set_costs(cost);
    return iterate();  // phase 1 of this form cannot be unbounded
  }

  double phase1_objective() const { return objective_; }

  /// Pivot remaining artificial variables out of the basis where possible.
  /// An artificial stuck on an all-zero row marks a redundant constraint and
  /// stays basic at value 0.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!sf_.artificial[basis_[r]]) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!sf_.artificial[j] && std::abs(a_[r * n_ + j]) > 1e-7) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  /// Returns false when the objective is unbounded below.
  bool phase2() {
    set_costs(sf_.c);
    return iterate();
  }

  const std::vector<std::size_t>& basis() const { return basis_; }

  std::vector<double> primal() const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      y[basis_[r]] = b_[r];
    }
    return y;
  }

  bool iterations_exhausted() const { return exhausted_; }

 private:
  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    z_.assign(n_, 0.0);
    objective_ = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      z_[j] = cost_[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      objective_ += cb * b_[r];
      for (std::size_t j = 0; j < n_; ++j) {
        z_[j] -= cb * a_[r * n_ + j];
      }
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = a_[row * n_ + col];
    const double inv = 1.0 / p;
    for (std::size_t j = 0; j < n_; ++j) {
      a_[row * n_ + j] *= inv;
    }
    b_[row] *= inv;
    a_[row * n_ + col] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = a_[r * n_ + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        a_[r * n_ + j] -= f * a_[row * n_ + j];
      }
      a_[r * n_ + col] = 0.0;
      b_[r] -= f * b_[row];
      if (b_[r] < 0.0 && b_[r] > -1e-11) b_[r] = 0.0;
    }
    const double fz = z_[col];
    if (fz != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) {
        z_[j] -= fz * a_[row * n_ + j];
      }
      z_[col] = 0.0;
      objective_ += fz * b_[row];
    }
    basis_[row] = col;
  }

  /// Rebuilds the working tableau from the pristine data against the current
  /// basis (fresh LU), curing the drift that long pivot sequences accumulate.
  /// The basic values get iterative refinement; tableau columns only steer
  /// pivot choices and take the plain solve.
  bool refresh() {
    const std::size_t m = m_;
    std::vector<double> mat(m * m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t i = 0; i < m; ++i) {
        mat[r * m + i] = sf_.a[r * sf_.cols + basis_[i]];
      }
    }
    LuSolver lu;
    if (!lu.factor(std::move(mat), m)) {
      return false;
    }
    b_ = lu.solve(sf_.b);
    std::vector<double> column(m);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t r = 0; r < m; ++r) {
        column[r] = sf_.a[r * sf_.cols + j];
      }
      const std::vector<double> solved = lu.solve_raw(column);
      for (std::size_t r = 0; r < m; ++r) {
        a_[r * n_ + j] = solved[r];
      }
    }
    // tiny negative basics are degeneracy noise; larger ones mean the basis
    // degraded beyond repair
    double bscale = 1.0;
    for (const double v : sf_.b) bscale = std::max(bscale, std::abs(v));
    for (double& v : b_) {
      if (v < 0.0) {
        if (v < -1e-7 * bscale) {
          return false;
        }
        v = 0.0;
      }
    }
    set_costs(cost_);
    return true;
  }

  /// Returns false on unboundedness. Artificial columns never re-enter once
  /// nonbasic (their columns are dropped, textbook-style). Optimality is only
  /// accepted on a freshly refactorized tableau.
  bool iterate() {
    const double ztol = 1e-9 * (1.0 + max_abs(cost_));
    bool bland = false;
    std::size_t degenerate_run = 0;
    std::size_t since_refresh = 0;
    const std::size_t max_iter = 2000 + 200 * (m_ + n_);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      if (since_refresh >= 64) {
        if (!refresh()) {
          exhausted_ = true;
          return true;
        }
        since_refresh = 0;
      }
      // entering column
      std::size_t enter = npos;
      if (!bland) {
        double best = -ztol;
        for (std::size_t j = 0; j < n_; ++j) {
          if (sf_.artificial[j]) continue;
          if (z_[j] < best) {
            best = z_[j];
            enter = j;
          }
        }
      } else {
        for (std::size_t j = 0; j < n_; ++j) {
          if (sf_.artificial[j]) continue;
          if (z_[j] < -ztol) {
            enter = j;
            break;
          }
        }
      }
      if (enter == npos) {
        if (since_refresh == 0) {
          return true;  // optimal on fresh numbers
        }
        if (!refresh()) {
          exhausted_ = true;
          return true;
        }
        since_refresh = 0;
        continue;
      }
      // ratio test; prefer comfortably sized pivot elements
      std::size_t leave = npos;
      double best_ratio = kInf;
      for (const double pivot_floor : {1e-7, 1e-9}) {
        for (std::size_t r = 0; r < m_; ++r) {
          const double arj = a_[r * n_ + enter];
          if (arj > pivot_floor) {
            const double ratio = b_[r] / arj;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && leave != npos && basis_[r] < basis_[leave])) {
              best_ratio = ratio;
              leave = r;
            }
          }
        }
        if (leave != npos) break;
      }
      if (leave == npos) {
        if (since_refresh > 0) {
          // confirm unboundedness on fresh numbers
          if (!refresh()) {
            exhausted_ = true;
            return true;
          }
          since_refresh = 0;
          continue;
        }
        return false;
      }
      if (best_ratio <= 1e-12) {
        if (++degenerate_run >= 64) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, enter);
      ++since_refresh;
    }
    exhausted_ = true;
    return true;
  }

  static double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) m = std::max(m, std::abs(x));
    return m;
  }

  const StandardForm& sf_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;  // working copy, mutated by pivots
  std::vector<double> b_;
  std::vector<double> cost_;
  std::vector<double> z_;  // reduced costs
  double objective_ = 0.0;
  std::vector<std::size_t> basis_;
  bool exhausted_ = false;
};

}  // namespace lpdetail

/// Two-phase primal simplex. On Optimal the solution carries duals and
/// certificate residuals recomputed from the pristine data and a fresh
/// factorization of the final basis.
inline LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  LpSolution sol;

  lpdetail::StandardForm sf = lpdetail::standardize(lp);
  lpdetail::Tableau tab(sf);
  if (!tab.phase1()) {
    sol.status = LpStatus::NumericalFailure;
    return sol;
  }
  if (tab.iterations_exhausted()) {
    sol.status = LpStatus::NumericalFailure;
    return sol;
  }
  // Scale the infeasibility test by the rhs of rows that carry artificials;
  // large bound rows (e.g. huge pit capacities) must not dilute it.
  double bmax = 0.0;
  for (std::size_t r = 0; r < sf.rows; ++r) {
    if (sf.row_needs_artificial[r]) bmax = std::max(bmax, std::abs(sf.b[r]));
  }
  if (tab.phase1_objective() > 1e-8 * (1.0 + bmax)) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  tab.drive_out_artificials();

  const bool bounded = tab.phase2();
  if (tab.iterations_exhausted()) {
    sol.status = LpStatus::NumericalFailure;
    return sol;
  }
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  const std::vector<double> y = tab.primal();

  // map back to original variables, snapping solver noise to exact zero;
  // the threshold is absolute so one large basic value cannot swallow a
  // legitimate small one elsewhere
  sol.x.assign(lp.num_vars, 0.0);
  const double snap = 1e-10;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    double v = y[sf.pos_col[j]];
    if (sf.neg_col[j] != lpdetail::npos) {
      v -= y[sf.neg_col[j]];
    }
    v += sf.shift[j];
    if (std::abs(v) <= snap) v = 0.0;
    sol.x[j] = v;
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    sol.objective += lp.cost[j] * sol.x[j];
  }

  // independent certificate: duals from a fresh solve of B^T y = c_B
  std::vector<double> duals;
  if (!lpdetail::basis_duals(sf, tab.basis(), duals)) {
    sol.status = LpStatus::NumericalFailure;
    return sol;
  }

  double primal_res = 0.0;
  {
    // residuals of the original rows at sol.x
    std::vector<double> ax(lp.num_rows(), 0.0);
    for (const auto& t : lp.entries) {
      ax[t.row] += t.value * sol.x[t.col];
    }
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
      const double scale = 1.0 + std::abs(lp.rhs[r]);
      double viol = 0.0;
      switch (lp.senses[r]) {
        case RowSense::Equal: viol = std::abs(ax[r] - lp.rhs[r]); break;
        case RowSense::LessEqual: viol = std::max(0.0, ax[r] - lp.rhs[r]); break;
        case RowSense::GreaterEqual: viol = std::max(0.0, lp.rhs[r] - ax[r]); break;
      }
      primal_res = std::max(primal_res, viol / scale);
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      const double scale = 1.0 + std::abs(sol.x[j]);
      if (std::isfinite(lp.lower[j])) {
        primal_res = std::max(primal_res, (lp.lower[j] - sol.x[j]) / scale);
      }
      if (std::isfinite(lp.upper[j])) {
        primal_res = std::max(primal_res, (sol.x[j] - lp.upper[j]) / scale);
      }
    }
  }
  sol.primal_residual = primal_res;

  // dual feasibility: reduced costs of the standard form must be >= 0
  double dual_res = 0.0;
  double cmax = 0.0;
  for (const double v : sf.c) cmax = std::max(cmax, std::abs(v));
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (sf.artificial[j]) continue;
    double zj = sf.c[j];
    for (std::size_t r = 0; r < sf.rows; ++r) {
      zj -= duals[r] * sf.a[r * sf.cols + j];
    }
    dual_res = std::max(dual_res, -zj / (1.0 + cmax));
  }
  sol.dual_residual = dual_res;

  double by = 0.0;
  for (std::size_t r = 0; r < sf.rows; ++r) {
    by += duals[r] * sf.b[r];
  }
  sol.duality_gap =
      std::abs(by + sf.objective_offset - sol.objective) / (1.0 + std::abs(sol.objective));

  sol.duals.assign(lp.num_rows(), 0.0);
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    sol.duals[r] = sf.row_flipped[r] ? -duals[r] : duals[r];
  }

  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace roadopt
