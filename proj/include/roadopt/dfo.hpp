#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace roadopt {

/// Verdict of one black-box evaluation. inner_skipped records whether an
/// infeasible candidate was rejected before the inner solve ran; the
/// evaluation-count bookkeeping relies on it.
struct EvalOutcome {
  bool feasible = false;
  double cost = 0.0;
  bool inner_skipped = false;

  static EvalOutcome finite(double cost) { return {true, cost, false}; }
  static EvalOutcome infeasible(bool skipped) { return {false, 0.0, skipped}; }
};

/// Must be deterministic in x: repeated evaluation at identical x returns
/// identical results.
using BlackBox = std::function<EvalOutcome(const std::vector<double>&)>;

struct SearchConfig {
  double delta0 = 8.0;          // initial step, meters
  double gamma = 0.5;           // contraction factor
  double min_step = 0.1;        // stopping criterion
  std::size_t max_evals = 100000;
  std::vector<double> scales;   // per-coordinate; empty = all 1.0
  std::uint64_t seed = 0;       // stochastic variant only
  std::size_t poll_threads = 1; // >1 evaluates each poll batch concurrently
  std::size_t escape_tries = 5; // stochastic stall perturbations
};

enum class Termination { MinStep, EvalBudget };

struct RunResult {
  std::vector<double> best_point;
  double best_cost = 0.0;
  std::size_t evaluations = 0;
  std::size_t inner_solves = 0;
  std::size_t cache_hits = 0;
  std::vector<std::pair<std::size_t, double>> trace;  // (eval count, incumbent cost)
  Termination termination = Termination::MinStep;
  double final_delta = 0.0;  // step size of the last completed poll
};

/// mt19937_64 with hand-rolled distributions so streams are identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    // Box-Muller; uniform01 of the raw engine never returns exactly 1
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

enum class PollMode { Deterministic, Stochastic };

/// Candidate points around x. Every displacement has scaled infinity-norm
/// exactly delta. Deterministic mode yields the 2d coordinate directions in
/// fixed order; stochastic mode appends a random orthonormal basis (positively
/// spanning together with its negation) regenerated per call.
inline std::vector<std::vector<double>> poll_set(const std::vector<double>& x, double delta,
                                                 const std::vector<double>& scales, PollMode mode,
                                                 Rng* rng = nullptr) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("poll_set: delta must be positive");
  }
  const std::size_t d = x.size();
  std::vector<std::vector<double>> out;
  out.reserve(mode == PollMode::Deterministic ? 2 * d : 4 * d);
  const auto push_direction = [&](const std::vector<double>& dir_scaled) {
    // dir_scaled lives in scaled space with infinity-norm 1
    std::vector<double> p = x;
    for (std::size_t j = 0; j < d; ++j) {
      p[j] += delta * dir_scaled[j] * scales[j];
    }
    out.push_back(std::move(p));
  };

  std::vector<double> dir(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    dir[j] = 1.0;
    push_direction(dir);
    dir[j] = -1.0;
    push_direction(dir);
    dir[j] = 0.0;
  }
  if (mode == PollMode::Stochastic) {
    // random orthonormal basis via Gram-Schmidt on gaussian draws
    std::vector<std::vector<double>> basis;
    while (basis.size() < d) {
      std::vector<double> v(d);
      for (double& c : v) c = rng->gaussian();
      for (const auto& b : basis) {
        double proj = 0.0;
        for (std::size_t j = 0; j < d; ++j) proj += v[j] * b[j];
        for (std::size_t j = 0; j < d; ++j) v[j] -= proj * b[j];
      }
      double n2 = 0.0;
      for (const double c : v) n2 += c * c;
      if (n2 < 1e-12) continue;  // rare degenerate draw, redo
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : v) c *= inv;
      basis.push_back(std::move(v));
    }
    for (const auto& b : basis) {
      double mx = 0.0;
      for (const double c : b) mx = std::max(mx, std::abs(c));
      std::vector<double> scaled(d);
      for (std::size_t j = 0; j < d; ++j) scaled[j] = b[j] / mx;
      push_direction(scaled);
      for (double& c : scaled) c = -c;
      push_direction(scaled);
    }
  }
  return out;
}

namespace dfodetail {

inline std::string point_key(const std::vector<double>& x) {
  std::string key(x.size() * sizeof(double), '\0');
  std::memcpy(key.data(), x.data(), key.size());
  return key;
}

/// Cache plus counters. All map access happens on the coordinating thread
/// (lookups before a batch, inserts after it joins), so readers never race
/// with updates; worker threads only fill disjoint result slots.
class Evaluator {
 public:
  Evaluator(BlackBox f, std::size_t max_evals, std::size_t threads)
      : f_(std::move(f)), max_evals_(max_evals), threads_(std::max<std::size_t>(1, threads)) {}

  /// Evaluates candidates in order; entries beyond the budget stay nullopt.
  std::vector<std::optional<EvalOutcome>> batch(const std::vector<std::vector<double>>& pts) {
    std::vector<std::optional<EvalOutcome>> results(pts.size());
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto it = cache_.find(point_key(pts[i]));
      if (it != cache_.end()) {
        results[i] = it->second;
        ++cache_hits_;
      } else {
        misses.push_back(i);
      }
    }
    const std::size_t budget = max_evals_ - std::min(max_evals_, evaluations_);
    if (misses.size() > budget) {
      misses.resize(budget);
      budget_hit_ = true;
    }
    if (misses.empty()) {
      return results;
    }
    if (threads_ == 1 || misses.size() == 1) {
      for (const std::size_t i : misses) {
        results[i] = f_(pts[i]);
      }
    } else {
      std::vector<std::future<void>> workers;
      workers.reserve(threads_);
      for (std::size_t w = 0; w < threads_; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
          for (std::size_t k = w; k < misses.size(); k += threads_) {
            results[misses[k]] = f_(pts[misses[k]]);
          }
        }));
      }
      for (auto& fut : workers) fut.get();
    }
    for (const std::size_t i : misses) {
      cache_.emplace(point_key(pts[i]), *results[i]);
      ++evaluations_;
      if (results[i]->feasible || !results[i]->inner_skipped) {
        ++inner_solves_;
      }
    }
    return results;
  }

  std::optional<EvalOutcome> single(const std::vector<double>& x) {
    auto r = batch({x});
    return r[0];
  }

  std::size_t evaluations() const { return evaluations_; }
  std::size_t inner_solves() const { return inner_solves_; }
  std::size_t cache_hits() const { return cache_hits_; }
  bool budget_exhausted() const { return evaluations_ >= max_evals_ || budget_hit_; }

 private:
  BlackBox f_;
  std::size_t max_evals_;
  std::size_t threads_;
  std::unordered_map<std::string, EvalOutcome> cache_;
  std::size_t evaluations_ = 0;
  std::size_t inner_solves_ = 0;
  std::size_t cache_hits_ = 0;
  bool budget_hit_ = false;
};

struct BestCandidate {
  std::size_t index = 0;
  double cost = 0.0;
  bool found = false;
};

/// Order-independent reduction: best value, ties to the lowest candidate index.
inline BestCandidate reduce_best(const std::vector<std::optional<EvalOutcome>>& outcomes) {
  BestCandidate best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i] || !outcomes[i]->feasible) continue;
    if (!best.found || outcomes[i]->cost < best.cost) {
      best = {i, outcomes[i]->cost, true};
    }
  }
  return best;
}

inline void validate_config(const SearchConfig& cfg, std::size_t dim) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw std::invalid_argument("search: gamma must lie in (0,1)");
  }
  if (!(cfg.min_step > 0.0) || !(cfg.delta0 >= cfg.min_step)) {
    throw std::invalid_argument("search: need delta0 >= min_step > 0");
  }
  if (!cfg.scales.empty() && cfg.scales.size() != dim) {
    throw std::invalid_argument("search: scale count disagrees with dimension");
  }
  for (const double s : cfg.scales) {
    if (!(s > 0.0)) throw std::invalid_argument("search: scales must be positive");
  }
}

inline RunResult pattern_search(const BlackBox& f, const std::vector<double>& x0,
                                const SearchConfig& cfg, PollMode mode) {
  validate_config(cfg, x0.size());
  std::vector<double> scales = cfg.scales;
  if (scales.empty()) scales.assign(x0.size(), 1.0);
  Rng rng(cfg.seed);

  Evaluator eval(f, cfg.max_evals, cfg.poll_threads);
  const auto first = eval.single(x0);
  if (!first) {
    throw std::invalid_argument("pattern search: max_evals too small for the baseline");
  }
  if (!first->feasible) {
    throw std::runtime_error("pattern search: starting point is infeasible");
  }

  RunResult result;
  result.best_point = x0;
  result.best_cost = first->cost;
  result.trace.emplace_back(eval.evaluations(), first->cost);

  double delta = cfg.delta0;
  while (true) {
    if (eval.budget_exhausted()) {
      result.termination = Termination::EvalBudget;
      break;
    }
    const auto candidates = poll_set(result.best_point, delta, scales, mode,
                                     mode == PollMode::Stochastic ? &rng : nullptr);
    const auto outcomes = eval.batch(candidates);
    result.final_delta = delta;
    const BestCandidate best = reduce_best(outcomes);
    if (best.found && best.cost < result.best_cost) {
      result.best_point = candidates[best.index];
      result.best_cost = best.cost;
      result.trace.emplace_back(eval.evaluations(), best.cost);
      continue;  // success keeps the step size
    }
    if (eval.budget_exhausted()) {
      result.termination = Termination::EvalBudget;
      break;
    }
    const double contracted = cfg.gamma * delta;
    if (contracted >= cfg.min_step) {
      delta = contracted;
      continue;
    }
    // stalled at minimum step
    if (mode == PollMode::Stochastic && cfg.escape_tries > 0) {
      // random perturbations at radius 5x min step (scaled 2-norm sphere)
      std::vector<std::vector<double>> jumps;
      for (std::size_t k = 0; k < cfg.escape_tries; ++k) {
        std::vector<double> dir(x0.size());
        double n2 = 0.0;
        for (double& c : dir) {
          c = rng.gaussian();
          n2 += c * c;
        }
        const double inv = n2 > 0 ? 1.0 / std::sqrt(n2) : 0.0;
        std::vector<double> p = result.best_point;
        for (std::size_t j = 0; j < p.size(); ++j) {
          p[j] += 5.0 * cfg.min_step * dir[j] * inv * scales[j];
        }
        jumps.push_back(std::move(p));
      }
      const auto jump_outcomes = eval.batch(jumps);
      const BestCandidate jump = reduce_best(jump_outcomes);
      if (jump.found && jump.cost < result.best_cost) {
        result.best_point = jumps[jump.index];
        result.best_cost = jump.cost;
        result.trace.emplace_back(eval.evaluations(), jump.cost);
        delta = 5.0 * cfg.min_step;
        continue;
      }
      if (eval.budget_exhausted()) {
        result.termination = Termination::EvalBudget;
        break;
      }
    }
    result.termination = Termination::MinStep;
    break;
  }

  result.evaluations = eval.evaluations();
  result.inner_solves = eval.inner_solves();
  result.cache_hits = eval.cache_hits();
  return result;
}

}  // namespace dfodetail

/// Coordinate pattern search: poll all 2d directions, move on strict
/// improvement keeping the step, contract on failure, stop below min_step.
/// Bit-reproducible, including under concurrent polling.
inline RunResult pattern_search_deterministic(const BlackBox& f, const std::vector<double>& x0,
                                              const SearchConfig& cfg) {
  return dfodetail::pattern_search(f, x0, cfg, PollMode::Deterministic);
}

/// Same skeleton with per-iteration randomized poll directions and an escape
/// heuristic on stalls. Reproducible given (inputs, seed).
inline RunResult pattern_search_stochastic(const BlackBox& f, const std::vector<double>& x0,
                                           const SearchConfig& cfg, std::uint64_t seed) {
  SearchConfig c = cfg;
  c.seed = seed;
  return dfodetail::pattern_search(f, x0, c, PollMode::Stochastic);
}

}  // namespace roadopt
