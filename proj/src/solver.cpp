// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace seqscen {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;  // scale-relative classification tolerance

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/*
Dense two-phase tableau simplex, minimizing c.x over A x <= b, lo <= x <= hi.

The box is handled by shifting to y = x - lo >= 0 and adding the upper bounds
as ordinary rows. Rows with negative shifted rhs are negated and given an
artificial variable; phase 1 minimizes the artificial sum. Pivoting uses
Bland's rule throughout (entering: lowest-index negative reduced cost;
leaving: minimum ratio, ties to the lowest basis index), which cannot cycle.
Determinism over speed: no scaling, no pricing heuristics.
*/
class Simplex {
public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

  SolveOutcome run() {
    SolveOutcome out;
    const std::size_t n = lp_.objective.size();
    if (lp_.bounds.lower.size() != n || lp_.bounds.upper.size() != n) {
      out.message = "builtin backend: box bounds must match objective dimension";
      return out;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(lp_.bounds.lower[j]) || !std::isfinite(lp_.bounds.upper[j])) {
        out.message = "builtin backend requires finite box bounds";
        return out;
      }
      if (lp_.bounds.lower[j] > lp_.bounds.upper[j]) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
    }
    for (const auto& row : lp_.rows) {
      if (row.coeffs.size() != n) {
        out.message = "builtin backend: constraint row has wrong dimension";
        return out;
      }
    }

    build_tableau();
    if (!phase1(out)) return out;
    if (!phase2(out)) return out;
    extract(out);
    return out;
  }

private:
  const LinearProgram& lp_;
  std::size_t n_ = 0;        // structural variables (shifted)
  std::size_t m_ = 0;        // rows: lp rows + upper-bound rows
  std::size_t n_art_ = 0;    // artificial variables
  std::size_t cols_ = 0;     // n_ + m_ slacks + n_art_ (+1 rhs)
  std::vector<std::vector<double>> t_;  // m_ rows x (cols_+1)
  std::vector<std::size_t> basis_;      // basic variable per row
  std::vector<char> dead_;              // redundant rows disabled after phase 1

  void build_tableau() {
    n_ = lp_.objective.size();
    const std::size_t rows = lp_.rows.size();
    m_ = rows + n_;  // upper bounds appended as rows
    std::vector<std::vector<double>> a(m_, std::vector<double>(n_, 0.0));
    std::vector<double> b(m_, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      a[i] = lp_.rows[i].coeffs;
      b[i] = lp_.rows[i].rhs - dot(lp_.rows[i].coeffs, lp_.bounds.lower);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      a[rows + j][j] = 1.0;
      b[rows + j] = lp_.bounds.upper[j] - lp_.bounds.lower[j];
    }

    n_art_ = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (b[i] < 0.0) ++n_art_;

    cols_ = n_ + m_ + n_art_;
    t_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m_, 0);
    dead_.assign(m_, 0);

    std::size_t art = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * a[i][j];
      t_[i][n_ + i] = sign;  // slack
      t_[i][cols_] = sign * b[i];
      if (sign < 0.0) {
        std::size_t art_col = n_ + m_ + art;
        t_[i][art_col] = 1.0;
        basis_[i] = art_col;
        ++art;
      } else {
        basis_[i] = n_ + i;
      }
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    double inv = 1.0 / t_[row][col];
    for (double& v : t_[row]) v *= inv;
    t_[row][col] = 1.0;  // kill round-off on the pivot itself
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || dead_[i]) continue;
      double factor = t_[i][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= factor * t_[row][j];
      t_[i][col] = 0.0;
    }
    basis_[row] = col;
  }

  bool phase1(SolveOutcome& out) {
    if (n_art_ == 0) return true;
    // Cost row for minimizing the artificial sum, expressed over the basis.
    std::vector<double> cost(cols_, 0.0);
    double value = 0.0;
    for (std::size_t j = n_ + m_; j < cols_; ++j) cost[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ + m_) {  // basic artificial: eliminate from cost row
        for (std::size_t j = 0; j < cols_; ++j) cost[j] -= t_[i][j];
        value += t_[i][cols_];
      }
    }
    std::vector<char> allowed(cols_, 1);
    if (!bland(cost, value, allowed, out)) return false;
    if (value > 1e-7) {
      out.status = SolveStatus::Infeasible;
      return false;
    }
    // Drive remaining basic artificials out or mark their rows redundant.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      std::size_t col = n_ + m_;
      bool found = false;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (std::abs(t_[i][j]) > kPivotTol) {
          col = j;
          found = true;
          break;
        }
      }
      if (found)
        pivot(i, col);
      else
        dead_[i] = 1;  // all-zero row: redundant constraint
    }
    return true;
  }

  bool phase2(SolveOutcome& out) {
    std::vector<double> cost(cols_, 0.0);
    double value = 0.0;
    for (std::size_t j = 0; j < n_; ++j) cost[j] = lp_.objective[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (dead_[i]) continue;
      std::size_t bj = basis_[i];
      double cb = bj < n_ ? lp_.objective[bj] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) cost[j] -= cb * t_[i][j];
      value += cb * t_[i][cols_];
    }
    std::vector<char> allowed(cols_, 1);
    for (std::size_t j = n_ + m_; j < cols_; ++j) allowed[j] = 0;  // artificials locked out
    if (!bland(cost, value, allowed, out)) return false;
    return true;
  }

  // The actual Bland loop: maintains the reduced-cost row through pivots.
  bool bland(std::vector<double>& cost, double& value, const std::vector<char>& allowed,
             SolveOutcome& out) {
    const std::size_t cap = 50 * (m_ + cols_) + 1000;
    for (std::size_t it = 0; it < cap; ++it) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && cost[j] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (dead_[i] || t_[i][enter] <= kPivotTol) continue;
        double ratio = t_[i][cols_] / t_[i][enter];
        bool better = ratio < best_ratio - kPivotTol;
        bool tie = !better && ratio < best_ratio + kPivotTol;
        if (better || (tie && (leave == m_ || basis_[i] < basis_[leave]))) {
          if (better) best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == m_) {
        out.message = "builtin backend: unbounded direction under finite box bounds";
        return false;
      }
      double factor = cost[enter];
      pivot(leave, enter);
      if (factor != 0.0) {
        for (std::size_t j = 0; j < cols_; ++j) cost[j] -= factor * t_[leave][j];
        value += factor * t_[leave][cols_];
        cost[enter] = 0.0;
      }
    }
    out.message = "builtin backend: simplex iteration cap exceeded";
    return false;
  }

  void extract(SolveOutcome& out) {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!dead_[i] && basis_[i] < n_) y[basis_[i]] = t_[i][cols_];
    }
    out.theta.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      double v = lp_.bounds.lower[j] + std::max(0.0, y[j]);
      out.theta[j] = std::min(v, lp_.bounds.upper[j]);
    }
    out.objective = dot(lp_.objective, out.theta);
    out.status = SolveStatus::Feasible;
  }
};

class BuiltinBackend final : public SolverBackend {
public:
  SolveOutcome solve(const LinearProgram& lp) const override { return Simplex(lp).run(); }
};

double row_scale(const AffineCut& row, const std::vector<double>& theta) {
  double lhs = dot(row.coeffs, theta);
  return std::max({1.0, std::abs(lhs), std::abs(row.rhs)});
}

double row_violation(const AffineCut& row, const std::vector<double>& theta) {
  return dot(row.coeffs, theta) - row.rhs;
}

std::vector<std::int64_t> tight_rows(const std::vector<AffineCut>& rows,
                                     const std::vector<double>& theta) {
  std::vector<std::int64_t> active;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double v = row_violation(rows[i], theta);
    if (std::abs(v) <= kFeasTol * row_scale(rows[i], theta))
      active.push_back(static_cast<std::int64_t>(i));
  }
  return active;
}

bool rows_feasible(const std::vector<AffineCut>& rows, const std::vector<double>& theta) {
  for (const auto& row : rows)
    if (row_violation(row, theta) > kFeasTol * row_scale(row, theta)) return false;
  return true;
}

// Tie-breaking pass: among all optima of the LP, pick the lexicographically
// smallest theta by minimizing each coordinate in turn on the optimal face.
// The refinement works on a thin slice of the polytope (objective row plus
// pinned coordinates), which can be numerically degenerate; when the refined
// vertex drifts outside tolerance the pass keeps the plain optimum instead.
SolveOutcome solve_lexicographic(const LinearProgram& lp, const SolverBackend& backend) {
  SolveOutcome first = backend.solve(lp);
  if (first.status != SolveStatus::Feasible || lp.objective.empty()) return first;

  LinearProgram refine = lp;
  double slack = 1e-9 * std::max(1.0, std::abs(first.objective));
  refine.rows.push_back(AffineCut{lp.objective, first.objective + slack});
  SolveOutcome last = first;
  for (std::size_t j = 0; j < lp.objective.size(); ++j) {
    refine.objective.assign(lp.objective.size(), 0.0);
    refine.objective[j] = 1.0;
    SolveOutcome step = backend.solve(refine);
    if (step.status != SolveStatus::Feasible) return first;
    double pin = step.theta[j];
    refine.bounds.upper[j] =
        std::min(refine.bounds.upper[j], pin + 1e-9 * std::max(1.0, std::abs(pin)));
    last = step;
  }
  if (!rows_feasible(lp.rows, last.theta)) return first;
  for (std::size_t j = 0; j < last.theta.size(); ++j) {
    if (last.theta[j] < lp.bounds.lower[j] - kFeasTol ||
        last.theta[j] > lp.bounds.upper[j] + kFeasTol)
      return first;
  }
  SolveOutcome out;
  out.status = SolveStatus::Feasible;
  out.theta = last.theta;
  out.objective = dot(lp.objective, out.theta);
  return out;
}

LinearProgram scenario_lp(const UncertainProblem& problem,
                          const std::vector<const UncertaintyPoint*>& points) {
  if (!problem.affine_row)
    throw std::invalid_argument("problem '" + problem.name +
                                "' provides no affine constraint view for the builtin backend");
  LinearProgram lp;
  lp.objective = problem.objective;
  lp.bounds = problem.domain;
  lp.rows.reserve(points.size());
  for (const auto* q : points) lp.rows.push_back(problem.affine_row(*q));
  return lp;
}

SolveOutcome finish_outcome(const LinearProgram& lp, SolveOutcome out) {
  if (out.status != SolveStatus::Feasible) return out;
  if (!rows_feasible(lp.rows, out.theta)) {
    SolveOutcome fail;
    fail.status = SolveStatus::NumericFailure;
    fail.message = "solution violates an enforced sampled constraint beyond tolerance";
    return fail;
  }
  out.active_set = tight_rows(lp.rows, out.theta);
  return out;
}

}  // namespace

const SolverBackend& builtin_backend() {
  static const BuiltinBackend backend;
  return backend;
}

SolveOutcome solve_scenario(const UncertainProblem& problem, const Multisample& samples,
                            const SolverBackend* backend) {
  if (samples.points.empty())
    throw std::invalid_argument("solve_scenario: multisample is empty");
  const SolverBackend& be = backend ? *backend : builtin_backend();
  std::vector<const UncertaintyPoint*> points;
  points.reserve(samples.points.size());
  for (const auto& q : samples.points) points.push_back(&q);
  LinearProgram lp = scenario_lp(problem, points);
  return finish_outcome(lp, solve_lexicographic(lp, be));
}

SolveOutcome solve_with_discarding(const UncertainProblem& problem,
                                   const Multisample& samples, std::int64_t r,
                                   DiscardMode mode, const SolverBackend* backend) {
  const std::int64_t count = static_cast<std::int64_t>(samples.points.size());
  if (count == 0) throw std::invalid_argument("solve_with_discarding: multisample is empty");
  if (r < 0) throw std::invalid_argument("discard budget r must be nonnegative");
  if (r > 0 && r >= count - problem.n_theta)
    throw std::domain_error("discard budget r must satisfy r < count - n_theta");
  if (r == 0) return solve_scenario(problem, samples, backend);

  const SolverBackend& be = backend ? *backend : builtin_backend();

  if (mode == DiscardMode::Prefix) {
    std::vector<const UncertaintyPoint*> points;
    points.reserve(count - r);
    for (std::int64_t i = 0; i < count - r; ++i) points.push_back(&samples.points[i]);
    LinearProgram lp = scenario_lp(problem, points);
    SolveOutcome out = finish_outcome(lp, solve_lexicographic(lp, be));
    for (std::int64_t i = count - r; i < count; ++i) out.discarded.push_back(i);
    return out;
  }

  // Greedy: r single removals, re-solving after each. Sample index i maps to
  // LP row position via `kept`.
  std::vector<std::int64_t> kept(count);
  std::iota(kept.begin(), kept.end(), 0);
  std::vector<std::int64_t> removed;

  auto lp_for = [&](const std::vector<std::int64_t>& indices) {
    std::vector<const UncertaintyPoint*> points;
    points.reserve(indices.size());
    for (std::int64_t i : indices) points.push_back(&samples.points[i]);
    return scenario_lp(problem, points);
  };

  for (std::int64_t step = 0; step < r; ++step) {
    LinearProgram lp = lp_for(kept);
    SolveOutcome base = be.solve(lp);
    if (base.status != SolveStatus::Feasible) {
      // Cannot rank removals without a feasible base point; surface as-is.
      return finish_outcome(lp, solve_lexicographic(lp, be));
    }
    std::vector<std::int64_t> candidates = tight_rows(lp.rows, base.theta);
    if (candidates.empty()) {
      // No sampled constraint binds; removal cannot improve the objective.
      candidates.push_back(0);
    }
    std::int64_t best_pos = -1;
    double best_objective = std::numeric_limits<double>::infinity();
    for (std::int64_t pos : candidates) {
      std::vector<std::int64_t> trial = kept;
      trial.erase(trial.begin() + pos);
      SolveOutcome attempt = be.solve(lp_for(trial));
      if (attempt.status != SolveStatus::Feasible) continue;
      if (best_pos < 0 ||
          attempt.objective <
              best_objective - 1e-12 * std::max(1.0, std::abs(best_objective))) {
        best_objective = attempt.objective;
        best_pos = pos;
      }
    }
    if (best_pos < 0) best_pos = candidates.front();
    removed.push_back(kept[static_cast<std::size_t>(best_pos)]);
    kept.erase(kept.begin() + best_pos);
  }

  LinearProgram lp = lp_for(kept);
  SolveOutcome out = finish_outcome(lp, solve_lexicographic(lp, be));
  // Report active/discarded sets in original sample indices.
  for (auto& idx : out.active_set) idx = kept[static_cast<std::size_t>(idx)];
  std::sort(removed.begin(), removed.end());
  out.discarded = std::move(removed);
  return out;
}

}  // namespace seqscen
