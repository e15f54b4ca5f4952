// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace seqscen {

/*
Sample-complexity arithmetic for scenario optimization.

Everything in this header is a pure function of its arguments; all
"smallest integer such that ..." bounds are realized by taking the
smallest admissible integer (ceiling / exact search), never a looser
closed form.
*/

// Accuracy epsilon and confidence complement delta, both in (0,1).
struct ProbabilisticLevels {
  double epsilon;
  double delta;

  ProbabilisticLevels(double epsilon_, double delta_);
};

enum class ScheduleFlavor {
  Full,     // every design/validation sample must satisfy the constraint
  Partial,  // a budget of r sampled constraints may be violated
};

// User knobs for the sequential schedules.
struct ScheduleParams {
  std::int64_t k_t;        // termination parameter, >= 2
  double alpha = 0.1;      // hyperharmonic tuning exponent, > 0
  std::int64_t r = 0;      // discarded-constraint budget (0 for the full flavor)
  std::int64_t n_theta;    // number of design variables, >= 1

  void validate() const;
};

struct BetaParams {
  double beta_w;
  double beta_v;  // >= 1 by construction (clamped)
};

// Precomputed per-iteration sample sizes for one sequential run.
struct SampleSchedule {
  ScheduleFlavor flavor;
  ProbabilisticLevels levels;
  ScheduleParams params;
  std::int64_t n_final;                        // scenario bound at confidence delta/2
  std::vector<std::int64_t> design_sizes;      // N_k, k = 1..k_t; last equals n_final
  std::vector<std::int64_t> constrained_sizes; // N_{k,r}; equals design_sizes when r = 0
  std::vector<std::int64_t> validation_sizes;  // M_k, k = 1..k_t-1
  double beta_w;
  double beta_v;
};

// Lower binomial tail  sum_{i=0}^{count} C(trials,i) eps^i (1-eps)^(trials-i),
// evaluated in log domain (compensated log-gamma increments + streaming
// log-sum-exp). Relative error < 1e-10 for trials <= 1e7, count <= 1e4.
// Requires 0 <= count <= trials; throws std::domain_error otherwise.
double binomial_tail(std::int64_t trials, std::int64_t count, double epsilon);

// log of the same quantity; what the searches below compare against log(delta).
double log_binomial_tail(std::int64_t trials, std::int64_t count, double epsilon);

// Smallest N with binomial_tail(N, n_theta, eps) <= delta. Strict monotonicity
// of the tail in N justifies geometric bracketing followed by bisection.
// Candidates within 1e-9 (log domain) of the boundary are re-checked with a
// compensated linear-domain summation so that exact-boundary inputs resolve
// the way exact arithmetic would.
std::int64_t scenario_bound(const ProbabilisticLevels& levels, std::int64_t n_theta);

// Smallest N with C(r+n_theta, r) * binomial_tail(N, r+n_theta, eps) <= delta
// and r < N - n_theta. Throws CapacityError if no admissible N <= search_cap.
std::int64_t discarded_bound(const ProbabilisticLevels& levels, std::int64_t n_theta,
                             std::int64_t r, std::int64_t search_cap = 1000000000);

// Finite p-series sum_{j=1}^{m} j^(-alpha), direct compensated summation.
double hyperharmonic(std::int64_t m, double alpha);

// Validation size M_k for the full-satisfaction schedule,
//   M_k = ceil[(alpha ln k + ln S_{k_t-1}(alpha) + ln(2/delta)) / ln(1/(1-eps))].
// Requires 1 <= k <= k_t - 1 (there is no validation at the final iteration).
std::int64_t validation_size_full(std::int64_t k, const ScheduleParams& params,
                                  const ProbabilisticLevels& levels);

// beta_w = ln(1/delta)/(4 eps);  beta_v = max(1, beta_w / (k_t ln(2 k_t/delta))).
BetaParams beta_params(const ProbabilisticLevels& levels, std::int64_t k_t);

// Validation size M_k for the partial-satisfaction schedule,
//   M_k = ceil[2 k beta_v (1/eps) ln(2 k_t/delta)].
std::int64_t validation_size_partial(std::int64_t k, std::int64_t k_t,
                                     const ProbabilisticLevels& levels, double beta_v);

// Acceptance threshold of the partial-satisfaction validation test,
//   (1 - (k beta_v)^(-1/2)) * eps;  nonnegative for every k >= 1, beta_v >= 1.
double acceptance_threshold(std::int64_t k, double beta_v, double epsilon);

struct DesignSizes {
  std::int64_t n_k;   // ceil(n_final * k / k_t)
  std::int64_t n_kr;  // ceil((n_final - r) * k / k_t)
};

// Per-iteration design sizes; exact integer ceiling arithmetic.
DesignSizes design_size(std::int64_t k, std::int64_t k_t, std::int64_t n_final,
                        std::int64_t r);

// Principal-branch Lambert W for x >= 0: W e^W = x to relative error < 1e-12.
// Halley iteration for small x, Newton on w + ln w = ln x for large x.
double lambert_w(double x);

// W(e^log_x); lets callers evaluate W for arguments whose log is finite even
// when the argument itself overflows a double.
double lambert_w_log(double log_x);

// floor(beta_w / W(2 beta_w / delta)): the largest termination parameter for
// which the unclamped beta_v stays >= 1. Always at least 1; callers must still
// enforce k_t >= 2. The bound is advisory (the schedule clamps beta_v anyway).
std::int64_t max_termination_parameter(const ProbabilisticLevels& levels);

// Resolve the full schedule for one run: n_final at confidence delta/2,
// design sizes, validation sizes for the requested flavor, beta parameters.
SampleSchedule build_schedule(const ProbabilisticLevels& levels,
                              const ScheduleParams& params, ScheduleFlavor flavor);

}  // namespace seqscen
