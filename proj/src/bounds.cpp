// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "seqscen/errors.hpp"

namespace seqscen {

namespace {

constexpr double kNearTieLog = 1e-9;          // log-domain distance that triggers re-check
constexpr std::int64_t kLinearCap = 200000;   // largest N for linear-domain re-check

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0,1), got " + std::to_string(epsilon));
}

void check_levels(double epsilon, double delta) {
  check_epsilon(epsilon);
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
}

// Kahan-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// log C(n, k) = sum_{j=1}^{k} log((n-k+j)/j), compensated. Exactly 0 for k = 0.
double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) throw std::domain_error("log_choose: k outside [0,n]");
  k = std::min(k, n - k);
  CompensatedSum s;
  for (std::int64_t j = 1; j <= k; ++j)
    s.add(std::log(static_cast<double>(n - k + j)) - std::log(static_cast<double>(j)));
  return s.sum;
}

// x^n by binary exponentiation; deterministic, exact for dyadic bases.
double pow_int(double x, std::int64_t n) {
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// Direct linear-domain tail via the term recurrence; used only to resolve
// near-boundary comparisons where log-domain round-off could flip <=.
double binomial_tail_linear(std::int64_t trials, std::int64_t count, double epsilon) {
  double term = pow_int(1.0 - epsilon, trials);
  if (term == 0.0 || !std::isfinite(term)) return std::numeric_limits<double>::quiet_NaN();
  double ratio = epsilon / (1.0 - epsilon);
  CompensatedSum s;
  s.add(term);
  for (std::int64_t i = 1; i <= count; ++i) {
    term *= static_cast<double>(trials - i + 1) / static_cast<double>(i) * ratio;
    s.add(term);
  }
  return s.sum;
}

// Predicate "tail (times exp(log_coef)) <= delta", compared in log domain with
// a linear-domain re-check in the near-tie band.
bool tail_leq(std::int64_t trials, std::int64_t count, double epsilon, double log_coef,
              double delta, double log_delta) {
  double lt = log_coef + log_binomial_tail(trials, count, epsilon);
  if (std::abs(lt - log_delta) < kNearTieLog && trials <= kLinearCap) {
    double lin = binomial_tail_linear(trials, count, epsilon);
    if (std::isfinite(lin)) return std::exp(log_coef) * lin <= delta;
  }
  return lt <= log_delta;
}

// Smallest N >= first_candidate with pred(N), assuming pred is monotone in N.
template <typename Pred>
std::int64_t invert_monotone(std::int64_t first_candidate, std::int64_t cap, Pred pred,
                             const char* what) {
  std::int64_t lo = first_candidate - 1;  // pred(lo) false by construction
  std::int64_t hi = first_candidate;
  while (!pred(hi)) {
    if (hi >= cap)
      throw CapacityError(std::string(what) + ": no admissible N within search cap " +
                          std::to_string(cap));
    lo = hi;
    hi = hi > cap / 2 ? cap : hi * 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

void check_representable(double x) {
  if (!(x < 9.0e18))
    throw CapacityError("required sample size exceeds the representable range");
}

// Smallest integer >= x, with a 1e-9-relative snap to the nearest integer so
// that mathematically exact integer right-hand sides survive round-off.
std::int64_t smallest_int_geq(double x) {
  check_representable(x);
  double r = std::nearbyint(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)))
    return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t floor_guarded(double x) {
  check_representable(x);
  return static_cast<std::int64_t>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

}  // namespace

ProbabilisticLevels::ProbabilisticLevels(double epsilon_, double delta_)
    : epsilon(epsilon_), delta(delta_) {
  check_levels(epsilon, delta);
}

void ScheduleParams::validate() const {
  if (k_t < 2) throw std::invalid_argument("k_t must be at least 2, got " + std::to_string(k_t));
  if (k_t > 1000000) throw std::invalid_argument("k_t beyond 1e6 is not supported");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (r < 0) throw std::invalid_argument("discard budget r must be nonnegative");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be at least 1");
}

double log_binomial_tail(std::int64_t trials, std::int64_t count, double epsilon) {
  check_epsilon(epsilon);
  if (trials < 1) throw std::domain_error("binomial_tail: trials must be >= 1");
  if (count < 0 || count > trials)
    throw std::domain_error("binomial_tail: count must lie in [0, trials]");

  const double log_eps = std::log(epsilon);
  const double log_1me = std::log1p(-epsilon);

  // Streaming log-sum-exp over terms log C(N,i) + i log(eps) + (N-i) log(1-eps),
  // with the log-binomial built up by compensated increments.
  CompensatedSum log_c;
  double running_max = -std::numeric_limits<double>::infinity();
  double scaled_sum = 0.0;
  for (std::int64_t i = 0; i <= count; ++i) {
    if (i > 0)
      log_c.add(std::log(static_cast<double>(trials - i + 1)) -
                std::log(static_cast<double>(i)));
    double term = log_c.sum + static_cast<double>(i) * log_eps +
                  static_cast<double>(trials - i) * log_1me;
    if (term <= running_max) {
      scaled_sum += std::exp(term - running_max);
    } else {
      scaled_sum = scaled_sum * std::exp(running_max - term) + 1.0;
      running_max = term;
    }
  }
  return running_max + std::log(scaled_sum);
}

double binomial_tail(std::int64_t trials, std::int64_t count, double epsilon) {
  return std::min(1.0, std::exp(log_binomial_tail(trials, count, epsilon)));
}

std::int64_t scenario_bound(const ProbabilisticLevels& levels, std::int64_t n_theta) {
  if (n_theta < 1) throw std::invalid_argument("n_theta must be at least 1");
  const double log_delta = std::log(levels.delta);
  auto pred = [&](std::int64_t n) {
    return tail_leq(n, n_theta, levels.epsilon, 0.0, levels.delta, log_delta);
  };
  // At N = n_theta the tail equals 1 > delta, so the search starts just above.
  return invert_monotone(n_theta + 1, std::int64_t{1000000000}, pred, "scenario_bound");
}

std::int64_t discarded_bound(const ProbabilisticLevels& levels, std::int64_t n_theta,
                             std::int64_t r, std::int64_t search_cap) {
  if (n_theta < 1) throw std::invalid_argument("n_theta must be at least 1");
  if (r < 0) throw std::invalid_argument("discard budget r must be nonnegative");
  if (search_cap < n_theta + r + 1) throw std::invalid_argument("search cap too small");
  const double log_delta = std::log(levels.delta);
  const double log_coef = log_choose(n_theta + r, r);
  auto pred = [&](std::int64_t n) {
    return tail_leq(n, n_theta + r, levels.epsilon, log_coef, levels.delta, log_delta);
  };
  // r < N - n_theta forces N >= n_theta + r + 1; the tail there also exceeds
  // delta whenever N <= n_theta + r, so one search covers both conditions.
  return invert_monotone(n_theta + r + 1, search_cap, pred, "discarded_bound");
}

double hyperharmonic(std::int64_t m, double alpha) {
  if (m < 1) throw std::invalid_argument("hyperharmonic: m must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("hyperharmonic: alpha must be positive");
  CompensatedSum s;
  for (std::int64_t j = 1; j <= m; ++j)
    s.add(std::pow(static_cast<double>(j), -alpha));
  return s.sum;
}

std::int64_t validation_size_full(std::int64_t k, const ScheduleParams& params,
                                  const ProbabilisticLevels& levels) {
  params.validate();
  if (k < 1 || k >= params.k_t)
    throw std::domain_error("validation_size_full: k must lie in [1, k_t-1]");
  const double series = hyperharmonic(params.k_t - 1, params.alpha);
  const double numerator = params.alpha * std::log(static_cast<double>(k)) +
                           std::log(series) + std::log(2.0) - std::log(levels.delta);
  const double denominator = -std::log1p(-levels.epsilon);  // ln(1/(1-eps))
  return smallest_int_geq(numerator / denominator);
}

BetaParams beta_params(const ProbabilisticLevels& levels, std::int64_t k_t) {
  if (k_t < 2) throw std::invalid_argument("k_t must be at least 2");
  const double beta_w = -std::log(levels.delta) / (4.0 * levels.epsilon);
  const double log_2kt_over_delta =
      std::log(2.0 * static_cast<double>(k_t)) - std::log(levels.delta);
  const double beta_v =
      std::max(1.0, beta_w / (static_cast<double>(k_t) * log_2kt_over_delta));
  return {beta_w, beta_v};
}

std::int64_t validation_size_partial(std::int64_t k, std::int64_t k_t,
                                     const ProbabilisticLevels& levels, double beta_v) {
  if (k_t < 2) throw std::invalid_argument("k_t must be at least 2");
  if (!(beta_v >= 1.0)) throw std::invalid_argument("beta_v must be >= 1");
  if (k < 1 || k >= k_t)
    throw std::domain_error("validation_size_partial: k must lie in [1, k_t-1]");
  const double log_2kt_over_delta =
      std::log(2.0 * static_cast<double>(k_t)) - std::log(levels.delta);
  return smallest_int_geq(2.0 * static_cast<double>(k) * beta_v / levels.epsilon *
                          log_2kt_over_delta);
}

double acceptance_threshold(std::int64_t k, double beta_v, double epsilon) {
  if (k < 1) throw std::domain_error("acceptance_threshold: k must be >= 1");
  if (!(beta_v >= 1.0)) throw std::invalid_argument("beta_v must be >= 1");
  double t = (1.0 - 1.0 / std::sqrt(static_cast<double>(k) * beta_v)) * epsilon;
  return std::max(0.0, t);
}

DesignSizes design_size(std::int64_t k, std::int64_t k_t, std::int64_t n_final,
                        std::int64_t r) {
  if (k_t < 2) throw std::invalid_argument("k_t must be at least 2");
  if (k < 1 || k > k_t) throw std::domain_error("design_size: k must lie in [1, k_t]");
  if (n_final < 1) throw std::invalid_argument("n_final must be positive");
  if (r < 0 || r >= n_final)
    throw std::domain_error("design_size: r must lie in [0, n_final)");
  auto ceil_div = [](std::int64_t num, std::int64_t den) { return (num + den - 1) / den; };
  return {ceil_div(n_final * k, k_t), ceil_div((n_final - r) * k, k_t)};
}

double lambert_w_log(double log_x) {
  if (std::isnan(log_x)) throw std::domain_error("lambert_w: argument is NaN");
  if (log_x < std::log(3.0)) {
    double x = std::exp(log_x);
    if (x == 0.0) return 0.0;
    // Halley on f(w) = w e^w - x.
    double w = std::log1p(x);
    for (int it = 0; it < 50; ++it) {
      double ew = std::exp(w);
      double f = w * ew - x;
      double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
      double next = w - step;
      if (std::abs(next - w) <= 2e-16 * std::abs(next) + 1e-300) return next;
      w = next;
    }
    throw NumericError("lambert_w: Halley iteration did not converge");
  }
  // Large arguments: Newton on g(w) = w + ln w - ln x, well conditioned and
  // free of exp overflow.
  double w = log_x - std::log(log_x);
  for (int it = 0; it < 50; ++it) {
    double next = w - (w + std::log(w) - log_x) * w / (w + 1.0);
    if (std::abs(next - w) <= 2e-16 * std::abs(next)) return next;
    w = next;
  }
  throw NumericError("lambert_w: Newton iteration did not converge");
}

double lambert_w(double x) {
  if (!(x >= 0.0)) throw std::domain_error("lambert_w: argument must be >= 0");
  if (x == 0.0) return 0.0;
  return lambert_w_log(std::log(x));
}

std::int64_t max_termination_parameter(const ProbabilisticLevels& levels) {
  const double beta_w = -std::log(levels.delta) / (4.0 * levels.epsilon);
  const double log_arg = std::log(2.0 * beta_w) - std::log(levels.delta);
  const double w = lambert_w_log(log_arg);
  return std::max<std::int64_t>(1, floor_guarded(beta_w / w));
}

SampleSchedule build_schedule(const ProbabilisticLevels& levels,
                              const ScheduleParams& params, ScheduleFlavor flavor) {
  params.validate();
  if (flavor == ScheduleFlavor::Full && params.r != 0)
    throw std::invalid_argument("full-satisfaction schedule takes no discard budget");

  const ProbabilisticLevels halved(levels.epsilon, levels.delta / 2.0);
  const std::int64_t n_final =
      flavor == ScheduleFlavor::Full
          ? scenario_bound(halved, params.n_theta)
          : discarded_bound(halved, params.n_theta, params.r);
  if (flavor == ScheduleFlavor::Partial && params.r >= n_final - params.n_theta)
    throw std::domain_error("discard budget r must satisfy r < N - n_theta");

  const BetaParams betas = beta_params(levels, params.k_t);

  SampleSchedule schedule{flavor, levels, params, n_final, {}, {}, {},
                          betas.beta_w, betas.beta_v};
  schedule.design_sizes.reserve(params.k_t);
  schedule.constrained_sizes.reserve(params.k_t);
  for (std::int64_t k = 1; k <= params.k_t; ++k) {
    DesignSizes sizes = design_size(k, params.k_t, n_final, params.r);
    schedule.design_sizes.push_back(sizes.n_k);
    schedule.constrained_sizes.push_back(sizes.n_kr);
  }
  schedule.validation_sizes.reserve(params.k_t - 1);
  for (std::int64_t k = 1; k < params.k_t; ++k) {
    schedule.validation_sizes.push_back(
        flavor == ScheduleFlavor::Full
            ? validation_size_full(k, params, levels)
            : validation_size_partial(k, params.k_t, levels, betas.beta_v));
  }

  // Structural consequences of the schedule construction; violations here
  // indicate an arithmetic bug, not bad user input.
  if (schedule.design_sizes.back() != n_final)
    throw std::logic_error("schedule: final design size must equal n_final");
  if (schedule.constrained_sizes.back() != n_final - params.r)
    throw std::logic_error("schedule: final constrained size must equal n_final - r");
  if (!std::is_sorted(schedule.design_sizes.begin(), schedule.design_sizes.end()) ||
      !std::is_sorted(schedule.validation_sizes.begin(), schedule.validation_sizes.end()))
    throw std::logic_error("schedule: sizes must be nondecreasing");
  if (flavor == ScheduleFlavor::Full) {
    CompensatedSum budget;
    for (std::int64_t m : schedule.validation_sizes)
      budget.add(std::exp(static_cast<double>(m) * std::log1p(-levels.epsilon)));
    if (budget.sum > levels.delta / 2.0 * (1.0 + 1e-8))
      throw std::logic_error("schedule: misclassification budget exceeds delta/2");
  }
  return schedule;
}

}  // namespace seqscen
