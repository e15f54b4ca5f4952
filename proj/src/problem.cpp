// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "seqscen/errors.hpp"

namespace seqscen {

Multisample draw(const UncertainProblem& problem, std::int64_t count,
                 std::uint64_t master_seed, StreamLabel label) {
  if (count < 1) throw std::invalid_argument("draw: count must be >= 1");
  if (!problem.sampler) throw std::invalid_argument("draw: problem has no sampler");
  CounterRng rng(master_seed, label);
  Multisample samples{{}, label, master_seed};
  samples.points.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) samples.points.push_back(problem.sampler(rng));
  return samples;
}

int indicator(const UncertainProblem& problem, std::span<const double> theta,
              const UncertaintyPoint& q, double tol) {
  if (static_cast<std::int64_t>(theta.size()) != problem.n_theta)
    throw std::invalid_argument("indicator: theta has wrong dimension");
  double value = problem.constraint(theta, q);
  if (std::isnan(value))
    throw EvaluationError("constraint evaluator returned NaN for problem " + problem.name);
  return value <= tol ? 0 : 1;
}

EmpiricalViolation empirical_violation(const UncertainProblem& problem,
                                       std::span<const double> theta,
                                       const Multisample& samples, double tol) {
  if (samples.points.empty())
    throw std::domain_error("empirical_violation: multisample is empty");
  EmpiricalViolation result;
  result.total = static_cast<std::int64_t>(samples.points.size());
  for (const auto& q : samples.points) result.violated += indicator(problem, theta, q, tol);
  return result;
}

UncertainProblem toy_max_problem() {
  UncertainProblem p;
  p.name = "toy-max";
  p.n_theta = 1;
  p.objective = {1.0};
  p.constraint = [](std::span<const double> theta, const UncertaintyPoint& q) {
    return q[0] - theta[0];  // theta >= q
  };
  p.affine_row = [](const UncertaintyPoint& q) {
    return AffineCut{{-1.0}, -q[0]};
  };
  p.sampler = [](CounterRng& rng) { return UncertaintyPoint{rng.next_unit()}; };
  p.domain = Box{{0.0}, {1.0}};
  p.analytic_violation = [](std::span<const double> theta) {
    return std::min(1.0, std::max(0.0, 1.0 - theta[0]));
  };
  return p;
}

UncertainProblem uncertain_lp_problem(std::int64_t n_theta, double spread,
                                      std::uint64_t seed) {
  if (n_theta < 2) throw std::invalid_argument("uncertain_lp_problem: n_theta must be >= 2");
  if (!(spread >= 0.0) || spread >= 1.0)
    throw std::invalid_argument(
        "uncertain_lp_problem: spread must lie in [0,1) so that theta = 0 stays "
        "feasible for every uncertainty realization");

  // Template drawn once, deterministically, from the construction seed.
  CounterRng rng(seed, StreamLabel{0, 0, Purpose::Design});
  std::vector<double> objective(n_theta);
  std::vector<double> base_coeffs(n_theta);
  for (auto& c : objective) c = -rng.next_in(0.75, 1.25);  // pushes theta upward
  for (auto& a : base_coeffs) a = rng.next_in(0.75, 1.25); // the cut pushes back
  const double base_rhs = 1.0;

  UncertainProblem p;
  p.name = "uncertain-lp";
  p.n_theta = n_theta;
  p.objective = objective;
  p.affine_row = [base_coeffs, base_rhs, spread](const UncertaintyPoint& q) {
    AffineCut cut;
    cut.coeffs.resize(base_coeffs.size());
    for (std::size_t j = 0; j < base_coeffs.size(); ++j)
      cut.coeffs[j] = base_coeffs[j] + spread * q[j];
    cut.rhs = base_rhs + spread * q[base_coeffs.size()];
    return cut;
  };
  p.constraint = [affine = p.affine_row](std::span<const double> theta,
                                         const UncertaintyPoint& q) {
    AffineCut cut = affine(q);
    double lhs = 0.0;
    for (std::size_t j = 0; j < cut.coeffs.size(); ++j) lhs += cut.coeffs[j] * theta[j];
    return lhs - cut.rhs;
  };
  const std::size_t q_dim = static_cast<std::size_t>(n_theta) + 1;
  p.sampler = [q_dim](CounterRng& rng_) {
    UncertaintyPoint q(q_dim);
    for (auto& v : q) v = rng_.next_in(-1.0, 1.0);
    return q;
  };
  p.domain = Box{std::vector<double>(n_theta, -10.0), std::vector<double>(n_theta, 10.0)};
  return p;
}

UncertainProblem make_problem(const std::string& name, std::int64_t n_theta,
                              double spread, std::uint64_t seed) {
  if (name == "toy-max") return toy_max_problem();
  if (name == "uncertain-lp") return uncertain_lp_problem(n_theta, spread, seed);
  throw std::invalid_argument("unknown problem '" + name +
                              "' (available: toy-max, uncertain-lp)");
}

}  // namespace seqscen
