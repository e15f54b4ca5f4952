// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seqscen/rng.hpp"

namespace seqscen {

// One realization of the uncertainty.
using UncertaintyPoint = std::vector<double>;

// Affine constraint row  coeffs . theta <= rhs.
struct AffineCut {
  std::vector<double> coeffs;
  double rhs;
};

// Box domain for the decision vector.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/*
An uncertain convex program: minimize objective . theta over the box domain,
subject to constraint(theta, q) <= 0 for the sampled uncertainty q.

`constraint` is the scalar evaluator used by the violation indicator.
`affine_row` provides the affine-in-theta view (a(q) . theta <= b(q)) that
the built-in solver backend consumes; problems without one can only be run
through an external backend. Both views must agree:
constraint(theta, q) == affine_row(q).coeffs . theta - affine_row(q).rhs.

Problem definitions are immutable after construction and safe to share
across threads; sampling state lives entirely in the caller's CounterRng.
*/
struct UncertainProblem {
  std::string name;
  std::int64_t n_theta = 0;
  std::vector<double> objective;
  std::function<double(std::span<const double>, const UncertaintyPoint&)> constraint;
  std::function<AffineCut(const UncertaintyPoint&)> affine_row;
  std::function<UncertaintyPoint(CounterRng&)> sampler;
  Box domain;
  // Known violation probability for benchmark problems; empty otherwise.
  std::function<double(std::span<const double>)> analytic_violation;
};

// An i.i.d. sample set together with the label that reproduces it.
struct Multisample {
  std::vector<UncertaintyPoint> points;
  StreamLabel label;
  std::uint64_t master_seed = 0;
};

// Exact violated/total count; the real-valued empirical violation is derived.
struct EmpiricalViolation {
  std::int64_t violated = 0;
  std::int64_t total = 0;
  double value() const {
    return total > 0 ? static_cast<double>(violated) / static_cast<double>(total) : 0.0;
  }
};

// Draw `count` i.i.d. points from the problem's sampler on the stream named
// by (master_seed, label). Identical arguments reproduce the identical list.
Multisample draw(const UncertainProblem& problem, std::int64_t count,
                 std::uint64_t master_seed, StreamLabel label);

// 0 if constraint(theta, q) <= tol, 1 otherwise. tol defaults to 0
// (the literal definition); a small positive tol absorbs solver round-off.
int indicator(const UncertainProblem& problem, std::span<const double> theta,
              const UncertaintyPoint& q, double tol = 0.0);

// Fraction of the multisample violating the constraint at theta.
EmpiricalViolation empirical_violation(const UncertainProblem& problem,
                                       std::span<const double> theta,
                                       const Multisample& samples, double tol = 0.0);

// 1-D benchmark with closed-form violation probability:
//   min theta  s.t.  theta >= q,  theta in [0,1],  q ~ Uniform[0,1].
// The scenario solution over a sample set is max_i q_i and V(theta) = 1-theta.
UncertainProblem toy_max_problem();

// Multi-variable benchmark exercising the solver path: min c . theta over a
// box subject to one uncertain affine constraint a(q) . theta <= b(q), where
// a and b are affine-in-q perturbations (scaled by `spread`) of a template
// drawn deterministically from `seed`. Feasible for every q when spread < 1
// (theta = 0 satisfies every realization). Requires n_theta >= 2.
UncertainProblem uncertain_lp_problem(std::int64_t n_theta, double spread,
                                      std::uint64_t seed);

// Benchmark registry for the CLI / C API: "toy-max" or "uncertain-lp".
UncertainProblem make_problem(const std::string& name, std::int64_t n_theta,
                              double spread, std::uint64_t seed);

}  // namespace seqscen
