// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqscen/problem.hpp"

namespace seqscen {

enum class SolveStatus {
  Feasible,
  Infeasible,
  NumericFailure,
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericFailure;
  std::vector<double> theta;              // present iff Feasible
  double objective = 0.0;                 // objective . theta, iff Feasible
  std::vector<std::int64_t> active_set;   // sampled rows tight at the solution
  std::vector<std::int64_t> discarded;    // sampled rows removed by discarding
  std::string message;                    // diagnostics for NumericFailure
};

/*
Backend contract: a backend receives the plain LP data (objective vector,
affine constraint rows, box bounds) and returns a SolveOutcome. Adapters for
external solvers implement this interface without touching any other module.
A backend must report NumericFailure whenever it can certify neither
optimality nor infeasibility; it must never fold failures into Infeasible.
*/
struct LinearProgram {
  std::vector<double> objective;
  std::vector<AffineCut> rows;
  Box bounds;
};

class SolverBackend {
public:
  virtual ~SolverBackend() = default;
  virtual SolveOutcome solve(const LinearProgram& lp) const = 0;
};

// Built-in backend: dense two-phase simplex with Bland's rule. Deterministic
// by construction; requires finite box bounds and affine-in-theta rows.
const SolverBackend& builtin_backend();

enum class DiscardMode {
  Greedy,  // repeatedly drop the active constraint whose removal helps most
  Prefix,  // enforce only the first (count - r) constraints, as drawn
};

// Solve the sampled scenario program over all points of the multisample.
// The returned optimizer is unique: among all optima, the lexicographically
// smallest theta is selected (tie-breaking pass on top of the backend).
SolveOutcome solve_scenario(const UncertainProblem& problem, const Multisample& samples,
                            const SolverBackend* backend = nullptr);

// Scenario solve with r of the sampled constraints removed. Greedy mode
// re-solves after each single removal, taking the active constraint with the
// largest objective improvement (ties to the lowest sample index); Prefix
// mode enforces samples[0 .. count-r) literally. Requires r < count - n_theta.
SolveOutcome solve_with_discarding(const UncertainProblem& problem,
                                   const Multisample& samples, std::int64_t r,
                                   DiscardMode mode = DiscardMode::Greedy,
                                   const SolverBackend* backend = nullptr);

}  // namespace seqscen
