// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "seqscen/bounds.hpp"
#include "seqscen/problem.hpp"
#include "seqscen/solver.hpp"

namespace seqscen {

enum class RunStatus {
  Solution,            // exited with a probabilistic solution theta_sol
  InfeasibleDeclared,  // a sampled program was infeasible; under the stated
                       // confidence this extends to the original problem
  NumericFailure,      // a backend failure aborted the run (never folded
                       // into InfeasibleDeclared)
};

struct IterationRecord {
  std::int64_t k = 0;
  std::int64_t design_size = 0;           // N_k drawn
  std::int64_t enforced_size = 0;         // N_{k,r} enforced (== design_size when r=0)
  std::int64_t validation_size = 0;       // M_k drawn this iteration (0 if none)
  SolveStatus solve_status = SolveStatus::NumericFailure;
  double objective = 0.0;                 // iff solve_status == Feasible
  std::int64_t violations = 0;            // among validation points evaluated
  std::int64_t validation_evaluated = 0;  // full-satisfaction short-circuits
  double threshold = 0.0;                 // acceptance threshold (0 for Full)
  bool accepted = false;
};

struct RunResult {
  RunStatus status = RunStatus::NumericFailure;
  std::vector<double> theta_sol;              // iff Solution
  double objective = 0.0;                     // iff Solution
  std::int64_t exit_iteration = 0;            // in [1, k_t]
  std::int64_t design_samples_at_exit = 0;
  std::int64_t validation_samples_at_exit = 0;  // 0 when the exit drew none
  std::int64_t cumulative_design_samples = 0;
  std::int64_t cumulative_validation_samples = 0;
  std::vector<IterationRecord> trace;
  double wall_seconds = 0.0;
};

/*
Full-constraint-satisfaction sequential run. Schedule resolved at confidence
delta/2; per iteration: fresh N_k design samples, scenario solve, then (except
at k_t) fresh M_k validation samples accepted only if every one satisfies the
constraint. Unconditional accept at k = k_t. Requires params.r == 0 and
params.n_theta == problem.n_theta. Guarantee on exit with a Solution:
Pr{ V(theta_sol) <= epsilon } >= 1 - delta.
*/
RunResult run_full(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                   const ScheduleParams& params, std::uint64_t master_seed,
                   std::uint64_t run_id = 0, const SolverBackend* backend = nullptr);

// Partial-constraint-satisfaction run: per iteration the solve discards
// N_k - N_{k,r} sampled constraints (mode Greedy or Prefix) and the
// validation test accepts when the empirical violation over M_k fresh points
// is at most (1 - (k beta_v)^{-1/2}) epsilon. Same delta/2 schedule and same
// exit guarantee as run_full.
RunResult run_partial(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                      const ScheduleParams& params, DiscardMode mode,
                      std::uint64_t master_seed, std::uint64_t run_id = 0,
                      const SolverBackend* backend = nullptr);

// One-shot scenario baseline: N = scenario_bound(levels, n_theta) samples,
// one solve, no validation.
RunResult run_oneshot(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                      std::uint64_t master_seed, std::uint64_t run_id = 0,
                      const SolverBackend* backend = nullptr);

// One-shot baseline with r discarded constraints, N from discarded_bound.
RunResult run_oneshot_discarded(const UncertainProblem& problem,
                                const ProbabilisticLevels& levels, std::int64_t r,
                                DiscardMode mode, std::uint64_t master_seed,
                                std::uint64_t run_id = 0,
                                const SolverBackend* backend = nullptr);

}  // namespace seqscen
