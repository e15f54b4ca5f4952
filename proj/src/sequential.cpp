// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/sequential.hpp"

#include <chrono>
#include <stdexcept>

namespace seqscen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_problem_match(const UncertainProblem& problem, const ScheduleParams& params) {
  if (params.n_theta != problem.n_theta)
    throw std::invalid_argument("params.n_theta does not match the problem dimension");
}

RunResult finish_solution(RunResult result, const SolveOutcome& solve,
                          const IterationRecord& record) {
  result.status = RunStatus::Solution;
  result.theta_sol = solve.theta;
  result.objective = solve.objective;
  result.exit_iteration = record.k;
  result.design_samples_at_exit = record.design_size;
  result.validation_samples_at_exit = record.validation_size;
  return result;
}

RunResult finish_non_solution(RunResult result, RunStatus status,
                              const IterationRecord& record) {
  result.status = status;
  result.exit_iteration = record.k;
  result.design_samples_at_exit = record.design_size;
  result.validation_samples_at_exit = record.validation_size;
  return result;
}

// Shared loop for both sequential algorithms; `partial` switches solve and
// validation semantics.
RunResult run_sequential(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                         const ScheduleParams& params, bool partial, DiscardMode mode,
                         std::uint64_t master_seed, std::uint64_t run_id,
                         const SolverBackend* backend) {
  check_problem_match(problem, params);
  const SampleSchedule schedule = build_schedule(
      levels, params, partial ? ScheduleFlavor::Partial : ScheduleFlavor::Full);

  RunResult result;
  const auto start = Clock::now();

  for (std::int64_t k = 1; k <= params.k_t; ++k) {
    IterationRecord record;
    record.k = k;
    record.design_size = schedule.design_sizes[static_cast<std::size_t>(k - 1)];
    record.enforced_size = schedule.constrained_sizes[static_cast<std::size_t>(k - 1)];
    result.cumulative_design_samples += record.design_size;

    // Design and validation sets are redrawn fresh at every iteration; no
    // sample reuse across iterations or purposes.
    Multisample design = draw(problem, record.design_size, master_seed,
                              StreamLabel{run_id, static_cast<std::uint32_t>(k),
                                          Purpose::Design});
    SolveOutcome solve =
        partial ? solve_with_discarding(problem, design,
                                        record.design_size - record.enforced_size, mode,
                                        backend)
                : solve_scenario(problem, design, backend);
    record.solve_status = solve.status;

    if (solve.status == SolveStatus::NumericFailure) {
      result.trace.push_back(record);
      result = finish_non_solution(std::move(result), RunStatus::NumericFailure, record);
      result.wall_seconds = seconds_since(start);
      return result;
    }
    if (solve.status == SolveStatus::Infeasible) {
      result.trace.push_back(record);
      result = finish_non_solution(std::move(result), RunStatus::InfeasibleDeclared, record);
      result.wall_seconds = seconds_since(start);
      return result;
    }
    record.objective = solve.objective;

    if (k == params.k_t) {
      // Final iteration: the design size equals the full delta/2 scenario
      // bound, so the candidate is accepted without validation.
      record.accepted = true;
      result.trace.push_back(record);
      result = finish_solution(std::move(result), solve, record);
      result.wall_seconds = seconds_since(start);
      return result;
    }

    record.validation_size = schedule.validation_sizes[static_cast<std::size_t>(k - 1)];
    result.cumulative_validation_samples += record.validation_size;
    Multisample validation = draw(problem, record.validation_size, master_seed,
                                  StreamLabel{run_id, static_cast<std::uint32_t>(k),
                                              Purpose::Validation});

    bool accepted;
    if (partial) {
      record.threshold = acceptance_threshold(k, schedule.beta_v, levels.epsilon);
      EmpiricalViolation ev = empirical_violation(problem, solve.theta, validation);
      record.violations = ev.violated;
      record.validation_evaluated = ev.total;
      accepted = static_cast<long double>(ev.violated) <=
                 static_cast<long double>(record.threshold) *
                         static_cast<long double>(ev.total) +
                     1e-9L;
    } else {
      // All validation points must satisfy the constraint; stop at the first
      // violation (the all-zero test's outcome is unaffected).
      std::int64_t evaluated = 0;
      std::int64_t violations = 0;
      for (const auto& q : validation.points) {
        ++evaluated;
        if (indicator(problem, solve.theta, q) != 0) {
          violations = 1;
          break;
        }
      }
      record.violations = violations;
      record.validation_evaluated = evaluated;
      accepted = violations == 0;
    }
    record.accepted = accepted;
    result.trace.push_back(record);

    if (accepted) {
      result = finish_solution(std::move(result), solve, record);
      result.wall_seconds = seconds_since(start);
      return result;
    }
  }
  throw std::logic_error("sequential run fell through the iteration loop");
}

RunResult run_single_solve(const UncertainProblem& problem, std::int64_t n_samples,
                           std::int64_t r, DiscardMode mode, std::uint64_t master_seed,
                           std::uint64_t run_id, const SolverBackend* backend) {
  RunResult result;
  const auto start = Clock::now();

  IterationRecord record;
  record.k = 1;
  record.design_size = n_samples;
  record.enforced_size = n_samples - r;
  result.cumulative_design_samples = n_samples;

  Multisample design =
      draw(problem, n_samples, master_seed, StreamLabel{run_id, 1, Purpose::Design});
  SolveOutcome solve = r == 0 ? solve_scenario(problem, design, backend)
                              : solve_with_discarding(problem, design, r, mode, backend);
  record.solve_status = solve.status;

  if (solve.status == SolveStatus::Feasible) {
    record.objective = solve.objective;
    record.accepted = true;
    result.trace.push_back(record);
    result = finish_solution(std::move(result), solve, record);
  } else {
    result.trace.push_back(record);
    result = finish_non_solution(std::move(result),
                                 solve.status == SolveStatus::Infeasible
                                     ? RunStatus::InfeasibleDeclared
                                     : RunStatus::NumericFailure,
                                 record);
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace

RunResult run_full(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                   const ScheduleParams& params, std::uint64_t master_seed,
                   std::uint64_t run_id, const SolverBackend* backend) {
  if (params.r != 0)
    throw std::invalid_argument("run_full takes no discard budget (params.r must be 0)");
  return run_sequential(problem, levels, params, /*partial=*/false, DiscardMode::Greedy,
                        master_seed, run_id, backend);
}

RunResult run_partial(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                      const ScheduleParams& params, DiscardMode mode,
                      std::uint64_t master_seed, std::uint64_t run_id,
                      const SolverBackend* backend) {
  return run_sequential(problem, levels, params, /*partial=*/true, mode, master_seed,
                        run_id, backend);
}

RunResult run_oneshot(const UncertainProblem& problem, const ProbabilisticLevels& levels,
                      std::uint64_t master_seed, std::uint64_t run_id,
                      const SolverBackend* backend) {
  const std::int64_t n = scenario_bound(levels, problem.n_theta);
  return run_single_solve(problem, n, 0, DiscardMode::Greedy, master_seed, run_id, backend);
}

RunResult run_oneshot_discarded(const UncertainProblem& problem,
                                const ProbabilisticLevels& levels, std::int64_t r,
                                DiscardMode mode, std::uint64_t master_seed,
                                std::uint64_t run_id, const SolverBackend* backend) {
  const std::int64_t n = discarded_bound(levels, problem.n_theta, r);
  return run_single_solve(problem, n, r, mode, master_seed, run_id, backend);
}

}  // namespace seqscen
