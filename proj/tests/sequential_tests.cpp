// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/sequential.hpp"

#include <cmath>
#include <doctest.h>
#include <set>
#include <stdexcept>

using namespace seqscen;

namespace {

ScheduleParams toy_params(std::int64_t k_t, std::int64_t r = 0) {
  return ScheduleParams{k_t, 0.1, r, 1};
}

bool identical(const RunResult& a, const RunResult& b) {
  if (a.status != b.status || a.exit_iteration != b.exit_iteration) return false;
  if (a.theta_sol != b.theta_sol || a.objective != b.objective) return false;
  if (a.cumulative_design_samples != b.cumulative_design_samples) return false;
  if (a.cumulative_validation_samples != b.cumulative_validation_samples) return false;
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    if (a.trace[i].violations != b.trace[i].violations) return false;
    if (a.trace[i].objective != b.trace[i].objective) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("full run is deterministic and bit-identical on replay") {
  UncertainProblem toy = toy_max_problem();
  RunResult a = run_full(toy, {0.1, 0.1}, toy_params(5), 42);
  RunResult b = run_full(toy, {0.1, 0.1}, toy_params(5), 42);
  CHECK(identical(a, b));
  REQUIRE(a.status == RunStatus::Solution);
  CHECK(a.exit_iteration >= 1);
  CHECK(a.exit_iteration <= 5);
  CHECK(a.objective == a.theta_sol[0]);

  RunResult c = run_full(toy, {0.1, 0.1}, toy_params(5), 43);
  CHECK_FALSE(identical(a, c));
}

TEST_CASE("full run trace structure") {
  UncertainProblem toy = toy_max_problem();
  SampleSchedule schedule = build_schedule({0.1, 0.1}, toy_params(5), ScheduleFlavor::Full);
  RunResult run = run_full(toy, {0.1, 0.1}, toy_params(5), 7);
  REQUIRE(run.status == RunStatus::Solution);

  SUBCASE("per-iteration sizes follow the schedule") {
    for (const auto& rec : run.trace) {
      CHECK(rec.design_size == schedule.design_sizes[static_cast<std::size_t>(rec.k - 1)]);
      if (rec.k < 5 && rec.validation_size > 0)
        CHECK(rec.validation_size ==
              schedule.validation_sizes[static_cast<std::size_t>(rec.k - 1)]);
    }
  }

  SUBCASE("exactly one exit path and it is the last record") {
    std::int64_t accepted = 0;
    for (const auto& rec : run.trace)
      if (rec.accepted) ++accepted;
    CHECK(accepted == 1);
    CHECK(run.trace.back().accepted);
    CHECK(run.trace.back().k == run.exit_iteration);
  }

  SUBCASE("no (iteration, purpose) stream is reused within a run") {
    std::set<std::int64_t> design_iterations;
    for (const auto& rec : run.trace) {
      CHECK(design_iterations.insert(rec.k).second);  // one design draw per k
    }
  }

  SUBCASE("cumulative counts sum the trace") {
    std::int64_t design = 0, validation = 0;
    for (const auto& rec : run.trace) {
      design += rec.design_size;
      validation += rec.validation_size;
    }
    CHECK(run.cumulative_design_samples == design);
    CHECK(run.cumulative_validation_samples == validation);
    CHECK(run.design_samples_at_exit ==
          schedule.design_sizes[static_cast<std::size_t>(run.exit_iteration - 1)]);
  }
}

TEST_CASE("forced infeasibility is declared at the first iteration") {
  // Domain capped at 0.5 while every uncertainty draw lies in [0.6, 1]:
  // the first sampled program is infeasible with certainty.
  UncertainProblem rigged = toy_max_problem();
  rigged.domain = Box{{0.0}, {0.5}};
  rigged.sampler = [](CounterRng& rng) {
    return UncertaintyPoint{0.6 + 0.4 * rng.next_unit()};
  };
  RunResult run = run_full(rigged, {0.1, 0.1}, toy_params(5), 11);
  CHECK(run.status == RunStatus::InfeasibleDeclared);
  CHECK(run.exit_iteration == 1);
  CHECK(run.theta_sol.empty());
  CHECK(run.trace.size() == 1);
  CHECK(run.trace[0].solve_status == SolveStatus::Infeasible);
}

TEST_CASE("a run that never passes validation accepts unconditionally at k_t") {
  // The affine view is a tautology (0 <= 1) so the solve always succeeds at
  // the box minimum, while the scalar evaluator reports every validation
  // point as violated. The run must walk to k_t and accept there.
  UncertainProblem never_valid = toy_max_problem();
  never_valid.affine_row = [](const UncertaintyPoint&) {
    return AffineCut{{0.0}, 1.0};
  };
  never_valid.constraint = [](std::span<const double>, const UncertaintyPoint&) {
    return 1.0;
  };
  SampleSchedule schedule = build_schedule({0.3, 0.3}, toy_params(4), ScheduleFlavor::Full);
  RunResult run = run_full(never_valid, {0.3, 0.3}, toy_params(4), 3);
  REQUIRE(run.status == RunStatus::Solution);
  CHECK(run.exit_iteration == 4);
  CHECK(run.design_samples_at_exit == schedule.n_final);
  CHECK(run.validation_samples_at_exit == 0);  // final iteration draws none
  CHECK(run.trace.size() == 4);
  for (std::size_t i = 0; i + 1 < run.trace.size(); ++i) {
    CHECK(run.trace[i].violations > 0);
    CHECK_FALSE(run.trace[i].accepted);
  }
}

TEST_CASE("numeric failure aborts the run and is never misreported") {
  struct FailingBackend final : SolverBackend {
    SolveOutcome solve(const LinearProgram&) const override {
      SolveOutcome out;
      out.status = SolveStatus::NumericFailure;
      return out;
    }
  } backend;
  UncertainProblem toy = toy_max_problem();
  RunResult run = run_full(toy, {0.1, 0.1}, toy_params(5), 1, 0, &backend);
  CHECK(run.status == RunStatus::NumericFailure);
  CHECK(run.exit_iteration == 1);
}

TEST_CASE("run_full validates its parameters") {
  UncertainProblem toy = toy_max_problem();
  CHECK_THROWS_AS(run_full(toy, {0.1, 0.1}, toy_params(5, 2), 1), std::invalid_argument);
  CHECK_THROWS_AS(run_full(toy, {0.1, 0.1}, {5, 0.1, 0, 3}, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_full(toy, {0.1, 0.1}, toy_params(1), 1), std::invalid_argument);
}

TEST_CASE("partial run with r = 0 at k = 1 degenerates to the all-zero test") {
  UncertainProblem toy = toy_max_problem();
  SampleSchedule schedule =
      build_schedule({0.1, 0.1}, toy_params(5), ScheduleFlavor::Partial);
  CHECK(acceptance_threshold(1, schedule.beta_v, 0.1) == 0.0);

  RunResult run = run_partial(toy, {0.1, 0.1}, toy_params(5), DiscardMode::Greedy, 21);
  REQUIRE(run.status == RunStatus::Solution);
  for (const auto& rec : run.trace) {
    if (rec.k == 1 && rec.validation_size > 0 && rec.accepted)
      CHECK(rec.violations == 0);
  }
}

TEST_CASE("partial run acceptance uses the iteration-dependent threshold") {
  UncertainProblem toy = toy_max_problem();
  RunResult run = run_partial(toy, {0.2, 0.1}, toy_params(6), DiscardMode::Greedy, 33);
  REQUIRE(run.status == RunStatus::Solution);
  SampleSchedule schedule =
      build_schedule({0.2, 0.1}, toy_params(6), ScheduleFlavor::Partial);
  for (const auto& rec : run.trace) {
    if (rec.validation_size == 0) continue;
    CHECK(rec.threshold ==
          doctest::Approx(acceptance_threshold(rec.k, schedule.beta_v, 0.2))
              .epsilon(1e-12));
    double ratio = static_cast<double>(rec.violations) /
                   static_cast<double>(rec.validation_evaluated);
    if (rec.accepted)
      CHECK(ratio <= rec.threshold + 1e-9);
    else
      CHECK(ratio > rec.threshold);
  }
}

TEST_CASE("partial run is deterministic") {
  UncertainProblem toy = toy_max_problem();
  RunResult a = run_partial(toy, {0.1, 0.1}, toy_params(5), DiscardMode::Greedy, 5);
  RunResult b = run_partial(toy, {0.1, 0.1}, toy_params(5), DiscardMode::Greedy, 5);
  CHECK(identical(a, b));
}

TEST_CASE("one-shot run") {
  UncertainProblem toy = toy_max_problem();
  ProbabilisticLevels levels(0.1, 0.01);
  RunResult run = run_oneshot(toy, levels, 17);
  REQUIRE(run.status == RunStatus::Solution);
  CHECK(run.exit_iteration == 1);
  CHECK(run.validation_samples_at_exit == 0);
  CHECK(run.cumulative_validation_samples == 0);

  std::int64_t n = scenario_bound(levels, 1);
  CHECK(run.design_samples_at_exit == n);

  // The returned theta is the maximum of the drawn design stream.
  Multisample replay = draw(toy, n, 17, StreamLabel{0, 1, Purpose::Design});
  double max_q = 0.0;
  for (const auto& q : replay.points) max_q = std::max(max_q, q[0]);
  CHECK(run.theta_sol[0] == doctest::Approx(max_q).epsilon(1e-9));

  RunResult again = run_oneshot(toy, levels, 17);
  CHECK(identical(run, again));
}

TEST_CASE("one-shot with discarding") {
  UncertainProblem toy = toy_max_problem();
  ProbabilisticLevels levels(0.2, 0.05);

  SUBCASE("r = 0 gives the same trajectory as the plain one-shot") {
    RunResult plain = run_oneshot(toy, levels, 9);
    RunResult zero = run_oneshot_discarded(toy, levels, 0, DiscardMode::Greedy, 9);
    // Same N since the r = 0 bound coincides, same stream, same theta.
    CHECK(plain.design_samples_at_exit == zero.design_samples_at_exit);
    CHECK(plain.theta_sol == zero.theta_sol);
  }

  SUBCASE("greedy r = 1 returns the second-largest draw") {
    RunResult run = run_oneshot_discarded(toy, levels, 1, DiscardMode::Greedy, 9);
    REQUIRE(run.status == RunStatus::Solution);
    Multisample replay =
        draw(toy, run.design_samples_at_exit, 9, StreamLabel{0, 1, Purpose::Design});
    std::vector<double> qs;
    for (const auto& q : replay.points) qs.push_back(q[0]);
    std::sort(qs.begin(), qs.end());
    CHECK(run.theta_sol[0] == doctest::Approx(qs[qs.size() - 2]).epsilon(1e-9));
  }

  SUBCASE("relaxation never hurts the objective") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RunResult r0 = run_oneshot_discarded(toy, levels, 0, DiscardMode::Greedy, seed);
      RunResult r1 = run_oneshot_discarded(toy, levels, 1, DiscardMode::Greedy, seed);
      // Different N (discarded bound grows), but on the toy problem the
      // objective comparison still reflects the relaxation at equal N; use
      // equal sample counts by replaying r0's stream truncated to its N.
      CHECK(r1.status == RunStatus::Solution);
      CHECK(r0.status == RunStatus::Solution);
    }
    // Direct statement at fixed samples: drop one constraint, objective can
    // only improve.
    Multisample samples = draw(toy, 30, 4, StreamLabel{0, 1, Purpose::Design});
    SolveOutcome keep = solve_scenario(toy, samples);
    SolveOutcome drop = solve_with_discarding(toy, samples, 1, DiscardMode::Greedy);
    CHECK(drop.objective <= keep.objective + 1e-12);
  }
}

TEST_CASE("statistical guarantee smoke check (small batch)") {
  // 120 runs at (0.1, 0.1, k_t=5): the fraction with analytic V > 0.1 stays
  // within the exit-guarantee bound plus binomial slack. The acceptance suite runs
  // the full 1000-run protocol.
  UncertainProblem toy = toy_max_problem();
  std::int64_t bad = 0;
  const std::int64_t reps = 120;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    RunResult run = run_full(toy, {0.1, 0.1}, toy_params(5), 777, rep);
    REQUIRE(run.status == RunStatus::Solution);
    if (toy.analytic_violation(run.theta_sol) > 0.1) ++bad;
  }
  double rate = static_cast<double>(bad) / reps;
  CHECK(rate <= 0.1 + 5.0 * std::sqrt(0.1 * 0.9 / reps));
}
