// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <numeric>
#include <stdexcept>

#include "lp_oracle.hpp"

using namespace seqscen;

namespace {

Multisample toy_samples(std::initializer_list<double> qs) {
  Multisample s;
  for (double q : qs) s.points.push_back({q});
  return s;
}

// Random small LP instance over the uncertain-lp benchmark.
Multisample lp_samples(const UncertainProblem& p, std::int64_t count, std::uint64_t seed,
                       std::uint32_t iteration) {
  return draw(p, count, seed, StreamLabel{0, iteration, Purpose::Design});
}

double max_constraint_violation(const UncertainProblem& p, const Multisample& samples,
                                const std::vector<double>& theta,
                                const std::vector<std::int64_t>& discarded) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.points.size(); ++i) {
    if (std::find(discarded.begin(), discarded.end(), static_cast<std::int64_t>(i)) !=
        discarded.end())
      continue;
    worst = std::max(worst, p.constraint(theta, samples.points[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("toy scenario solve takes the sample maximum") {
  UncertainProblem toy = toy_max_problem();
  SolveOutcome out = solve_scenario(toy, toy_samples({0.2, 0.9, 0.4}));
  REQUIRE(out.status == SolveStatus::Feasible);
  CHECK(out.theta[0] == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(out.objective == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(out.active_set == std::vector<std::int64_t>{1});
}

TEST_CASE("toy scenario solve detects infeasibility against a tightened box") {
  UncertainProblem toy = toy_max_problem();
  toy.domain = Box{{0.0}, {0.5}};
  SolveOutcome out = solve_scenario(toy, toy_samples({0.9}));
  CHECK(out.status == SolveStatus::Infeasible);
}

TEST_CASE("degenerate-spread LP matches the vertex-enumeration oracle") {
  UncertainProblem p = uncertain_lp_problem(2, 0.0, 31);
  Multisample samples = lp_samples(p, 20, 4, 1);
  SolveOutcome out = solve_scenario(p, samples);
  REQUIRE(out.status == SolveStatus::Feasible);

  std::vector<AffineCut> rows;
  for (const auto& q : samples.points) rows.push_back(p.affine_row(q));
  lp_oracle::Result expected = lp_oracle::solve(p.objective, rows, p.domain);
  REQUIRE(expected.feasible);
  CHECK(out.objective == doctest::Approx(expected.objective).epsilon(1e-7));

  // spread = 0: any sample count gives the nominal optimum.
  SolveOutcome small = solve_scenario(p, lp_samples(p, 3, 9, 2));
  CHECK(small.objective == doctest::Approx(expected.objective).epsilon(1e-7));
}

TEST_CASE("random LP instances match the vertex-enumeration oracle") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::int64_t n_theta = 2 + static_cast<std::int64_t>(seed % 2);
    UncertainProblem p = uncertain_lp_problem(n_theta, 0.6, seed);
    Multisample samples = lp_samples(p, 8, seed * 17 + 1, 1);
    SolveOutcome out = solve_scenario(p, samples);

    std::vector<AffineCut> rows;
    for (const auto& q : samples.points) rows.push_back(p.affine_row(q));
    lp_oracle::Result expected = lp_oracle::solve(p.objective, rows, p.domain);

    CAPTURE(seed);
    REQUIRE(out.status == SolveStatus::Feasible);
    REQUIRE(expected.feasible);
    CHECK(out.objective == doctest::Approx(expected.objective).epsilon(1e-7));
    for (std::int64_t j = 0; j < n_theta; ++j)
      CHECK(out.theta[static_cast<std::size_t>(j)] ==
            doctest::Approx(expected.theta[static_cast<std::size_t>(j)]).epsilon(1e-6));
  }
}

TEST_CASE("feasible outcomes satisfy every enforced constraint") {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    UncertainProblem p = uncertain_lp_problem(2, 0.8, seed);
    Multisample samples = lp_samples(p, 40, seed, 3);
    SolveOutcome out = solve_scenario(p, samples);
    REQUIRE(out.status == SolveStatus::Feasible);
    CHECK(max_constraint_violation(p, samples, out.theta, {}) <= 1e-8);
  }
}

TEST_CASE("permuting sample order changes neither objective nor toy theta") {
  UncertainProblem toy = toy_max_problem();
  Multisample forward = toy_samples({0.13, 0.87, 0.51, 0.29, 0.64});
  Multisample backward = toy_samples({0.64, 0.29, 0.51, 0.87, 0.13});
  SolveOutcome a = solve_scenario(toy, forward);
  SolveOutcome b = solve_scenario(toy, backward);
  CHECK(a.theta[0] == doctest::Approx(b.theta[0]).epsilon(1e-12));
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));

  UncertainProblem p = uncertain_lp_problem(2, 0.7, 3);
  Multisample samples = lp_samples(p, 12, 8, 1);
  Multisample reversed = samples;
  std::reverse(reversed.points.begin(), reversed.points.end());
  SolveOutcome c = solve_scenario(p, samples);
  SolveOutcome d = solve_scenario(p, reversed);
  CHECK(c.objective == doctest::Approx(d.objective).epsilon(1e-9));
  // Lexicographic tie-break pins theta itself, not just the value.
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(c.theta[j] == doctest::Approx(d.theta[j]).epsilon(1e-7));
}

TEST_CASE("solve rejects an empty multisample") {
  UncertainProblem toy = toy_max_problem();
  Multisample empty;
  CHECK_THROWS_AS(solve_scenario(toy, empty), std::invalid_argument);
}

TEST_CASE("greedy discarding on the toy problem removes the maximum") {
  UncertainProblem toy = toy_max_problem();
  Multisample samples = toy_samples({0.2, 0.9, 0.4});
  SolveOutcome out = solve_with_discarding(toy, samples, 1, DiscardMode::Greedy);
  REQUIRE(out.status == SolveStatus::Feasible);
  CHECK(out.theta[0] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(out.discarded == std::vector<std::int64_t>{1});

  SUBCASE("second removal takes the next maximum") {
    Multisample more = toy_samples({0.2, 0.9, 0.4, 0.7, 0.1});
    SolveOutcome two = solve_with_discarding(toy, more, 2, DiscardMode::Greedy);
    CHECK(two.theta[0] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(two.discarded == std::vector<std::int64_t>{1, 3});
  }
}

TEST_CASE("discarding with r = 0 is exactly the scenario solve") {
  UncertainProblem p = uncertain_lp_problem(2, 0.5, 21);
  Multisample samples = lp_samples(p, 10, 5, 1);
  SolveOutcome plain = solve_scenario(p, samples);
  SolveOutcome greedy = solve_with_discarding(p, samples, 0, DiscardMode::Greedy);
  SolveOutcome prefix = solve_with_discarding(p, samples, 0, DiscardMode::Prefix);
  CHECK(plain.objective == greedy.objective);
  CHECK(plain.objective == prefix.objective);
  CHECK(plain.theta == greedy.theta);
  CHECK(plain.theta == prefix.theta);
}

TEST_CASE("prefix discarding enforces exactly the leading constraints") {
  UncertainProblem toy = toy_max_problem();
  Multisample samples = toy_samples({0.2, 0.5, 0.9, 0.95});
  SolveOutcome out = solve_with_discarding(toy, samples, 2, DiscardMode::Prefix);
  REQUIRE(out.status == SolveStatus::Feasible);
  CHECK(out.theta[0] == doctest::Approx(0.5).epsilon(1e-9));  // max of first two
  CHECK(out.discarded == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("discard budget domain check") {
  UncertainProblem toy = toy_max_problem();
  Multisample samples = toy_samples({0.2, 0.5, 0.9});
  CHECK_THROWS_AS(solve_with_discarding(toy, samples, 2, DiscardMode::Greedy),
                  std::domain_error);
  CHECK_THROWS_AS(solve_with_discarding(toy, samples, -1, DiscardMode::Greedy),
                  std::invalid_argument);
}

TEST_CASE("greedy objective is monotone in the discard budget") {
  for (std::uint64_t seed = 70; seed < 80; ++seed) {
    UncertainProblem p = uncertain_lp_problem(2, 0.7, seed);
    Multisample samples = lp_samples(p, 12, seed, 2);
    double previous = std::numeric_limits<double>::infinity();
    for (std::int64_t r = 0; r <= 3; ++r) {
      SolveOutcome out = solve_with_discarding(p, samples, r, DiscardMode::Greedy);
      REQUIRE(out.status == SolveStatus::Feasible);
      CHECK(out.objective <= previous + 1e-9);
      previous = out.objective;
    }
  }
}

TEST_CASE("greedy discarding against the exhaustive-removal oracle") {
  // Greedy r=1 equals the exhaustive single-removal optimum; r=2 is tracked
  // against the best over all pairs and must never be better than it.
  std::int64_t exact_matches = 0;
  std::int64_t instances = 0;
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    UncertainProblem p = uncertain_lp_problem(2, 0.7, seed);
    Multisample samples = lp_samples(p, 12, seed, 1);
    const std::int64_t count = 12;

    for (std::int64_t r : {1, 2}) {
      SolveOutcome greedy = solve_with_discarding(p, samples, r, DiscardMode::Greedy);
      REQUIRE(greedy.status == SolveStatus::Feasible);

      // Exhaustive: best objective over all r-subsets of removed samples.
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::int64_t> subset(static_cast<std::size_t>(r));
      std::iota(subset.begin(), subset.end(), 0);
      for (;;) {
        std::vector<AffineCut> rows;
        for (std::int64_t i = 0; i < count; ++i) {
          if (std::find(subset.begin(), subset.end(), i) == subset.end())
            rows.push_back(p.affine_row(samples.points[static_cast<std::size_t>(i)]));
        }
        lp_oracle::Result res = lp_oracle::solve(p.objective, rows, p.domain);
        if (res.feasible) best = std::min(best, res.objective);
        std::size_t i = subset.size();
        bool done = true;
        while (i-- > 0) {
          if (subset[i] + static_cast<std::int64_t>(subset.size() - i) < count) {
            ++subset[i];
            for (std::size_t k = i + 1; k < subset.size(); ++k)
              subset[k] = subset[k - 1] + 1;
            done = false;
            break;
          }
        }
        if (done) break;
      }

      CAPTURE(seed);
      CAPTURE(r);
      // Greedy can never beat the exhaustive optimum.
      CHECK(greedy.objective >= best - 1e-7 * std::max(1.0, std::abs(best)));
      if (r == 1) {
        CHECK(greedy.objective == doctest::Approx(best).epsilon(1e-7));
      }
      ++instances;
      if (std::abs(greedy.objective - best) <= 1e-7 * std::max(1.0, std::abs(best)))
        ++exact_matches;
    }
  }
  // Tracked ratio, not a hard gate beyond the monotonicity above; r=1
  // instances alone put it at one half.
  CHECK(exact_matches * 2 >= instances);
  MESSAGE("greedy matched exhaustive on ", exact_matches, " of ", instances,
          " instances");
}

TEST_CASE("numeric failure from a backend is surfaced, never folded into infeasible") {
  struct FailingBackend final : SolverBackend {
    SolveOutcome solve(const LinearProgram&) const override {
      SolveOutcome out;
      out.status = SolveStatus::NumericFailure;
      out.message = "synthetic failure";
      return out;
    }
  } backend;
  UncertainProblem toy = toy_max_problem();
  SolveOutcome out = solve_scenario(toy, toy_samples({0.5}), &backend);
  CHECK(out.status == SolveStatus::NumericFailure);
}

TEST_CASE("builtin backend requires finite box bounds") {
  UncertainProblem toy = toy_max_problem();
  toy.domain.upper[0] = std::numeric_limits<double>::infinity();
  SolveOutcome out = solve_scenario(toy, toy_samples({0.5}));
  CHECK(out.status == SolveStatus::NumericFailure);
  CHECK(!out.message.empty());
}
