// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqscen/sequential.hpp"

namespace seqscen {

enum class Algorithm {
  Full,
  Partial,
  OneShot,
  OneShotDiscarded,
};

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct ExperimentConfig {
  std::string problem = "toy-max";
  std::int64_t problem_n_theta = 2;   // uncertain-lp only
  double problem_spread = 0.5;        // uncertain-lp only
  std::uint64_t problem_seed = 1;     // uncertain-lp only

  Algorithm algorithm = Algorithm::Full;
  double epsilon = 0.1;
  double delta = 0.1;
  std::int64_t k_t = 20;
  double alpha = 0.1;
  std::int64_t r = 0;
  DiscardMode mode = DiscardMode::Greedy;

  std::int64_t repetitions = 100;
  std::uint64_t master_seed = 0;
  int jobs = 1;                // worker threads; report independent of the count
  bool record_timing = false;  // real wall times in the CSV (breaks byte-identity)
  std::string out;             // CSV path; empty = caller renders the CSV itself

  void validate() const;
};

// One CSV row; wall_time_s is 0 unless the config opted into timing.
struct RunRow {
  std::int64_t repetition = 0;
  RunStatus status = RunStatus::NumericFailure;
  std::int64_t exit_iteration = 0;
  std::int64_t design_samples = 0;
  std::int64_t validation_samples = 0;
  std::int64_t cumulative_design = 0;
  std::int64_t cumulative_validation = 0;
  double objective = 0.0;
  double wall_time_s = 0.0;
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1) estimator; 0 for n <= 1
  double worst = 0.0;   // max
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;  // one per repetition, in repetition order
  std::int64_t solutions = 0;
  std::int64_t infeasible = 0;
  std::int64_t numeric_failures = 0;
  // Aggregates over Solution rows only (other rows have no objective).
  MetricStats design_samples;
  MetricStats validation_samples;
  MetricStats objective;
  MetricStats exit_iteration;
  MetricStats wall_time_s;

  // Deterministic CSV: header, one row per repetition, then a '#'-prefixed
  // summary block whose aggregates are exactly recomputable from the rows.
  std::string to_csv() const;
};

// Execute config.repetitions independent runs (repetition index = run id of
// the derived sample streams) and aggregate. Deterministic under the master
// seed, whether repetitions execute serially or on config.jobs threads.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct CertifyResult {
  bool certified = false;
  EmpiricalViolation empirical;
  std::int64_t sample_count = 0;
  double tau = 0.0;        // additive margin
  double threshold = 0.0;  // epsilon - tau
};

// A posteriori certificate for a fixed design: draws
// M = ceil(ln(1/delta) / (2 tau^2)) fresh points and certifies when the
// empirical violation is at most epsilon - tau. One-sided semantics: a
// certificate is wrong with probability at most delta; refusal makes no
// claim. tau <= 0 selects the default epsilon/4.
CertifyResult certify(const UncertainProblem& problem, std::span<const double> theta,
                      const ProbabilisticLevels& levels, double tau,
                      std::uint64_t master_seed);

}  // namespace seqscen
