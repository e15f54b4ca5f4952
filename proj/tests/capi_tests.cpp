// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the extern-C surface against the C++ core it wraps.

#include <seqscen.h>

#include <cstring>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <string>

#include "seqscen/bounds.hpp"
#include "seqscen/harness.hpp"

TEST_CASE("c api: bound computations and error reporting") {
  double tail = 0.0;
  REQUIRE(seqscen_binomial_tail(2, 1, 0.5, &tail) == SEQSCEN_OK);
  CHECK(tail == doctest::Approx(0.75).epsilon(1e-12));

  CHECK(seqscen_binomial_tail(2, 3, 0.5, &tail) == SEQSCEN_DOMAIN_ERROR);
  CHECK(std::strlen(seqscen_last_error()) > 0);
  CHECK(seqscen_binomial_tail(2, 1, 1.5, &tail) == SEQSCEN_INVALID_ARGUMENT);
  CHECK(seqscen_binomial_tail(2, 1, 0.5, nullptr) == SEQSCEN_INVALID_ARGUMENT);

  long long n = 0;
  REQUIRE(seqscen_scenario_bound(0.5, 0.5, 1, &n) == SEQSCEN_OK);
  CHECK(n == 3);
  REQUIRE(seqscen_discarded_bound(0.1, 1e-2, 2, 0, &n) == SEQSCEN_OK);
  CHECK(n == seqscen::scenario_bound({0.1, 1e-2}, 2));

  double w = 0.0;
  REQUIRE(seqscen_lambert_w(1.0, &w) == SEQSCEN_OK);
  CHECK(w == doctest::Approx(0.5671432904097838).epsilon(1e-12));
  CHECK(seqscen_lambert_w(-1.0, &w) == SEQSCEN_DOMAIN_ERROR);

  long long kt = 0;
  REQUIRE(seqscen_max_termination(0.05, 1e-6, &kt) == SEQSCEN_OK);
  CHECK(kt == 4);

  double bw = 0.0, bv = 0.0;
  REQUIRE(seqscen_beta_params(0.2, 1e-2, 20, &bw, &bv) == SEQSCEN_OK);
  CHECK(bw == doctest::Approx(5.756462732485115).epsilon(1e-12));
  CHECK(bv == 1.0);
}

TEST_CASE("c api: schedule handle mirrors the core schedule") {
  seqscen_schedule* schedule = nullptr;
  REQUIRE(seqscen_schedule_build(0.2, 1e-2, 20, 0.1, 0, 153, 0, &schedule) == SEQSCEN_OK);
  REQUIRE(schedule != nullptr);

  auto core = seqscen::build_schedule({0.2, 1e-2}, {20, 0.1, 0, 153},
                                      seqscen::ScheduleFlavor::Full);
  CHECK(seqscen_schedule_n_final(schedule) == core.n_final);
  CHECK(seqscen_schedule_k_t(schedule) == 20);
  CHECK(seqscen_schedule_beta_w(schedule) == core.beta_w);
  CHECK(seqscen_schedule_beta_v(schedule) == core.beta_v);

  long long n_k = 0, n_kr = 0, m_k = 0;
  REQUIRE(seqscen_schedule_design_size(schedule, 8, &n_k, &n_kr) == SEQSCEN_OK);
  CHECK(n_k == core.design_sizes[7]);
  REQUIRE(seqscen_schedule_validation_size(schedule, 1, &m_k) == SEQSCEN_OK);
  CHECK(m_k == 37);
  CHECK(seqscen_schedule_validation_size(schedule, 20, &m_k) == SEQSCEN_DOMAIN_ERROR);
  CHECK(seqscen_schedule_design_size(schedule, 0, &n_k, &n_kr) == SEQSCEN_DOMAIN_ERROR);
  seqscen_schedule_free(schedule);

  // Full flavor rejects a discard budget.
  schedule = nullptr;
  CHECK(seqscen_schedule_build(0.2, 1e-2, 20, 0.1, 3, 153, 0, &schedule) ==
        SEQSCEN_INVALID_ARGUMENT);
  CHECK(schedule == nullptr);
}

TEST_CASE("c api: problems and runs") {
  seqscen_problem* toy = nullptr;
  REQUIRE(seqscen_problem_create("toy-max", 0, 0.0, 0, &toy) == SEQSCEN_OK);
  CHECK(seqscen_problem_dimension(toy) == 1);

  seqscen_problem* unknown = nullptr;
  CHECK(seqscen_problem_create("nope", 0, 0.0, 0, &unknown) == SEQSCEN_INVALID_ARGUMENT);

  seqscen_run* run = nullptr;
  REQUIRE(seqscen_run_full(toy, 0.1, 0.1, 5, 0.1, 42, &run) == SEQSCEN_OK);
  CHECK(seqscen_run_status(run) == SEQSCEN_RUN_SOLUTION);
  CHECK(seqscen_run_exit_iteration(run) >= 1);

  double theta = 0.0;
  CHECK(seqscen_run_theta(run, &theta, 1) == 1);
  CHECK(theta == doctest::Approx(seqscen_run_objective(run)));

  long long trace_len = seqscen_run_trace_length(run);
  REQUIRE(trace_len >= 1);
  seqscen_trace_row row{};
  REQUIRE(seqscen_run_trace_row(run, trace_len - 1, &row) == SEQSCEN_OK);
  CHECK(row.accepted == 1);
  CHECK(row.k == seqscen_run_exit_iteration(run));
  CHECK(seqscen_run_trace_row(run, trace_len, &row) == SEQSCEN_DOMAIN_ERROR);

  // Identical seeds give identical results through the C surface too.
  seqscen_run* replay = nullptr;
  REQUIRE(seqscen_run_full(toy, 0.1, 0.1, 5, 0.1, 42, &replay) == SEQSCEN_OK);
  CHECK(seqscen_run_objective(replay) == seqscen_run_objective(run));
  CHECK(seqscen_run_exit_iteration(replay) == seqscen_run_exit_iteration(run));
  seqscen_run_free(replay);
  seqscen_run_free(run);

  seqscen_run* partial = nullptr;
  REQUIRE(seqscen_run_partial(toy, 0.1, 0.1, 5, 0.1, 0, SEQSCEN_DISCARD_GREEDY, 42,
                              &partial) == SEQSCEN_OK);
  CHECK(seqscen_run_status(partial) == SEQSCEN_RUN_SOLUTION);
  seqscen_run_free(partial);

  seqscen_run* oneshot = nullptr;
  REQUIRE(seqscen_run_oneshot(toy, 0.1, 0.01, 7, &oneshot) == SEQSCEN_OK);
  CHECK(seqscen_run_design_samples(oneshot) == seqscen::scenario_bound({0.1, 0.01}, 1));
  seqscen_run_free(oneshot);

  seqscen_run* discarded = nullptr;
  REQUIRE(seqscen_run_oneshot_discarded(toy, 0.2, 0.05, 1, SEQSCEN_DISCARD_GREEDY, 7,
                                        &discarded) == SEQSCEN_OK);
  CHECK(seqscen_run_status(discarded) == SEQSCEN_RUN_SOLUTION);
  seqscen_run_free(discarded);

  CHECK(seqscen_run_full(toy, 0.1, 0.1, 1, 0.1, 42, &run) == SEQSCEN_INVALID_ARGUMENT);
  CHECK(seqscen_run_partial(toy, 0.1, 0.1, 5, 0.1, 0, 9, 42, &partial) ==
        SEQSCEN_INVALID_ARGUMENT);
  seqscen_problem_free(toy);
}

TEST_CASE("c api: experiments") {
  seqscen_experiment_config config{};
  config.problem = "toy-max";
  config.algorithm = SEQSCEN_ALG_FULL;
  config.epsilon = 0.1;
  config.delta = 0.1;
  config.k_t = 5;
  config.alpha = 0.1;
  config.r = 0;
  config.discard_mode = SEQSCEN_DISCARD_GREEDY;
  config.repetitions = 30;
  config.seed = 11;
  config.jobs = 2;
  config.timing = 0;

  seqscen_experiment* experiment = nullptr;
  REQUIRE(seqscen_experiment_run(&config, &experiment) == SEQSCEN_OK);
  CHECK(seqscen_experiment_repetitions(experiment) == 30);
  CHECK(seqscen_experiment_solutions(experiment) == 30);
  CHECK(seqscen_experiment_failures(experiment) == 0);

  double mean = 0.0, worst = 0.0;
  REQUIRE(seqscen_experiment_stat(experiment, SEQSCEN_METRIC_DESIGN_SAMPLES,
                                  SEQSCEN_STAT_MEAN, &mean) == SEQSCEN_OK);
  REQUIRE(seqscen_experiment_stat(experiment, SEQSCEN_METRIC_DESIGN_SAMPLES,
                                  SEQSCEN_STAT_WORST, &worst) == SEQSCEN_OK);
  CHECK(worst >= mean);
  CHECK(seqscen_experiment_stat(experiment, 99, SEQSCEN_STAT_MEAN, &mean) ==
        SEQSCEN_INVALID_ARGUMENT);

  // CSV through the C API equals the core CSV for the same config.
  seqscen::ExperimentConfig core_config;
  core_config.problem = "toy-max";
  core_config.algorithm = seqscen::Algorithm::Full;
  core_config.epsilon = 0.1;
  core_config.delta = 0.1;
  core_config.k_t = 5;
  core_config.repetitions = 30;
  core_config.master_seed = 11;
  core_config.jobs = 2;
  CHECK(seqscen_experiment_csv(experiment) == seqscen::run_experiment(core_config).to_csv());

  auto path = std::filesystem::temp_directory_path() / "seqscen_capi_test.csv";
  REQUIRE(seqscen_experiment_write_csv(experiment, path.string().c_str()) == SEQSCEN_OK);
  std::ifstream file(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(file)),
                      std::istreambuf_iterator<char>());
  CHECK(content == seqscen_experiment_csv(experiment));
  std::filesystem::remove(path);

  CHECK(seqscen_experiment_write_csv(experiment, "/nonexistent-dir/x.csv") ==
        SEQSCEN_IO_ERROR);
  seqscen_experiment_free(experiment);

  config.repetitions = 0;
  CHECK(seqscen_experiment_run(&config, &experiment) == SEQSCEN_INVALID_ARGUMENT);
}

TEST_CASE("c api: certify") {
  seqscen_problem* toy = nullptr;
  REQUIRE(seqscen_problem_create("toy-max", 0, 0.0, 0, &toy) == SEQSCEN_OK);

  double theta = 1.0;
  int certified = 0;
  double empirical = -1.0;
  long long m = 0;
  REQUIRE(seqscen_certify(toy, &theta, 1, 0.2, 0.01, 0.0, 5, &certified, &empirical, &m) ==
          SEQSCEN_OK);
  CHECK(certified == 1);
  CHECK(empirical == 0.0);
  CHECK(m > 0);

  theta = 0.0;
  REQUIRE(seqscen_certify(toy, &theta, 1, 0.2, 0.01, 0.0, 5, &certified, &empirical, &m) ==
          SEQSCEN_OK);
  CHECK(certified == 0);
  CHECK(empirical > 0.95);

  CHECK(seqscen_certify(toy, &theta, 1, 0.2, 0.01, 0.3, 5, &certified, &empirical, &m) ==
        SEQSCEN_INVALID_ARGUMENT);
  seqscen_problem_free(toy);
}
