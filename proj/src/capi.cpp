// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <string>

#include "seqscen/bounds.hpp"
#include "seqscen/errors.hpp"
#include "seqscen/harness.hpp"
#include "seqscen/problem.hpp"
#include "seqscen/sequential.hpp"

namespace {

thread_local std::string g_last_error;

seqscen_status fail(seqscen_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs `fn` and maps the C++ error idiom onto status codes.
template <typename Fn>
seqscen_status guarded(Fn&& fn) {
  try {
    fn();
    return SEQSCEN_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SEQSCEN_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SEQSCEN_DOMAIN_ERROR, e.what());
  } catch (const seqscen::CapacityError& e) {
    return fail(SEQSCEN_CAPACITY_ERROR, e.what());
  } catch (const seqscen::NumericError& e) {
    return fail(SEQSCEN_NUMERIC_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SEQSCEN_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(SEQSCEN_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(SEQSCEN_INTERNAL_ERROR, "unknown error");
  }
}

seqscen_status require(bool ok, const char* message) {
  return ok ? SEQSCEN_OK : fail(SEQSCEN_INVALID_ARGUMENT, message);
}

}  // namespace

struct seqscen_schedule {
  seqscen::SampleSchedule schedule;
};

struct seqscen_problem {
  seqscen::UncertainProblem problem;
};

struct seqscen_run {
  seqscen::RunResult result;
};

struct seqscen_experiment {
  seqscen::ExperimentReport report;
  std::string csv;  // rendered once; stable storage for seqscen_experiment_csv
};

extern "C" {

const char* seqscen_version(void) { return SEQSCEN_VERSION; }

const char* seqscen_last_error(void) { return g_last_error.c_str(); }

seqscen_status seqscen_binomial_tail(long long trials, long long count, double epsilon,
                                     double* out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] { *out = seqscen::binomial_tail(trials, count, epsilon); });
}

seqscen_status seqscen_scenario_bound(double epsilon, double delta, long long n_theta,
                                      long long* out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    *out = seqscen::scenario_bound(seqscen::ProbabilisticLevels(epsilon, delta), n_theta);
  });
}

seqscen_status seqscen_discarded_bound(double epsilon, double delta, long long n_theta,
                                       long long r, long long* out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    *out =
        seqscen::discarded_bound(seqscen::ProbabilisticLevels(epsilon, delta), n_theta, r);
  });
}

seqscen_status seqscen_lambert_w(double x, double* out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] { *out = seqscen::lambert_w(x); });
}

seqscen_status seqscen_max_termination(double epsilon, double delta, long long* out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    *out = seqscen::max_termination_parameter(seqscen::ProbabilisticLevels(epsilon, delta));
  });
}

seqscen_status seqscen_beta_params(double epsilon, double delta, long long k_t,
                                   double* beta_w, double* beta_v) {
  if (auto s = require(beta_w != nullptr && beta_v != nullptr, "outputs must not be null"))
    return s;
  return guarded([&] {
    auto betas = seqscen::beta_params(seqscen::ProbabilisticLevels(epsilon, delta), k_t);
    *beta_w = betas.beta_w;
    *beta_v = betas.beta_v;
  });
}

seqscen_status seqscen_schedule_build(double epsilon, double delta, long long k_t,
                                      double alpha, long long r, long long n_theta,
                                      int partial, seqscen_schedule** out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    seqscen::ScheduleParams params{k_t, alpha, r, n_theta};
    auto schedule = seqscen::build_schedule(
        seqscen::ProbabilisticLevels(epsilon, delta), params,
        partial ? seqscen::ScheduleFlavor::Partial : seqscen::ScheduleFlavor::Full);
    *out = new seqscen_schedule{std::move(schedule)};
  });
}

void seqscen_schedule_free(seqscen_schedule* schedule) { delete schedule; }

long long seqscen_schedule_n_final(const seqscen_schedule* schedule) {
  return schedule ? schedule->schedule.n_final : 0;
}

long long seqscen_schedule_k_t(const seqscen_schedule* schedule) {
  return schedule ? schedule->schedule.params.k_t : 0;
}

double seqscen_schedule_beta_w(const seqscen_schedule* schedule) {
  return schedule ? schedule->schedule.beta_w : 0.0;
}

double seqscen_schedule_beta_v(const seqscen_schedule* schedule) {
  return schedule ? schedule->schedule.beta_v : 0.0;
}

seqscen_status seqscen_schedule_design_size(const seqscen_schedule* schedule, long long k,
                                            long long* n_k, long long* n_kr) {
  if (auto s = require(schedule && n_k && n_kr, "null argument")) return s;
  const auto& sched = schedule->schedule;
  if (k < 1 || k > sched.params.k_t)
    return fail(SEQSCEN_DOMAIN_ERROR, "k must lie in [1, k_t]");
  *n_k = sched.design_sizes[static_cast<std::size_t>(k - 1)];
  *n_kr = sched.constrained_sizes[static_cast<std::size_t>(k - 1)];
  return SEQSCEN_OK;
}

seqscen_status seqscen_schedule_validation_size(const seqscen_schedule* schedule,
                                                long long k, long long* m_k) {
  if (auto s = require(schedule && m_k, "null argument")) return s;
  const auto& sched = schedule->schedule;
  if (k < 1 || k >= sched.params.k_t)
    return fail(SEQSCEN_DOMAIN_ERROR, "k must lie in [1, k_t - 1]");
  *m_k = sched.validation_sizes[static_cast<std::size_t>(k - 1)];
  return SEQSCEN_OK;
}

seqscen_status seqscen_problem_create(const char* name, long long n_theta, double spread,
                                      unsigned long long problem_seed,
                                      seqscen_problem** out) {
  if (auto s = require(out != nullptr && name != nullptr, "null argument")) return s;
  return guarded([&] {
    *out = new seqscen_problem{seqscen::make_problem(name, n_theta, spread, problem_seed)};
  });
}

void seqscen_problem_free(seqscen_problem* problem) { delete problem; }

long long seqscen_problem_dimension(const seqscen_problem* problem) {
  return problem ? problem->problem.n_theta : 0;
}

namespace {

seqscen::DiscardMode to_mode(int discard_mode) {
  if (discard_mode == SEQSCEN_DISCARD_PREFIX) return seqscen::DiscardMode::Prefix;
  if (discard_mode == SEQSCEN_DISCARD_GREEDY) return seqscen::DiscardMode::Greedy;
  throw std::invalid_argument("discard_mode must be greedy (0) or prefix (1)");
}

}  // namespace

seqscen_status seqscen_run_full(const seqscen_problem* problem, double epsilon,
                                double delta, long long k_t, double alpha,
                                unsigned long long seed, seqscen_run** out) {
  if (auto s = require(problem && out, "null argument")) return s;
  return guarded([&] {
    seqscen::ScheduleParams params{k_t, alpha, 0, problem->problem.n_theta};
    *out = new seqscen_run{seqscen::run_full(
        problem->problem, seqscen::ProbabilisticLevels(epsilon, delta), params, seed)};
  });
}

seqscen_status seqscen_run_partial(const seqscen_problem* problem, double epsilon,
                                   double delta, long long k_t, double alpha, long long r,
                                   int discard_mode, unsigned long long seed,
                                   seqscen_run** out) {
  if (auto s = require(problem && out, "null argument")) return s;
  return guarded([&] {
    seqscen::ScheduleParams params{k_t, alpha, r, problem->problem.n_theta};
    *out = new seqscen_run{seqscen::run_partial(
        problem->problem, seqscen::ProbabilisticLevels(epsilon, delta), params,
        to_mode(discard_mode), seed)};
  });
}

seqscen_status seqscen_run_oneshot(const seqscen_problem* problem, double epsilon,
                                   double delta, unsigned long long seed,
                                   seqscen_run** out) {
  if (auto s = require(problem && out, "null argument")) return s;
  return guarded([&] {
    *out = new seqscen_run{seqscen::run_oneshot(
        problem->problem, seqscen::ProbabilisticLevels(epsilon, delta), seed)};
  });
}

seqscen_status seqscen_run_oneshot_discarded(const seqscen_problem* problem,
                                             double epsilon, double delta, long long r,
                                             int discard_mode, unsigned long long seed,
                                             seqscen_run** out) {
  if (auto s = require(problem && out, "null argument")) return s;
  return guarded([&] {
    *out = new seqscen_run{seqscen::run_oneshot_discarded(
        problem->problem, seqscen::ProbabilisticLevels(epsilon, delta), r,
        to_mode(discard_mode), seed)};
  });
}

void seqscen_run_free(seqscen_run* run) { delete run; }

int seqscen_run_status(const seqscen_run* run) {
  if (!run) return SEQSCEN_RUN_NUMERIC_FAILURE;
  switch (run->result.status) {
    case seqscen::RunStatus::Solution: return SEQSCEN_RUN_SOLUTION;
    case seqscen::RunStatus::InfeasibleDeclared: return SEQSCEN_RUN_INFEASIBLE;
    case seqscen::RunStatus::NumericFailure: return SEQSCEN_RUN_NUMERIC_FAILURE;
  }
  return SEQSCEN_RUN_NUMERIC_FAILURE;
}

long long seqscen_run_exit_iteration(const seqscen_run* run) {
  return run ? run->result.exit_iteration : 0;
}

long long seqscen_run_design_samples(const seqscen_run* run) {
  return run ? run->result.design_samples_at_exit : 0;
}

long long seqscen_run_validation_samples(const seqscen_run* run) {
  return run ? run->result.validation_samples_at_exit : 0;
}

long long seqscen_run_cumulative_design(const seqscen_run* run) {
  return run ? run->result.cumulative_design_samples : 0;
}

long long seqscen_run_cumulative_validation(const seqscen_run* run) {
  return run ? run->result.cumulative_validation_samples : 0;
}

double seqscen_run_objective(const seqscen_run* run) {
  return run ? run->result.objective : 0.0;
}

double seqscen_run_wall_seconds(const seqscen_run* run) {
  return run ? run->result.wall_seconds : 0.0;
}

long long seqscen_run_theta(const seqscen_run* run, double* buffer, long long cap) {
  if (!run) return 0;
  const auto& theta = run->result.theta_sol;
  const long long len = static_cast<long long>(theta.size());
  if (buffer && cap > 0) {
    const long long n = std::min(cap, len);
    std::memcpy(buffer, theta.data(), static_cast<std::size_t>(n) * sizeof(double));
  }
  return len;
}

long long seqscen_run_trace_length(const seqscen_run* run) {
  return run ? static_cast<long long>(run->result.trace.size()) : 0;
}

seqscen_status seqscen_run_trace_row(const seqscen_run* run, long long index,
                                     seqscen_trace_row* out) {
  if (auto s = require(run && out, "null argument")) return s;
  if (index < 0 || index >= static_cast<long long>(run->result.trace.size()))
    return fail(SEQSCEN_DOMAIN_ERROR, "trace index out of range");
  const auto& rec = run->result.trace[static_cast<std::size_t>(index)];
  out->k = rec.k;
  out->design_size = rec.design_size;
  out->enforced_size = rec.enforced_size;
  out->validation_size = rec.validation_size;
  switch (rec.solve_status) {
    case seqscen::SolveStatus::Feasible: out->solve_status = SEQSCEN_SOLVE_FEASIBLE; break;
    case seqscen::SolveStatus::Infeasible:
      out->solve_status = SEQSCEN_SOLVE_INFEASIBLE;
      break;
    case seqscen::SolveStatus::NumericFailure:
      out->solve_status = SEQSCEN_SOLVE_NUMERIC_FAILURE;
      break;
  }
  out->objective = rec.objective;
  out->violations = rec.violations;
  out->validation_evaluated = rec.validation_evaluated;
  out->threshold = rec.threshold;
  out->accepted = rec.accepted ? 1 : 0;
  return SEQSCEN_OK;
}

seqscen_status seqscen_experiment_run(const seqscen_experiment_config* config,
                                      seqscen_experiment** out) {
  if (auto s = require(config && out && config->problem, "null argument")) return s;
  return guarded([&] {
    seqscen::ExperimentConfig cfg;
    cfg.problem = config->problem;
    cfg.problem_n_theta = config->problem_n_theta;
    cfg.problem_spread = config->problem_spread;
    cfg.problem_seed = config->problem_seed;
    switch (config->algorithm) {
      case SEQSCEN_ALG_FULL: cfg.algorithm = seqscen::Algorithm::Full; break;
      case SEQSCEN_ALG_PARTIAL: cfg.algorithm = seqscen::Algorithm::Partial; break;
      case SEQSCEN_ALG_ONESHOT: cfg.algorithm = seqscen::Algorithm::OneShot; break;
      case SEQSCEN_ALG_ONESHOT_DISCARDED:
        cfg.algorithm = seqscen::Algorithm::OneShotDiscarded;
        break;
      default: throw std::invalid_argument("unknown algorithm code");
    }
    cfg.epsilon = config->epsilon;
    cfg.delta = config->delta;
    cfg.k_t = config->k_t;
    cfg.alpha = config->alpha;
    cfg.r = config->r;
    cfg.mode = to_mode(config->discard_mode);
    cfg.repetitions = config->repetitions;
    cfg.master_seed = config->seed;
    cfg.jobs = config->jobs;
    cfg.record_timing = config->timing != 0;

    auto report = seqscen::run_experiment(cfg);
    auto* handle = new seqscen_experiment{std::move(report), {}};
    handle->csv = handle->report.to_csv();
    *out = handle;
  });
}

void seqscen_experiment_free(seqscen_experiment* experiment) { delete experiment; }

const char* seqscen_experiment_csv(const seqscen_experiment* experiment) {
  return experiment ? experiment->csv.c_str() : "";
}

seqscen_status seqscen_experiment_write_csv(const seqscen_experiment* experiment,
                                            const char* path) {
  if (auto s = require(experiment && path, "null argument")) return s;
  std::ofstream file(path, std::ios::binary);
  if (!file) return fail(SEQSCEN_IO_ERROR, std::string("cannot open for writing: ") + path);
  file << experiment->csv;
  file.flush();
  if (!file) return fail(SEQSCEN_IO_ERROR, std::string("write failed: ") + path);
  return SEQSCEN_OK;
}

seqscen_status seqscen_experiment_stat(const seqscen_experiment* experiment, int metric,
                                       int stat, double* out) {
  if (auto s = require(experiment && out, "null argument")) return s;
  const seqscen::MetricStats* stats = nullptr;
  switch (metric) {
    case SEQSCEN_METRIC_DESIGN_SAMPLES: stats = &experiment->report.design_samples; break;
    case SEQSCEN_METRIC_VALIDATION_SAMPLES:
      stats = &experiment->report.validation_samples;
      break;
    case SEQSCEN_METRIC_OBJECTIVE: stats = &experiment->report.objective; break;
    case SEQSCEN_METRIC_EXIT_ITERATION: stats = &experiment->report.exit_iteration; break;
    case SEQSCEN_METRIC_WALL_TIME: stats = &experiment->report.wall_time_s; break;
    default: return fail(SEQSCEN_INVALID_ARGUMENT, "unknown metric code");
  }
  switch (stat) {
    case SEQSCEN_STAT_MEAN: *out = stats->mean; break;
    case SEQSCEN_STAT_STDDEV: *out = stats->stddev; break;
    case SEQSCEN_STAT_WORST: *out = stats->worst; break;
    default: return fail(SEQSCEN_INVALID_ARGUMENT, "unknown stat code");
  }
  return SEQSCEN_OK;
}

long long seqscen_experiment_repetitions(const seqscen_experiment* experiment) {
  return experiment ? static_cast<long long>(experiment->report.rows.size()) : 0;
}

long long seqscen_experiment_solutions(const seqscen_experiment* experiment) {
  return experiment ? experiment->report.solutions : 0;
}

long long seqscen_experiment_infeasible(const seqscen_experiment* experiment) {
  return experiment ? experiment->report.infeasible : 0;
}

long long seqscen_experiment_failures(const seqscen_experiment* experiment) {
  return experiment ? experiment->report.numeric_failures : 0;
}

seqscen_status seqscen_certify(const seqscen_problem* problem, const double* theta,
                               long long theta_len, double epsilon, double delta,
                               double tau, unsigned long long seed, int* certified,
                               double* empirical, long long* samples_used) {
  if (auto s = require(problem && theta && certified && empirical && samples_used,
                       "null argument"))
    return s;
  return guarded([&] {
    std::span<const double> theta_view(theta, static_cast<std::size_t>(theta_len));
    auto result = seqscen::certify(problem->problem, theta_view,
                                   seqscen::ProbabilisticLevels(epsilon, delta), tau, seed);
    *certified = result.certified ? 1 : 0;
    *empirical = result.empirical.value();
    *samples_used = result.sample_count;
  });
}

} /* extern "C" */
