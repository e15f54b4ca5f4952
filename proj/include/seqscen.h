/*
 * Copyright (c) 2026 The seqscen authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the seqscen library: sequential randomized algorithms for
 * scenario optimization under uncertainty.
 *
 * Conventions:
 *   - Every fallible function returns a seqscen_status; outputs go through
 *     pointer parameters. SEQSCEN_OK is 0.
 *   - On failure, seqscen_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Objects are opaque handles created by the _create/_build/_run
 *     functions and released with the matching _free. Handles are immutable
 *     after creation and may be read from any thread; creation/destruction
 *     of a given handle must not race with its use.
 */

#ifndef SEQSCEN_H
#define SEQSCEN_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SEQSCEN_BUILD)
#    define SEQSCEN_API __declspec(dllexport)
#  else
#    define SEQSCEN_API __declspec(dllimport)
#  endif
#else
#  define SEQSCEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SEQSCEN_VERSION "0.1.0"

/* Library version string (compile-time SEQSCEN_VERSION of the build). */
SEQSCEN_API const char* seqscen_version(void);

typedef enum seqscen_status {
  SEQSCEN_OK = 0,
  SEQSCEN_INVALID_ARGUMENT = 1, /* bad parameter value or combination */
  SEQSCEN_DOMAIN_ERROR = 2,     /* argument outside an operation's domain */
  SEQSCEN_CAPACITY_ERROR = 3,   /* sample-size search exceeded its cap */
  SEQSCEN_NUMERIC_ERROR = 4,    /* numeric routine failed to converge */
  SEQSCEN_IO_ERROR = 5,         /* file could not be written */
  SEQSCEN_NOMEM = 6,
  SEQSCEN_INTERNAL_ERROR = 7,
} seqscen_status;

/* Message describing the most recent failure on this thread ("" if none). */
SEQSCEN_API const char* seqscen_last_error(void);

/* ---------------------------------------------------------------------- */
/* Sample-complexity arithmetic                                            */
/* ---------------------------------------------------------------------- */

/* Lower binomial tail: sum_{i=0}^{count} C(trials,i) eps^i (1-eps)^(trials-i). */
SEQSCEN_API seqscen_status seqscen_binomial_tail(long long trials, long long count,
                                                 double epsilon, double* out);

/* Smallest N with the scenario inequality at confidence delta. */
SEQSCEN_API seqscen_status seqscen_scenario_bound(double epsilon, double delta,
                                                  long long n_theta, long long* out);

/* Smallest N for the discarded-constraints inequality (r removals). */
SEQSCEN_API seqscen_status seqscen_discarded_bound(double epsilon, double delta,
                                                   long long n_theta, long long r,
                                                   long long* out);

/* Principal-branch Lambert W, x >= 0. */
SEQSCEN_API seqscen_status seqscen_lambert_w(double x, double* out);

/* Largest termination parameter with unclamped beta_v >= 1 (advisory). */
SEQSCEN_API seqscen_status seqscen_max_termination(double epsilon, double delta,
                                                   long long* out);

SEQSCEN_API seqscen_status seqscen_beta_params(double epsilon, double delta,
                                               long long k_t, double* beta_w,
                                               double* beta_v);

/* ---------------------------------------------------------------------- */
/* Sample schedules                                                        */
/* ---------------------------------------------------------------------- */

typedef struct seqscen_schedule seqscen_schedule;

/* partial = 0 builds the full-satisfaction schedule (r must be 0),
 * partial != 0 the partial-satisfaction schedule with discard budget r.
 * n_final is resolved at confidence delta/2. */
SEQSCEN_API seqscen_status seqscen_schedule_build(double epsilon, double delta,
                                                  long long k_t, double alpha,
                                                  long long r, long long n_theta,
                                                  int partial, seqscen_schedule** out);
SEQSCEN_API void seqscen_schedule_free(seqscen_schedule* schedule);

SEQSCEN_API long long seqscen_schedule_n_final(const seqscen_schedule* schedule);
SEQSCEN_API long long seqscen_schedule_k_t(const seqscen_schedule* schedule);
SEQSCEN_API double seqscen_schedule_beta_w(const seqscen_schedule* schedule);
SEQSCEN_API double seqscen_schedule_beta_v(const seqscen_schedule* schedule);

/* Design sizes at iteration k in [1, k_t]: N_k and N_{k,r}. */
SEQSCEN_API seqscen_status seqscen_schedule_design_size(const seqscen_schedule* schedule,
                                                        long long k, long long* n_k,
                                                        long long* n_kr);

/* Validation size M_k at iteration k in [1, k_t - 1]. */
SEQSCEN_API seqscen_status seqscen_schedule_validation_size(
    const seqscen_schedule* schedule, long long k, long long* m_k);

/* ---------------------------------------------------------------------- */
/* Benchmark problems                                                      */
/* ---------------------------------------------------------------------- */

typedef struct seqscen_problem seqscen_problem;

/* name: "toy-max" (n_theta/spread/problem_seed ignored) or "uncertain-lp". */
SEQSCEN_API seqscen_status seqscen_problem_create(const char* name, long long n_theta,
                                                  double spread,
                                                  unsigned long long problem_seed,
                                                  seqscen_problem** out);
SEQSCEN_API void seqscen_problem_free(seqscen_problem* problem);
SEQSCEN_API long long seqscen_problem_dimension(const seqscen_problem* problem);

/* ---------------------------------------------------------------------- */
/* Algorithm runs                                                          */
/* ---------------------------------------------------------------------- */

typedef struct seqscen_run seqscen_run;

enum {
  SEQSCEN_RUN_SOLUTION = 0,
  SEQSCEN_RUN_INFEASIBLE = 1,
  SEQSCEN_RUN_NUMERIC_FAILURE = 2,
};

enum {
  SEQSCEN_SOLVE_FEASIBLE = 0,
  SEQSCEN_SOLVE_INFEASIBLE = 1,
  SEQSCEN_SOLVE_NUMERIC_FAILURE = 2,
};

enum {
  SEQSCEN_DISCARD_GREEDY = 0,
  SEQSCEN_DISCARD_PREFIX = 1,
};

SEQSCEN_API seqscen_status seqscen_run_full(const seqscen_problem* problem,
                                            double epsilon, double delta, long long k_t,
                                            double alpha, unsigned long long seed,
                                            seqscen_run** out);

SEQSCEN_API seqscen_status seqscen_run_partial(const seqscen_problem* problem,
                                               double epsilon, double delta,
                                               long long k_t, double alpha, long long r,
                                               int discard_mode, unsigned long long seed,
                                               seqscen_run** out);

SEQSCEN_API seqscen_status seqscen_run_oneshot(const seqscen_problem* problem,
                                               double epsilon, double delta,
                                               unsigned long long seed,
                                               seqscen_run** out);

SEQSCEN_API seqscen_status seqscen_run_oneshot_discarded(const seqscen_problem* problem,
                                                         double epsilon, double delta,
                                                         long long r, int discard_mode,
                                                         unsigned long long seed,
                                                         seqscen_run** out);

SEQSCEN_API void seqscen_run_free(seqscen_run* run);

SEQSCEN_API int seqscen_run_status(const seqscen_run* run);
SEQSCEN_API long long seqscen_run_exit_iteration(const seqscen_run* run);
SEQSCEN_API long long seqscen_run_design_samples(const seqscen_run* run);
SEQSCEN_API long long seqscen_run_validation_samples(const seqscen_run* run);
SEQSCEN_API long long seqscen_run_cumulative_design(const seqscen_run* run);
SEQSCEN_API long long seqscen_run_cumulative_validation(const seqscen_run* run);
SEQSCEN_API double seqscen_run_objective(const seqscen_run* run);
SEQSCEN_API double seqscen_run_wall_seconds(const seqscen_run* run);

/* Solution vector: writes min(cap, dimension) entries, returns the dimension
 * (0 when the run carries no solution). */
SEQSCEN_API long long seqscen_run_theta(const seqscen_run* run, double* buffer,
                                        long long cap);

typedef struct seqscen_trace_row {
  long long k;
  long long design_size;
  long long enforced_size;
  long long validation_size;
  int solve_status; /* SEQSCEN_SOLVE_* */
  double objective;
  long long violations;
  long long validation_evaluated;
  double threshold;
  int accepted;
} seqscen_trace_row;

SEQSCEN_API long long seqscen_run_trace_length(const seqscen_run* run);
SEQSCEN_API seqscen_status seqscen_run_trace_row(const seqscen_run* run, long long index,
                                                 seqscen_trace_row* out);

/* ---------------------------------------------------------------------- */
/* Monte Carlo experiments                                                 */
/* ---------------------------------------------------------------------- */

enum {
  SEQSCEN_ALG_FULL = 0,
  SEQSCEN_ALG_PARTIAL = 1,
  SEQSCEN_ALG_ONESHOT = 2,
  SEQSCEN_ALG_ONESHOT_DISCARDED = 3,
};

typedef struct seqscen_experiment_config {
  const char* problem;             /* "toy-max" or "uncertain-lp" */
  long long problem_n_theta;       /* uncertain-lp only */
  double problem_spread;           /* uncertain-lp only */
  unsigned long long problem_seed; /* uncertain-lp only */
  int algorithm;                   /* SEQSCEN_ALG_* */
  double epsilon;
  double delta;
  long long k_t;
  double alpha;
  long long r;
  int discard_mode; /* SEQSCEN_DISCARD_* */
  long long repetitions;
  unsigned long long seed;
  int jobs;   /* worker threads (>= 1); does not affect the report */
  int timing; /* nonzero: record real wall times (CSV no longer byte-stable) */
} seqscen_experiment_config;

typedef struct seqscen_experiment seqscen_experiment;

SEQSCEN_API seqscen_status seqscen_experiment_run(const seqscen_experiment_config* config,
                                                  seqscen_experiment** out);
SEQSCEN_API void seqscen_experiment_free(seqscen_experiment* experiment);

/* CSV text owned by the handle; valid until seqscen_experiment_free. */
SEQSCEN_API const char* seqscen_experiment_csv(const seqscen_experiment* experiment);
SEQSCEN_API seqscen_status seqscen_experiment_write_csv(
    const seqscen_experiment* experiment, const char* path);

enum {
  SEQSCEN_METRIC_DESIGN_SAMPLES = 0,
  SEQSCEN_METRIC_VALIDATION_SAMPLES = 1,
  SEQSCEN_METRIC_OBJECTIVE = 2,
  SEQSCEN_METRIC_EXIT_ITERATION = 3,
  SEQSCEN_METRIC_WALL_TIME = 4,
};

enum {
  SEQSCEN_STAT_MEAN = 0,
  SEQSCEN_STAT_STDDEV = 1,
  SEQSCEN_STAT_WORST = 2,
};

SEQSCEN_API seqscen_status seqscen_experiment_stat(const seqscen_experiment* experiment,
                                                   int metric, int stat, double* out);

SEQSCEN_API long long seqscen_experiment_repetitions(const seqscen_experiment* experiment);
SEQSCEN_API long long seqscen_experiment_solutions(const seqscen_experiment* experiment);
SEQSCEN_API long long seqscen_experiment_infeasible(const seqscen_experiment* experiment);
SEQSCEN_API long long seqscen_experiment_failures(const seqscen_experiment* experiment);

/* ---------------------------------------------------------------------- */
/* A posteriori certification                                              */
/* ---------------------------------------------------------------------- */

/* Draws ceil(ln(1/delta)/(2 tau^2)) fresh points and certifies when the
 * empirical violation is at most epsilon - tau. tau <= 0 selects epsilon/4.
 * certified: 1/0; empirical: violated fraction; samples_used: M. */
SEQSCEN_API seqscen_status seqscen_certify(const seqscen_problem* problem,
                                           const double* theta, long long theta_len,
                                           double epsilon, double delta, double tau,
                                           unsigned long long seed, int* certified,
                                           double* empirical, long long* samples_used);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEQSCEN_H */
