// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

// seqscen command-line tool. Talks to the library exclusively through the
// C API in seqscen.h.

#include <seqscen.h>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAllFailed = 3;

struct Options {
  double epsilon = 0.1;
  double delta = 0.1;
  long long n_theta = 2;
  long long k_t = 20;
  double alpha = 0.1;
  long long r = 0;
  std::string mode = "greedy";
  std::string algorithm = "full";
  std::string problem = "toy-max";
  double spread = 0.5;
  unsigned long long problem_seed = 1;
  long long reps = 100;
  unsigned long long seed = 0;
  std::string out;
  int jobs = 1;
  bool timing = false;
  bool as_json = false;
  std::string theta_text;
  double tau = 0.0;
};

// Exits with a usage error when a C-API call rejects the arguments.
[[noreturn]] void die(const char* context) {
  std::fprintf(stderr, "error: %s: %s\n", context, seqscen_last_error());
  std::exit(kExitUsage);
}

void check(seqscen_status status, const char* context) {
  if (status != SEQSCEN_OK) die(context);
}

int discard_mode(const Options& opt) {
  if (opt.mode == "greedy") return SEQSCEN_DISCARD_GREEDY;
  if (opt.mode == "prefix") return SEQSCEN_DISCARD_PREFIX;
  std::fprintf(stderr, "error: --mode must be greedy or prefix\n");
  std::exit(kExitUsage);
}

int algorithm_code(const Options& opt) {
  if (opt.algorithm == "full") return SEQSCEN_ALG_FULL;
  if (opt.algorithm == "partial") return SEQSCEN_ALG_PARTIAL;
  if (opt.algorithm == "oneshot") return SEQSCEN_ALG_ONESHOT;
  if (opt.algorithm == "oneshot-discarded") return SEQSCEN_ALG_ONESHOT_DISCARDED;
  std::fprintf(stderr,
               "error: --algorithm must be full, partial, oneshot or oneshot-discarded\n");
  std::exit(kExitUsage);
}

struct ProblemHandle {
  seqscen_problem* ptr = nullptr;
  ~ProblemHandle() { seqscen_problem_free(ptr); }
};

void make_problem(const Options& opt, ProblemHandle& handle) {
  check(seqscen_problem_create(opt.problem.c_str(), opt.n_theta, opt.spread,
                               opt.problem_seed, &handle.ptr),
        "problem");
}

void warn_if_kt_beyond_advisory(const Options& opt) {
  long long kt_max = 0;
  if (seqscen_max_termination(opt.epsilon, opt.delta, &kt_max) == SEQSCEN_OK &&
      opt.k_t > kt_max) {
    std::fprintf(stderr,
                 "warning: k_t = %lld exceeds the advisable maximum %lld for these "
                 "levels (beta_v is clamped to 1)\n",
                 opt.k_t, kt_max);
  }
}

int cmd_bounds(const Options& opt) {
  long long scenario_n = 0;
  check(seqscen_discarded_bound(opt.epsilon, opt.delta, opt.n_theta, opt.r, &scenario_n),
        "bounds");

  double beta_w = 0.0, beta_v = 0.0;
  check(seqscen_beta_params(opt.epsilon, opt.delta, opt.k_t, &beta_w, &beta_v), "bounds");
  long long kt_max = 0;
  check(seqscen_max_termination(opt.epsilon, opt.delta, &kt_max), "bounds");
  warn_if_kt_beyond_advisory(opt);

  seqscen_schedule* full = nullptr;
  if (opt.r == 0)
    check(seqscen_schedule_build(opt.epsilon, opt.delta, opt.k_t, opt.alpha, 0,
                                 opt.n_theta, 0, &full),
          "bounds");
  seqscen_schedule* partial = nullptr;
  check(seqscen_schedule_build(opt.epsilon, opt.delta, opt.k_t, opt.alpha, opt.r,
                               opt.n_theta, 1, &partial),
        "bounds");

  long long n_final = full ? seqscen_schedule_n_final(full)
                           : seqscen_schedule_n_final(partial);

  if (opt.as_json) {
    json doc;
    doc["epsilon"] = opt.epsilon;
    doc["delta"] = opt.delta;
    doc["n_theta"] = opt.n_theta;
    doc["r"] = opt.r;
    doc["k_t"] = opt.k_t;
    doc["alpha"] = opt.alpha;
    doc["scenario_bound"] = scenario_n;
    doc["sequential_n_final"] = n_final;
    doc["beta_w"] = beta_w;
    doc["beta_v"] = beta_v;
    doc["max_termination_parameter"] = kt_max;
    json design = json::array(), constrained = json::array();
    json m_full = json::array(), m_partial = json::array();
    for (long long k = 1; k <= opt.k_t; ++k) {
      long long n_k = 0, n_kr = 0;
      check(seqscen_schedule_design_size(partial, k, &n_k, &n_kr), "bounds");
      design.push_back(n_k);
      constrained.push_back(n_kr);
    }
    for (long long k = 1; k < opt.k_t; ++k) {
      long long m_k = 0;
      if (full) {
        check(seqscen_schedule_validation_size(full, k, &m_k), "bounds");
        m_full.push_back(m_k);
      }
      check(seqscen_schedule_validation_size(partial, k, &m_k), "bounds");
      m_partial.push_back(m_k);
    }
    doc["design_sizes"] = design;
    doc["constrained_sizes"] = constrained;
    if (full) doc["validation_sizes_full"] = m_full;
    doc["validation_sizes_partial"] = m_partial;
    std::printf("%s\n", doc.dump(2).c_str());
  } else {
    std::printf("probabilistic levels: epsilon = %g, delta = %g, n_theta = %lld, r = %lld\n",
                opt.epsilon, opt.delta, opt.n_theta, opt.r);
    std::printf("one-shot scenario bound (confidence delta):    N       = %lld\n",
                scenario_n);
    std::printf("sequential bound (confidence delta/2):         N_final = %lld\n", n_final);
    std::printf("beta_w = %.6f, beta_v = %.6f, max advisable k_t = %lld\n", beta_w, beta_v,
                kt_max);
    std::printf("\nschedule for k_t = %lld, alpha = %g:\n", opt.k_t, opt.alpha);
    if (full)
      std::printf("%6s %10s %12s %14s\n", "k", "N_k", "M_k (full)", "M_k (partial)");
    else
      std::printf("%6s %10s %10s %14s\n", "k", "N_k", "N_{k,r}", "M_k (partial)");
    for (long long k = 1; k <= opt.k_t; ++k) {
      long long n_k = 0, n_kr = 0, m_f = 0, m_p = 0;
      check(seqscen_schedule_design_size(partial, k, &n_k, &n_kr), "bounds");
      bool has_m = k < opt.k_t;
      if (has_m) {
        if (full) check(seqscen_schedule_validation_size(full, k, &m_f), "bounds");
        check(seqscen_schedule_validation_size(partial, k, &m_p), "bounds");
      }
      if (full) {
        if (has_m)
          std::printf("%6lld %10lld %12lld %14lld\n", k, n_k, m_f, m_p);
        else
          std::printf("%6lld %10lld %12s %14s\n", k, n_k, "-", "-");
      } else {
        if (has_m)
          std::printf("%6lld %10lld %10lld %14lld\n", k, n_k, n_kr, m_p);
        else
          std::printf("%6lld %10lld %10lld %14s\n", k, n_k, n_kr, "-");
      }
    }
  }
  seqscen_schedule_free(full);
  seqscen_schedule_free(partial);
  return kExitOk;
}

const char* run_status_name(int status) {
  switch (status) {
    case SEQSCEN_RUN_SOLUTION: return "solution";
    case SEQSCEN_RUN_INFEASIBLE: return "infeasible-declared";
    default: return "numeric-failure";
  }
}

int cmd_run(const Options& opt) {
  ProblemHandle problem;
  make_problem(opt, problem);
  if (opt.algorithm == "partial") warn_if_kt_beyond_advisory(opt);

  seqscen_run* run = nullptr;
  switch (algorithm_code(opt)) {
    case SEQSCEN_ALG_FULL:
      check(seqscen_run_full(problem.ptr, opt.epsilon, opt.delta, opt.k_t, opt.alpha,
                             opt.seed, &run),
            "run");
      break;
    case SEQSCEN_ALG_PARTIAL:
      check(seqscen_run_partial(problem.ptr, opt.epsilon, opt.delta, opt.k_t, opt.alpha,
                                opt.r, discard_mode(opt), opt.seed, &run),
            "run");
      break;
    case SEQSCEN_ALG_ONESHOT:
      check(seqscen_run_oneshot(problem.ptr, opt.epsilon, opt.delta, opt.seed, &run),
            "run");
      break;
    default:
      check(seqscen_run_oneshot_discarded(problem.ptr, opt.epsilon, opt.delta, opt.r,
                                          discard_mode(opt), opt.seed, &run),
            "run");
      break;
  }

  int status = seqscen_run_status(run);
  std::printf("status:                %s\n", run_status_name(status));
  if (status == SEQSCEN_RUN_INFEASIBLE) {
    std::printf("note: a sampled program was infeasible; with the stated confidence this"
                " extends to the original problem\n");
  }
  std::printf("exit iteration:        %lld\n", seqscen_run_exit_iteration(run));
  std::printf("design samples (exit): %lld\n", seqscen_run_design_samples(run));
  std::printf("validation (exit):     %lld\n", seqscen_run_validation_samples(run));
  std::printf("cumulative design:     %lld\n", seqscen_run_cumulative_design(run));
  std::printf("cumulative validation: %lld\n", seqscen_run_cumulative_validation(run));
  if (status == SEQSCEN_RUN_SOLUTION) {
    std::printf("objective:             %.12g\n", seqscen_run_objective(run));
    long long dim = seqscen_run_theta(run, nullptr, 0);
    std::vector<double> theta(static_cast<std::size_t>(dim));
    seqscen_run_theta(run, theta.data(), dim);
    std::printf("theta_sol:            ");
    for (double v : theta) std::printf(" %.12g", v);
    std::printf("\n");
  }
  std::printf("wall time:             %.6f s\n", seqscen_run_wall_seconds(run));

  std::printf("\ntrace:\n%4s %8s %8s %8s %10s %12s %10s %s\n", "k", "N_k", "N_kr", "M_k",
              "violations", "threshold", "solve", "accepted");
  long long trace_len = seqscen_run_trace_length(run);
  for (long long i = 0; i < trace_len; ++i) {
    seqscen_trace_row row{};
    check(seqscen_run_trace_row(run, i, &row), "run");
    const char* solve = row.solve_status == SEQSCEN_SOLVE_FEASIBLE ? "feasible"
                        : row.solve_status == SEQSCEN_SOLVE_INFEASIBLE ? "infeasible"
                                                                       : "failure";
    std::printf("%4lld %8lld %8lld %8lld %5lld/%-5lld %12.6g %10s %s\n", row.k,
                row.design_size, row.enforced_size, row.validation_size, row.violations,
                row.validation_evaluated, row.threshold, solve,
                row.accepted ? "yes" : "no");
  }
  seqscen_run_free(run);
  return status == SEQSCEN_RUN_NUMERIC_FAILURE ? kExitAllFailed : kExitOk;
}

int cmd_benchmark(const Options& opt) {
  if (opt.algorithm == "partial") warn_if_kt_beyond_advisory(opt);
  seqscen_experiment_config config{};
  config.problem = opt.problem.c_str();
  config.problem_n_theta = opt.n_theta;
  config.problem_spread = opt.spread;
  config.problem_seed = opt.problem_seed;
  config.algorithm = algorithm_code(opt);
  config.epsilon = opt.epsilon;
  config.delta = opt.delta;
  config.k_t = opt.k_t;
  config.alpha = opt.alpha;
  config.r = opt.r;
  config.discard_mode = discard_mode(opt);
  config.repetitions = opt.reps;
  config.seed = opt.seed;
  config.jobs = opt.jobs;
  config.timing = opt.timing ? 1 : 0;

  seqscen_experiment* experiment = nullptr;
  check(seqscen_experiment_run(&config, &experiment), "benchmark");

  long long reps = seqscen_experiment_repetitions(experiment);
  long long solutions = seqscen_experiment_solutions(experiment);
  long long failures = seqscen_experiment_failures(experiment);

  if (!opt.out.empty()) {
    check(seqscen_experiment_write_csv(experiment, opt.out.c_str()), "benchmark");
    std::printf("%lld repetitions (%lld solutions, %lld infeasible, %lld failures)\n",
                reps, solutions, seqscen_experiment_infeasible(experiment), failures);
    const char* metrics[] = {"design_samples", "validation_samples", "objective",
                             "exit_iteration", "wall_time_s"};
    std::printf("%-20s %14s %14s %14s\n", "metric", "mean", "stddev", "worst");
    for (int m = 0; m < 5; ++m) {
      double mean = 0, sd = 0, worst = 0;
      seqscen_experiment_stat(experiment, m, SEQSCEN_STAT_MEAN, &mean);
      seqscen_experiment_stat(experiment, m, SEQSCEN_STAT_STDDEV, &sd);
      seqscen_experiment_stat(experiment, m, SEQSCEN_STAT_WORST, &worst);
      std::printf("%-20s %14.6g %14.6g %14.6g\n", metrics[m], mean, sd, worst);
    }
    std::printf("csv written to %s\n", opt.out.c_str());
  } else {
    std::fputs(seqscen_experiment_csv(experiment), stdout);
  }
  seqscen_experiment_free(experiment);

  if (failures == reps) {
    std::fprintf(stderr, "error: every repetition ended in a numeric failure\n");
    return kExitAllFailed;
  }
  return kExitOk;
}

int cmd_certify(const Options& opt) {
  ProblemHandle problem;
  make_problem(opt, problem);

  std::vector<double> theta;
  std::string text = opt.theta_text;
  for (char& c : text)
    if (c == ',') c = ' ';
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = 0;
    try {
      theta.push_back(std::stod(text.substr(pos), &next));
    } catch (...) {
      std::fprintf(stderr, "error: --theta must be a comma-separated list of reals\n");
      return kExitUsage;
    }
    pos += next;
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
  if (theta.empty()) {
    std::fprintf(stderr, "error: --theta is required for certify\n");
    return kExitUsage;
  }

  int certified = 0;
  double empirical = 0.0;
  long long samples = 0;
  check(seqscen_certify(problem.ptr, theta.data(),
                        static_cast<long long>(theta.size()), opt.epsilon, opt.delta,
                        opt.tau, opt.seed, &certified, &empirical, &samples),
        "certify");

  double tau = opt.tau > 0.0 ? opt.tau : opt.epsilon / 4.0;
  std::printf("%s\n", certified ? "CERTIFIED" : "REFUTED");
  std::printf("empirical violation: %.6g over %lld samples\n", empirical, samples);
  std::printf("test: empirical <= epsilon - tau = %.6g (tau = %.6g)\n",
              opt.epsilon - tau, tau);
  std::printf("semantics: one-sided; a certificate is wrong with probability at most %g;"
              " a refusal makes no claim\n",
              opt.delta);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential randomized algorithms for scenario optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", seqscen_version());
  app.set_config("--config", "", "flat key=value config file; command-line flags win");

  Options opt;
  app.add_option("--epsilon", opt.epsilon, "violation accuracy in (0,1)");
  app.add_option("--delta", opt.delta, "confidence complement in (0,1)");
  auto* ntheta_opt = app.add_option("--ntheta", opt.n_theta,
                                    "number of design variables (bounds, uncertain-lp)");
  app.add_option("--kt", opt.k_t, "termination parameter (>= 2)");
  app.add_option("--alpha", opt.alpha, "hyperharmonic tuning exponent");
  app.add_option("--r", opt.r, "discarded-constraint budget");
  app.add_option("--mode", opt.mode, "discard mode: greedy|prefix");
  app.add_option("--algorithm", opt.algorithm,
                 "full|partial|oneshot|oneshot-discarded");
  app.add_option("--problem", opt.problem, "benchmark problem: toy-max|uncertain-lp");
  app.add_option("--spread", opt.spread, "uncertainty spread of uncertain-lp, in [0,1)");
  app.add_option("--problem-seed", opt.problem_seed, "uncertain-lp template seed");
  app.add_option("--reps", opt.reps, "number of Monte Carlo repetitions");
  app.add_option("--seed", opt.seed, "master seed for all sample streams");
  app.add_option("--out", opt.out, "CSV output path (default: CSV to stdout)");
  app.add_option("--jobs", opt.jobs, "worker threads for benchmark repetitions");
  app.add_flag("--timing", opt.timing,
               "record real wall times in the CSV (breaks byte-reproducibility)");
  app.add_flag("--json", opt.as_json, "machine-readable output (bounds)");
  app.add_option("--theta", opt.theta_text, "design to certify, comma-separated");
  app.add_option("--tau", opt.tau, "certification margin (default epsilon/4)");

  auto* bounds = app.add_subcommand("bounds", "print sample bounds and schedules");
  auto* run = app.add_subcommand("run", "execute a single run and print its trace");
  auto* benchmark =
      app.add_subcommand("benchmark", "repeated runs, aggregated statistics, CSV");
  auto* certify = app.add_subcommand("certify", "a posteriori check of a fixed design");
  for (auto* sub : {bounds, run, benchmark, certify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (bounds->parsed()) {
    if (ntheta_opt->count() == 0) {
      std::fprintf(stderr, "error: bounds requires --ntheta\n");
      return kExitUsage;
    }
    return cmd_bounds(opt);
  }
  if (run->parsed()) return cmd_run(opt);
  if (benchmark->parsed()) return cmd_benchmark(opt);
  if (certify->parsed()) return cmd_certify(opt);
  return kExitUsage;
}
