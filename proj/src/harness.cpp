// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#include "seqscen/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace seqscen {

namespace {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Solution: return "solution";
    case RunStatus::InfeasibleDeclared: return "infeasible";
    case RunStatus::NumericFailure: return "numeric-failure";
  }
  return "unknown";
}

// Shortest round-trip decimal representation; keeps the CSV byte-stable.
void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_number(std::string& out, std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

MetricStats stats_over(const std::vector<double>& values) {
  MetricStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  s.worst = values.front();
  for (double v : values) {
    sum += v;
    s.worst = std::max(s.worst, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

RunRow make_row(std::int64_t repetition, const RunResult& run, bool record_timing) {
  RunRow row;
  row.repetition = repetition;
  row.status = run.status;
  row.exit_iteration = run.exit_iteration;
  row.design_samples = run.design_samples_at_exit;
  row.validation_samples = run.validation_samples_at_exit;
  row.cumulative_design = run.cumulative_design_samples;
  row.cumulative_validation = run.cumulative_validation_samples;
  row.objective = run.status == RunStatus::Solution ? run.objective : 0.0;
  row.wall_time_s = record_timing ? run.wall_seconds : 0.0;
  return row;
}

void append_summary_line(std::string& out, const char* metric, const MetricStats& s) {
  out += "# ";
  out += metric;
  out += ',';
  append_number(out, s.mean);
  out += ',';
  append_number(out, s.stddev);
  out += ',';
  append_number(out, s.worst);
  out += '\n';
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Full: return "full";
    case Algorithm::Partial: return "partial";
    case Algorithm::OneShot: return "oneshot";
    case Algorithm::OneShotDiscarded: return "oneshot-discarded";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "full") return Algorithm::Full;
  if (name == "partial") return Algorithm::Partial;
  if (name == "oneshot") return Algorithm::OneShot;
  if (name == "oneshot-discarded") return Algorithm::OneShotDiscarded;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (full, partial, oneshot, oneshot-discarded)");
}

void ExperimentConfig::validate() const {
  ProbabilisticLevels check(epsilon, delta);
  (void)check;
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  if ((algorithm == Algorithm::Full || algorithm == Algorithm::Partial) && k_t < 2)
    throw std::invalid_argument("k_t must be at least 2 for sequential algorithms");
  if (algorithm == Algorithm::Full && r != 0)
    throw std::invalid_argument("the full-satisfaction algorithm takes r = 0");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const UncertainProblem problem = make_problem(config.problem, config.problem_n_theta,
                                                config.problem_spread, config.problem_seed);
  ScheduleParams params{config.k_t, config.alpha, config.r, problem.n_theta};

  auto execute_one = [&](std::int64_t rep) -> RunResult {
    const std::uint64_t run_id = static_cast<std::uint64_t>(rep);
    switch (config.algorithm) {
      case Algorithm::Full:
        return run_full(problem, {config.epsilon, config.delta}, params,
                        config.master_seed, run_id);
      case Algorithm::Partial:
        return run_partial(problem, {config.epsilon, config.delta}, params, config.mode,
                           config.master_seed, run_id);
      case Algorithm::OneShot:
        return run_oneshot(problem, {config.epsilon, config.delta}, config.master_seed,
                           run_id);
      case Algorithm::OneShotDiscarded:
        return run_oneshot_discarded(problem, {config.epsilon, config.delta}, config.r,
                                     config.mode, config.master_seed, run_id);
    }
    throw std::logic_error("unhandled algorithm");
  };

  std::vector<RunRow> rows(static_cast<std::size_t>(config.repetitions));
  const int workers =
      static_cast<int>(std::min<std::int64_t>(config.jobs, config.repetitions));
  if (workers <= 1) {
    for (std::int64_t rep = 0; rep < config.repetitions; ++rep)
      rows[static_cast<std::size_t>(rep)] =
          make_row(rep, execute_one(rep), config.record_timing);
  } else {
    // Repetitions are embarrassingly parallel: streams derive from the
    // repetition index, and rows land in index order regardless of timing.
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        std::int64_t rep = next.fetch_add(1);
        if (rep >= config.repetitions) return;
        try {
          rows[static_cast<std::size_t>(rep)] =
              make_row(rep, execute_one(rep), config.record_timing);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ExperimentReport report;
  report.config = config;
  report.rows = std::move(rows);

  std::vector<double> design, validation, objective, iteration, wall;
  for (const RunRow& row : report.rows) {
    switch (row.status) {
      case RunStatus::Solution: ++report.solutions; break;
      case RunStatus::InfeasibleDeclared: ++report.infeasible; break;
      case RunStatus::NumericFailure: ++report.numeric_failures; break;
    }
    if (row.status != RunStatus::Solution) continue;
    design.push_back(static_cast<double>(row.design_samples));
    validation.push_back(static_cast<double>(row.validation_samples));
    objective.push_back(row.objective);
    iteration.push_back(static_cast<double>(row.exit_iteration));
    wall.push_back(row.wall_time_s);
  }
  report.design_samples = stats_over(design);
  report.validation_samples = stats_over(validation);
  report.objective = stats_over(objective);
  report.exit_iteration = stats_over(iteration);
  report.wall_time_s = stats_over(wall);

  if (!config.out.empty()) {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open CSV output path: " + config.out);
    file << report.to_csv();
    if (!file.flush()) throw std::runtime_error("CSV write failed: " + config.out);
  }
  return report;
}

std::string ExperimentReport::to_csv() const {
  std::string out;
  out.reserve(rows.size() * 64 + 1024);
  out +=
      "epsilon,delta,kt,alpha,r,algorithm,repetition,status,exit_iteration,"
      "design_samples,validation_samples,cumulative_design,cumulative_validation,"
      "objective,wall_time_s\n";
  for (const RunRow& row : rows) {
    append_number(out, config.epsilon);
    out += ',';
    append_number(out, config.delta);
    out += ',';
    append_number(out, config.k_t);
    out += ',';
    append_number(out, config.alpha);
    out += ',';
    append_number(out, config.r);
    out += ',';
    out += algorithm_name(config.algorithm);
    out += ',';
    append_number(out, row.repetition);
    out += ',';
    out += status_name(row.status);
    out += ',';
    append_number(out, row.exit_iteration);
    out += ',';
    append_number(out, row.design_samples);
    out += ',';
    append_number(out, row.validation_samples);
    out += ',';
    append_number(out, row.cumulative_design);
    out += ',';
    append_number(out, row.cumulative_validation);
    out += ',';
    append_number(out, row.objective);
    out += ',';
    append_number(out, row.wall_time_s);
    out += '\n';
  }
  out += "# summary: metric,mean,stddev,worst (over solution rows)\n";
  append_summary_line(out, "design_samples", design_samples);
  append_summary_line(out, "validation_samples", validation_samples);
  append_summary_line(out, "objective", objective);
  append_summary_line(out, "exit_iteration", exit_iteration);
  append_summary_line(out, "wall_time_s", wall_time_s);
  out += "# repetitions,";
  append_number(out, static_cast<std::int64_t>(rows.size()));
  out += "\n# solutions,";
  append_number(out, solutions);
  out += "\n# infeasible,";
  append_number(out, infeasible);
  out += "\n# numeric_failures,";
  append_number(out, numeric_failures);
  out += "\n# excluded_from_aggregates,";
  append_number(out, static_cast<std::int64_t>(rows.size()) - solutions);
  out += '\n';
  return out;
}

CertifyResult certify(const UncertainProblem& problem, std::span<const double> theta,
                      const ProbabilisticLevels& levels, double tau,
                      std::uint64_t master_seed) {
  if (tau <= 0.0) tau = levels.epsilon / 4.0;
  if (tau >= levels.epsilon)
    throw std::invalid_argument("certify: margin tau must be smaller than epsilon");
  CertifyResult result;
  result.tau = tau;
  result.threshold = levels.epsilon - tau;
  // Additive Chernoff/Hoeffding size: exp(-2 M tau^2) <= delta.
  double required = -std::log(levels.delta) / (2.0 * tau * tau);
  if (!(required < 1e15))
    throw std::invalid_argument("certify: margin tau is too small to be practical");
  result.sample_count = static_cast<std::int64_t>(std::ceil(required - 1e-9));
  Multisample points =
      draw(problem, result.sample_count, master_seed, StreamLabel{0, 1, Purpose::Certify});
  result.empirical = empirical_violation(problem, theta, points);
  result.certified =
      static_cast<long double>(result.empirical.violated) <=
      static_cast<long double>(result.threshold) *
              static_cast<long double>(result.empirical.total) +
          1e-9L;
  return result;
}

}  // namespace seqscen
