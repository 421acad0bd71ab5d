// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_EXPERIMENT_HPP_
#define LEADOPT_BENCH_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include "bench/config.hpp"
#include "bench/metrics.hpp"
#include "policy/policy.hpp"

namespace leadopt::bench {

// Leads from the config's files, or generated from its band and seed.
LeadSplit resolve_leads(const ExperimentConfig& cfg, const policy::FragmentLibrary& library);

// Zeros (uniform over action classes) or the configured checkpoint.
policy::PolicyParams initial_params(const ExperimentConfig& cfg, const policy::FragmentLibrary& library);

struct TrainOutput {
  policy::PolicyParams params;
  std::vector<pgpo::IterationLog> log;
};
TrainOutput run_training(const ExperimentConfig& cfg, const std::vector<std::string>& leads,
                         const policy::FragmentLibrary& library, std::shared_ptr<const oracle::Oracle> oracle,
                         const pgpo::IterationCallback& on_iteration = {});

// Optimizes one lead with a fresh ledger holding the task budget. Failures
// inside the run are recorded on the result rather than thrown.
OptimizationResult optimize_lead(const ExperimentConfig& cfg, const policy::PolicyParams& params,
                                 const std::string& lead, int index, const policy::FragmentLibrary& library,
                                 std::shared_ptr<const oracle::Oracle> oracle);

// All leads, cfg.workers at a time; results come back in lead order.
std::vector<OptimizationResult> optimize_leads(const ExperimentConfig& cfg, const policy::PolicyParams& params,
                                               const std::vector<std::string>& leads,
                                               const policy::FragmentLibrary& library,
                                               std::shared_ptr<const oracle::Oracle> oracle);

// Short task label such as "logp_proxy" or "qed_proxy+sa_proxy/multi".
std::string task_label(const TaskConfig& task);

void write_results(const std::string& path, std::span<const OptimizationResult> results,
                   std::span<const oracle::PropertySpec> specs);
std::vector<OptimizationResult> read_results(const std::string& path, std::span<const oracle::PropertySpec> specs);

// metrics.json and summary.csv for one result set.
void write_metrics(const std::string& dir, const ExperimentConfig& cfg, const Metrics& metrics);

// "calls,success_rate" rows of the success curve.
std::string plot_data_csv(std::span<const OptimizationResult> results, long budget, long step);

void write_checkpoint_and_log(const std::string& dir, const TrainOutput& out);

// Train on the training leads, optimize the held-out leads, write every
// output file under cfg.output and return the metrics.
Metrics run_experiment(const ExperimentConfig& cfg);

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_EXPERIMENT_HPP_
