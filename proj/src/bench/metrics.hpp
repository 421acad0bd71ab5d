// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_METRICS_HPP_
#define LEADOPT_BENCH_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle/properties.hpp"

namespace leadopt::bench {

struct OptimizationResult {
  int index = 0;
  std::string lead;
  std::optional<std::string> optimized;  // absent on failure
  std::vector<double> before;
  std::vector<double> after;  // equals `before` on failure
  double similarity = 1.0;    // 1.0 on failure
  bool success = false;
  long calls_used = 0;
  long cache_hits = 0;
  std::optional<long> success_call;  // oracle call that first found a success
  std::optional<std::string> error;
};

// 100 * successes / n. Throws EmptyResults.
double success_rate(std::span<const OptimizationResult> results);

// Mean similarity with failures counted as 1.0. Throws EmptyResults.
double avg_similarity(std::span<const OptimizationResult> results);

struct RelativeImprovement {
  double value = 0.0;
  int skipped_terms = 0;  // properties with a zero baseline
};
// Mean over results of (1/n) sum_j sign_j (F_j(m') - F_j(m)) / |F_j(m)|;
// failures contribute 0 and zero baselines are left out of the average.
RelativeImprovement relative_improvement(std::span<const OptimizationResult> results,
                                         std::span<const oracle::PropertySpec> specs);

struct Metrics {
  int count = 0;
  int successes = 0;
  double success_rate = 0.0;
  double similarity = 0.0;
  double relative_improvement = 0.0;
  int zero_baseline_terms = 0;
  long oracle_calls = 0;
  long cache_hits = 0;
};
Metrics compute_metrics(std::span<const OptimizationResult> results, std::span<const oracle::PropertySpec> specs);

nlohmann::ordered_json result_to_json(const OptimizationResult& r, std::span<const oracle::PropertySpec> specs);
OptimizationResult result_from_json(const nlohmann::json& j, std::span<const oracle::PropertySpec> specs);
nlohmann::ordered_json metrics_to_json(const Metrics& m);

// Success rate as a function of oracle calls: one (calls, percent) point per
// multiple of `step` up to `budget`.
std::vector<std::pair<long, double>> success_curve(std::span<const OptimizationResult> results, long budget,
                                                   long step);

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_METRICS_HPP_
