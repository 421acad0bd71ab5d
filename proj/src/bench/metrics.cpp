// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/metrics.hpp"

#include <cmath>

#include "common/error.hpp"

namespace leadopt::bench {

namespace {

void require_results(std::span<const OptimizationResult> results) {
  if (results.empty()) fail(ErrorCode::kEmptyResults, "no optimization results");
}

nlohmann::ordered_json scores_json(std::span<const double> scores, std::span<const oracle::PropertySpec> specs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < specs.size() && i < scores.size(); ++i) j[specs[i].name] = scores[i];
  return j;
}

std::vector<double> scores_from_json(const nlohmann::json& j, std::span<const oracle::PropertySpec> specs) {
  std::vector<double> out;
  if (j.empty()) return out;  // a lead that failed before it was scored
  for (const auto& s : specs) out.push_back(j.at(s.name).get<double>());
  return out;
}

}  // namespace

double success_rate(std::span<const OptimizationResult> results) {
  require_results(results);
  long ok = 0;
  for (const auto& r : results) ok += r.success ? 1 : 0;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(results.size());
}

double avg_similarity(std::span<const OptimizationResult> results) {
  require_results(results);
  double sum = 0.0;
  for (const auto& r : results) sum += r.success ? r.similarity : 1.0;
  return sum / static_cast<double>(results.size());
}

RelativeImprovement relative_improvement(std::span<const OptimizationResult> results,
                                         std::span<const oracle::PropertySpec> specs) {
  require_results(results);
  RelativeImprovement out;
  double total = 0.0;
  for (const auto& r : results) {
    if (!r.success) continue;
    if (r.before.size() != specs.size() || r.after.size() != specs.size()) {
      fail(ErrorCode::kLengthMismatch, "result scores do not match the property list");
    }
    double sum = 0.0;
    int terms = 0;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      const double base = std::abs(r.before[j]);
      if (base == 0.0) {
        ++out.skipped_terms;
        continue;
      }
      sum += specs[j].sign() * (r.after[j] - r.before[j]) / base;
      ++terms;
    }
    if (terms > 0) total += sum / terms;
  }
  out.value = total / static_cast<double>(results.size());
  return out;
}

Metrics compute_metrics(std::span<const OptimizationResult> results, std::span<const oracle::PropertySpec> specs) {
  Metrics m;
  m.count = static_cast<int>(results.size());
  for (const auto& r : results) {
    m.successes += r.success ? 1 : 0;
    m.oracle_calls += r.calls_used;
    m.cache_hits += r.cache_hits;
  }
  m.success_rate = success_rate(results);
  m.similarity = avg_similarity(results);
  const auto ri = relative_improvement(results, specs);
  m.relative_improvement = ri.value;
  m.zero_baseline_terms = ri.skipped_terms;
  return m;
}

nlohmann::ordered_json result_to_json(const OptimizationResult& r, std::span<const oracle::PropertySpec> specs) {
  nlohmann::ordered_json j;
  j["index"] = r.index;
  j["lead"] = r.lead;
  j["optimized"] = r.optimized ? nlohmann::ordered_json(*r.optimized) : nlohmann::ordered_json(nullptr);
  j["success"] = r.success;
  j["similarity"] = r.similarity;
  j["before"] = scores_json(r.before, specs);
  j["after"] = scores_json(r.after, specs);
  j["calls_used"] = r.calls_used;
  j["cache_hits"] = r.cache_hits;
  j["success_call"] = r.success_call ? nlohmann::ordered_json(*r.success_call) : nlohmann::ordered_json(nullptr);
  if (r.error) j["error"] = *r.error;
  return j;
}

OptimizationResult result_from_json(const nlohmann::json& j, std::span<const oracle::PropertySpec> specs) {
  try {
    OptimizationResult r;
    r.index = j.at("index").get<int>();
    r.lead = j.at("lead").get<std::string>();
    if (!j.at("optimized").is_null()) r.optimized = j.at("optimized").get<std::string>();
    r.success = j.at("success").get<bool>();
    r.similarity = j.at("similarity").get<double>();
    r.before = scores_from_json(j.at("before"), specs);
    r.after = scores_from_json(j.at("after"), specs);
    r.calls_used = j.at("calls_used").get<long>();
    r.cache_hits = j.at("cache_hits").get<long>();
    if (!j.at("success_call").is_null()) r.success_call = j.at("success_call").get<long>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("malformed result record: ") + e.what());
  }
}

nlohmann::ordered_json metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["count"] = m.count;
  j["successes"] = m.successes;
  j["success_rate"] = m.success_rate;
  j["similarity"] = m.similarity;
  j["relative_improvement"] = m.relative_improvement;
  j["zero_baseline_terms"] = m.zero_baseline_terms;
  j["zero_baseline_policy"] = "skip term, average remaining properties";
  j["oracle_calls"] = m.oracle_calls;
  j["cache_hits"] = m.cache_hits;
  return j;
}

std::vector<std::pair<long, double>> success_curve(std::span<const OptimizationResult> results, long budget,
                                                   long step) {
  require_results(results);
  if (step < 1 || budget < 0) fail(ErrorCode::kInvalidArgument, "curve step must be positive");
  std::vector<std::pair<long, double>> curve;
  for (long b = 0;; b += step) {
    const long at = std::min(b, budget);
    long ok = 0;
    for (const auto& r : results) ok += (r.success && r.success_call && *r.success_call <= at) ? 1 : 0;
    curve.emplace_back(at, 100.0 * static_cast<double>(ok) / static_cast<double>(results.size()));
    if (at >= budget) break;
  }
  return curve;
}

}  // namespace leadopt::bench
