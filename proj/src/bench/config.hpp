// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_CONFIG_HPP_
#define LEADOPT_BENCH_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench/ga.hpp"
#include "bench/leads.hpp"
#include "env/environment.hpp"
#include "evolve/evolve.hpp"
#include "oracle/oracle.hpp"
#include "pgpo/trainer.hpp"

namespace leadopt::bench {

inline constexpr int kConfigVersion = 1;

enum class InferenceMethod { kEvolution, kRollouts, kGA };

std::string_view inference_method_name(InferenceMethod m);

struct TaskConfig {
  std::vector<oracle::PropertySpec> properties;
  env::EnvConfig env;  // mode, similarity threshold, horizon, guard
  long budget = 500;
  std::map<std::string, std::string> oracle_tables;  // property -> table path
};

struct LeadsConfig {
  std::size_t train = 128;
  std::size_t test = 64;
  LeadSpec band;
  std::optional<std::uint64_t> seed;  // defaults to the experiment seed
  std::optional<std::string> train_file;
  std::optional<std::string> test_file;
};

struct PolicyConfig {
  double beta = 0.1;
  double temperature = 1.0;
  int max_candidates = 64;
  std::optional<std::string> checkpoint;  // start here instead of zeros
};

struct InferenceConfig {
  InferenceMethod method = InferenceMethod::kEvolution;
  evolve::EvolveConfig evolve;
  GAConfig ga;
};

struct ExperimentConfig {
  TaskConfig task;
  LeadsConfig leads;
  PolicyConfig policy;
  pgpo::TrainConfig train;
  InferenceConfig inference;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output = "out";
};

// Parses and validates a config document. Unknown keys are rejected at
// every level; any problem throws ConfigError naming the offending key.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Fully resolved config, suitable for config_from_json.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// Applies "a.b.c=value" to a config document before parsing. The value is
// read as JSON when it parses as JSON and as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// The oracle described by the task: builtin proxies unless a table is bound.
std::shared_ptr<const oracle::Oracle> make_oracle(const TaskConfig& task);

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_CONFIG_HPP_
