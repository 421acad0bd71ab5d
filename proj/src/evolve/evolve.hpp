// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_EVOLVE_EVOLVE_HPP_
#define LEADOPT_EVOLVE_EVOLVE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "env/environment.hpp"
#include "policy/policy.hpp"

namespace leadopt::evolve {

struct EvolveConfig {
  long budget = 500;
  int generations = 10;
  int rollouts = 32;  // per parent
  int horizon = 5;
  double tau_base = 0.9;
  double tau_step = 0.1;
  double tau_max = 2.0;
  int pool_capacity = 5;
  double elite_similarity = 0.4;
};

// Throws ConfigError.
void validate(const EvolveConfig& cfg);

// min(tau_base + (g - 1) * tau_step, tau_max) for g >= 1.
double temperature_at(int generation, const EvolveConfig& cfg);

// Sum of w_i * sign_i * (F_i(m) - F_i(lead)); positive is better.
double fitness(std::span<const oracle::PropertySpec> specs, std::span<const double> scores,
               std::span<const double> lead_scores);

struct EliteEntry {
  env::Molecule molecule;
  double fitness = 0.0;
  double similarity = 0.0;
};

// Capacity-bounded best-first set, gated by similarity to the lead.
class ElitePool {
 public:
  ElitePool(int capacity, double similarity_gate);

  // True when the entry was added.
  bool insert(EliteEntry entry);

  const std::vector<EliteEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& canonical) const;
  double best_fitness() const;
  int capacity() const { return capacity_; }
  double similarity_gate() const { return gate_; }

 private:
  int capacity_;
  double gate_;
  std::vector<EliteEntry> entries_;  // fitness descending
};

nlohmann::ordered_json pool_to_json(const ElitePool& pool);

struct EvolutionResult {
  ElitePool pool;
  env::Molecule lead;
  // Highest-fitness evaluated molecule that met the task's success criteria.
  std::optional<EliteEntry> best_success;
  std::optional<long> first_success_call;  // 1-based ledger call that found the first success
  std::vector<nlohmann::ordered_json> log;  // one record per generation
  int generations_run = 0;
  long calls_used = 0;
  long cache_hits = 0;
};

// Folds an evaluated molecule into the success bookkeeping of `result`.
void record_success_candidate(EvolutionResult& result, const env::EnvConfig& env_cfg,
                              const oracle::OracleLedger& ledger, const env::Molecule& m, double fit,
                              double similarity);

// Elite-pool evolution with `policy` as the mutation operator. `env_cfg`
// supplies the task mode and reward constants; its horizon is replaced by
// cfg.horizon. Runs until the ledger is exhausted or G generations pass.
EvolutionResult run_evolution(const policy::ActionPolicy& policy, std::string_view lead_smiles,
                              const EvolveConfig& cfg, const env::EnvConfig& env_cfg,
                              oracle::OracleLedger& ledger, std::uint64_t seed);

}  // namespace leadopt::evolve

#endif  // LEADOPT_EVOLVE_EVOLVE_HPP_
