// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_PGPO_TRAINER_HPP_
#define LEADOPT_PGPO_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "env/environment.hpp"
#include "filter/filter.hpp"
#include "pgpo/pgpo.hpp"
#include "policy/policy.hpp"

namespace leadopt::pgpo {

struct TrainConfig {
  int iterations = 100;
  int leads_per_iteration = 16;
  int rollouts_per_lead = 16;
  double temperature = 0.9;  // sampling temperature during collection
  bool use_filter = true;
  filter::FilterConfig filter;
  PGPOConfig pgpo;
};

void validate(const TrainConfig& cfg);

// One episode from `lead` under `policy`, recorded for later updates.
Trajectory collect_trajectory(const policy::EditPolicy& policy, const env::Molecule& lead,
                              const env::EnvConfig& env_cfg, oracle::OracleLedger& ledger, double temperature,
                              Rng& rng);

struct IterationLog {
  int iteration = 0;
  int collected = 0;
  int kept = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;  // percent of collected episodes
  bool updated = false;
  UpdateDiagnostics diagnostics;
};
nlohmann::ordered_json iteration_to_json(const IterationLog& log);

using IterationCallback = std::function<void(const IterationLog&)>;

// Collect, filter and update for cfg.iterations rounds. The reference policy
// is a snapshot of `params` taken on entry. Rollouts of one iteration run on
// up to `workers` threads with per-rollout seeds, so the result does not
// depend on the worker count.
policy::PolicyParams train(policy::PolicyParams params, const std::vector<std::string>& leads,
                           const policy::FragmentLibrary& library, const TrainConfig& cfg,
                           const env::EnvConfig& env_cfg, std::shared_ptr<const oracle::Oracle> oracle,
                           std::uint64_t seed, int workers, const IterationCallback& on_iteration = {});

}  // namespace leadopt::pgpo

#endif  // LEADOPT_PGPO_TRAINER_HPP_
