// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pgpo/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace leadopt::pgpo {

void validate(const TrainConfig& cfg) {
  if (cfg.iterations < 0) fail(ErrorCode::kConfigError, "iterations must be >= 0");
  if (cfg.leads_per_iteration < 1) fail(ErrorCode::kConfigError, "leads_per_iteration must be positive");
  if (cfg.rollouts_per_lead < 1) fail(ErrorCode::kConfigError, "rollouts_per_lead must be positive");
  if (!(cfg.temperature > 0)) fail(ErrorCode::kConfigError, "training temperature must be positive");
  validate(cfg.pgpo);
}

Trajectory collect_trajectory(const policy::EditPolicy& policy, const env::Molecule& lead,
                              const env::EnvConfig& env_cfg, oracle::OracleLedger& ledger, double temperature,
                              Rng& rng) {
  env::Episode ep(lead, lead, env_cfg, ledger);
  Trajectory traj;
  while (!ep.done()) {
    auto d = policy.act(ep, temperature, rng);
    const auto step = ep.step(d.text);
    TurnRecord t;
    t.features = std::move(d.features);
    t.classes = std::move(d.classes);
    t.chosen = d.chosen;
    t.temperature = temperature;
    t.old_logp = d.log_prob;
    t.reward = step.reward;
    traj.turns.push_back(std::move(t));
  }
  traj.success = ep.succeeded();
  return traj;
}

nlohmann::ordered_json iteration_to_json(const IterationLog& log) {
  nlohmann::ordered_json j;
  j["iteration"] = log.iteration;
  j["collected"] = log.collected;
  j["kept"] = log.kept;
  j["mean_return"] = log.mean_return;
  j["success_rate"] = log.success_rate;
  j["updated"] = log.updated;
  if (log.updated) j["update"] = diagnostics_to_json(log.diagnostics);
  return j;
}

policy::PolicyParams train(policy::PolicyParams params, const std::vector<std::string>& leads,
                           const policy::FragmentLibrary& library, const TrainConfig& cfg,
                           const env::EnvConfig& env_cfg, std::shared_ptr<const oracle::Oracle> oracle,
                           std::uint64_t seed, int workers, const IterationCallback& on_iteration) {
  validate(cfg);
  policy::validate(params);
  if (leads.empty()) fail(ErrorCode::kInvalidArgument, "no training leads");
  // Training is not budgeted; the shared cache only saves work.
  oracle::OracleLedger ledger(std::move(oracle), -1);
  std::vector<env::Molecule> lead_mols;
  lead_mols.reserve(leads.size());
  for (const auto& s : leads) lead_mols.push_back(env::make_molecule(s, ledger));

  const auto reference = policy::snapshot_reference(params);
  AdamState adam(params.theta.size());
  const std::size_t per_iter = std::min(leads.size(), static_cast<std::size_t>(cfg.leads_per_iteration));
  const auto rollouts = static_cast<std::size_t>(cfg.rollouts_per_lead);

  for (int it = 0; it < cfg.iterations; ++it) {
    // Partial Fisher-Yates over lead indices.
    std::vector<std::size_t> order(leads.size());
    std::iota(order.begin(), order.end(), 0);
    Rng pick(derive_seed(seed, {static_cast<std::uint64_t>(it), 0x6c656164ULL}));
    for (std::size_t k = 0; k < per_iter; ++k) std::swap(order[k], order[k + pick.below(order.size() - k)]);

    const auto snapshot = std::make_shared<const policy::PolicyParams>(params);
    const policy::EditPolicy actor(snapshot, library);
    std::vector<Trajectory> batch(per_iter * rollouts);
    parallel_for(batch.size(), workers, [&](std::size_t slot) {
      const std::size_t li = order[slot / rollouts];
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(it), li, slot % rollouts}));
      Trajectory t = collect_trajectory(actor, lead_mols[li], env_cfg, ledger, cfg.temperature, rng);
      t.id = static_cast<int>(slot);
      t.group = static_cast<int>(li);
      batch[slot] = std::move(t);
    });

    IterationLog log;
    log.iteration = it + 1;
    log.collected = static_cast<int>(batch.size());
    int successes = 0;
    for (const auto& t : batch) {
      log.mean_return += t.total_reward() / static_cast<double>(batch.size());
      successes += t.success ? 1 : 0;
    }
    log.success_rate = 100.0 * successes / static_cast<double>(batch.size());

    std::vector<Trajectory> kept;
    if (cfg.use_filter) {
      try {
        kept = filter::filter_batch(batch, cfg.filter).trajectories;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyAfterFilter) throw;
      }
    } else {
      kept = std::move(batch);
    }
    log.kept = static_cast<int>(kept.size());
    if (!kept.empty()) {
      log.diagnostics = pgpo_update(kept, params, *reference, cfg.pgpo, adam);
      log.updated = true;
    }
    if (on_iteration) on_iteration(log);
  }
  return params;
}

}  // namespace leadopt::pgpo
