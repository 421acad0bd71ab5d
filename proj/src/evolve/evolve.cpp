// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evolve/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace leadopt::evolve {

void validate(const EvolveConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kConfigError, what);
  };
  require(cfg.budget > 0, "budget must be positive");
  require(cfg.generations > 0, "generations must be positive");
  require(cfg.rollouts > 0, "rollouts must be positive");
  require(cfg.horizon > 0, "horizon must be positive");
  require(cfg.tau_base > 0 && cfg.tau_step >= 0 && cfg.tau_max > 0, "temperatures must be positive");
  require(cfg.tau_base <= cfg.tau_max, "tau_base must not exceed tau_max");
  require(cfg.pool_capacity > 0, "pool capacity must be positive");
  require(cfg.elite_similarity >= 0 && cfg.elite_similarity <= 1, "elite similarity must be in [0, 1]");
}

double temperature_at(int generation, const EvolveConfig& cfg) {
  if (generation < 1) fail(ErrorCode::kInvalidArgument, "generations count from 1");
  return std::min(cfg.tau_base + (generation - 1) * cfg.tau_step, cfg.tau_max);
}

double fitness(std::span<const oracle::PropertySpec> specs, std::span<const double> scores,
               std::span<const double> lead_scores) {
  if (scores.size() != specs.size() || lead_scores.size() != specs.size()) {
    fail(ErrorCode::kLengthMismatch, "score vectors do not match the property list");
  }
  double f = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) f += specs[i].weight * specs[i].sign() * (scores[i] - lead_scores[i]);
  return f;
}

ElitePool::ElitePool(int capacity, double similarity_gate) : capacity_(capacity), gate_(similarity_gate) {
  if (capacity < 1) fail(ErrorCode::kInvalidArgument, "pool capacity must be positive");
}

bool ElitePool::contains(const std::string& canonical) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const EliteEntry& e) { return e.molecule.canonical == canonical; });
}

double ElitePool::best_fitness() const {
  if (entries_.empty()) fail(ErrorCode::kInvalidArgument, "empty elite pool");
  return entries_.front().fitness;
}

bool ElitePool::insert(EliteEntry entry) {
  if (entry.similarity < gate_ || contains(entry.molecule.canonical)) return false;
  if (static_cast<int>(entries_.size()) >= capacity_) {
    if (!(entry.fitness > entries_.back().fitness)) return false;
    entries_.pop_back();
  }
  // After equal fitness, entries keep arrival order.
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry.fitness,
                              [](double f, const EliteEntry& e) { return f > e.fitness; });
  entries_.insert(pos, std::move(entry));
  return true;
}

nlohmann::ordered_json pool_to_json(const ElitePool& pool) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : pool.entries()) {
    nlohmann::ordered_json j;
    j["smiles"] = e.molecule.canonical;
    j["fitness"] = e.fitness;
    j["similarity"] = e.similarity;
    arr.push_back(std::move(j));
  }
  return arr;
}

void record_success_candidate(EvolutionResult& result, const env::EnvConfig& env_cfg,
                              const oracle::OracleLedger& ledger, const env::Molecule& m, double fit,
                              double similarity) {
  const auto check = env::check_success(env_cfg, ledger.specs(), m.scores, result.lead.scores, similarity);
  if (!check.overall) return;
  if (!result.best_success || fit > result.best_success->fitness) result.best_success = EliteEntry{m, fit, similarity};
  const auto order = ledger.evaluation_order();
  const auto it = std::find(order.begin(), order.end(), m.canonical);
  if (it == order.end()) return;
  const long call = static_cast<long>(it - order.begin()) + 1;
  if (!result.first_success_call || call < *result.first_success_call) result.first_success_call = call;
}

EvolutionResult run_evolution(const policy::ActionPolicy& policy, std::string_view lead_smiles,
                              const EvolveConfig& cfg, const env::EnvConfig& env_cfg,
                              oracle::OracleLedger& ledger, std::uint64_t seed) {
  validate(cfg);
  env::EnvConfig ecfg = env_cfg;
  ecfg.horizon = cfg.horizon;
  const long hits_before = ledger.cache_hits();
  const long calls_before = ledger.calls_used();

  EvolutionResult out{ElitePool(cfg.pool_capacity, cfg.elite_similarity), env::make_molecule(lead_smiles, ledger),
                      std::nullopt, std::nullopt, {}, 0, 0, 0};
  const env::Molecule& lead = out.lead;
  const auto specs = ledger.specs();
  out.pool.insert({lead, 0.0, 1.0});

  auto consider_success = [&](const env::Molecule& m, double fit, double sim) {
    record_success_candidate(out, ecfg, ledger, m, fit, sim);
  };
  consider_success(lead, 0.0, 1.0);

  Rng parent_rng(derive_seed(seed, {0x70617265ULL}));
  for (int g = 1; g <= cfg.generations; ++g) {
    if (ledger.exhausted()) break;
    const double tau = temperature_at(g, cfg);
    const auto& pool = out.pool.entries();
    const EliteEntry parent = pool[parent_rng.below(pool.size())];

    // Candidates in (rollout, turn) order; in-rollout scoring already went
    // through the ledger, so re-evaluation below is a cache lookup.
    std::vector<const env::Molecule*> candidates;
    std::vector<env::Episode> episodes;
    episodes.reserve(static_cast<std::size_t>(cfg.rollouts));
    for (int i = 0; i < cfg.rollouts; ++i) {
      if (ledger.exhausted()) break;
      episodes.emplace_back(lead, parent.molecule, ecfg, ledger);
      env::Episode& ep = episodes.back();
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(i)}));
      while (!ep.done()) {
        const auto decision = policy.act(ep, tau, rng);
        ep.step(decision.text);
        if (ledger.exhausted()) break;
      }
    }
    std::set<std::string> seen;
    for (const auto& ep : episodes) {
      for (const auto& m : ep.scored()) {
        if (seen.insert(m.canonical).second) candidates.push_back(&m);
      }
    }
    int inserted = 0;
    for (const env::Molecule* m : candidates) {
      const auto cached = ledger.cached(m->canonical);
      if (!cached) continue;  // never scored: budget ran out first
      const double sim = chemgraph::tanimoto(lead.fingerprint, m->fingerprint);
      if (sim < cfg.elite_similarity) continue;
      const double fit = fitness(specs, *cached, lead.scores);
      consider_success(*m, fit, sim);
      if (out.pool.insert({*m, fit, sim})) ++inserted;
    }
    out.generations_run = g;

    nlohmann::ordered_json rec;
    rec["generation"] = g;
    rec["temperature"] = tau;
    rec["parent"] = parent.molecule.canonical;
    rec["rollouts"] = episodes.size();
    rec["candidates"] = candidates.size();
    rec["inserted"] = inserted;
    rec["budget_used"] = ledger.calls_used();
    rec["cache_hits"] = ledger.cache_hits() - hits_before;
    rec["best_fitness"] = out.pool.best_fitness();
    rec["pool"] = pool_to_json(out.pool);
    out.log.push_back(std::move(rec));
  }
  out.calls_used = ledger.calls_used() - calls_before;
  out.cache_hits = ledger.cache_hits() - hits_before;
  return out;
}

}  // namespace leadopt::evolve
