// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/ga.hpp"

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"

namespace leadopt::bench {

evolve::EvolutionResult ga_baseline(std::string_view lead_smiles, const GAConfig& cfg, const env::EnvConfig& env_cfg,
                                    oracle::OracleLedger& ledger, const policy::FragmentLibrary& library,
                                    std::uint64_t seed) {
  if (cfg.population < 1 || cfg.offspring < 1 || cfg.max_generations < 0) {
    fail(ErrorCode::kConfigError, "GA sizes must be positive");
  }
  const long hits_before = ledger.cache_hits();
  const long calls_before = ledger.calls_used();
  evolve::EvolutionResult out{evolve::ElitePool(cfg.population, cfg.elite_similarity),
                              env::make_molecule(lead_smiles, ledger), std::nullopt, std::nullopt, {}, 0, 0, 0};
  const env::Molecule& lead = out.lead;
  const auto specs = ledger.specs();
  out.pool.insert({lead, 0.0, 1.0});
  evolve::record_success_candidate(out, env_cfg, ledger, lead, 0.0, 1.0);

  Rng rng(derive_seed(seed, {0x6761ULL}));
  for (int g = 1; g <= cfg.max_generations && !ledger.exhausted(); ++g) {
    int inserted = 0;
    for (int i = 0; i < cfg.offspring && !ledger.exhausted(); ++i) {
      const auto& pool = out.pool.entries();
      const env::Molecule parent = pool[rng.below(pool.size())].molecule;
      auto edits = policy::enumerate_edits(parent.graph, library);
      edits.pop_back();  // done
      if (edits.empty()) continue;
      const auto& edit = edits[rng.below(edits.size())];
      chemgraph::MolecularGraph child_graph;
      try {
        child_graph = policy::apply_edit(parent.graph, edit, library);
      } catch (const Error&) {
        continue;
      }
      env::Molecule child;
      child.canonical = chemgraph::canonicalize(child_graph);
      child.fingerprint = chemgraph::morgan_fingerprint(child_graph);
      const double sim = chemgraph::tanimoto(lead.fingerprint, child.fingerprint);
      if (sim < cfg.elite_similarity) continue;
      try {
        child.scores = ledger.query(child_graph, child.canonical);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kBudgetExhausted) break;
        throw;
      }
      child.graph = std::move(child_graph);
      const double fit = evolve::fitness(specs, child.scores, lead.scores);
      evolve::record_success_candidate(out, env_cfg, ledger, child, fit, sim);
      if (out.pool.insert({std::move(child), fit, sim})) ++inserted;
    }
    out.generations_run = g;
    nlohmann::ordered_json rec;
    rec["generation"] = g;
    rec["inserted"] = inserted;
    rec["budget_used"] = ledger.calls_used();
    rec["best_fitness"] = out.pool.best_fitness();
    out.log.push_back(std::move(rec));
  }
  out.calls_used = ledger.calls_used() - calls_before;
  out.cache_hits = ledger.cache_hits() - hits_before;
  return out;
}

}  // namespace leadopt::bench
