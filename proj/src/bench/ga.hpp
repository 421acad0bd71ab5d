// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_GA_HPP_
#define LEADOPT_BENCH_GA_HPP_

#include <cstdint>
#include <string_view>

#include "evolve/evolve.hpp"
#include "policy/edits.hpp"

namespace leadopt::bench {

struct GAConfig {
  int population = 5;
  int offspring = 32;  // per generation
  int max_generations = 100;
  double elite_similarity = 0.4;
};

// Random-mutation GA over the edit vocabulary: uniform parent, uniform legal
// edit, elitist replacement. Offspring below the similarity gate are dropped
// before scoring. Stops when the ledger is exhausted or after
// max_generations.
evolve::EvolutionResult ga_baseline(std::string_view lead_smiles, const GAConfig& cfg, const env::EnvConfig& env_cfg,
                                    oracle::OracleLedger& ledger, const policy::FragmentLibrary& library,
                                    std::uint64_t seed);

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_GA_HPP_
