// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/selftest.hpp"

#include <cmath>
#include <sstream>

#include "bench/metrics.hpp"
#include "chemgraph/fingerprint.hpp"
#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "evolve/evolve.hpp"
#include "filter/filter.hpp"
#include "pgpo/pgpo.hpp"
#include "policy/policy.hpp"

namespace leadopt::bench {

namespace {

constexpr const char* kPanel[] = {"CCO", "c1ccccc1O", "CC(=O)Nc1ccc(O)cc1", "OC1CCNCC1", "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
                                  "FC(F)(F)c1ccc(Cl)cc1", "C1CC2CCC1C2", "O=C(O)CCC(=O)O"};

std::string canonical_roundtrip() {
  for (const char* s : kPanel) {
    const std::string c1 = chemgraph::canonicalize(chemgraph::parse_smiles(s));
    const std::string c2 = chemgraph::canonicalize(chemgraph::parse_smiles(c1));
    if (c1 != c2) return std::string(s) + ": " + c1 + " vs " + c2;
    const auto fp = chemgraph::morgan_fingerprint(chemgraph::parse_smiles(s));
    if (chemgraph::tanimoto(fp, fp) != 1.0) return std::string(s) + ": self-similarity below 1";
  }
  return {};
}

std::string gae_matches_double_sum() {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> r(n), v(n + 1);
    for (auto& x : r) x = rng.uniform() * 4 - 2;
    for (auto& x : v) x = rng.uniform() * 4 - 2;
    const double g = 0.99, l = 0.95;
    const auto gae = pgpo::compute_gae(r, v, g, l);
    for (std::size_t t = 0; t < n; ++t) {
      double expect = 0.0;
      for (std::size_t k = t; k < n; ++k) {
        const double delta = r[k] + g * v[k + 1] - v[k];
        expect += std::pow(g * l, static_cast<double>(k - t)) * delta;
      }
      if (std::abs(expect - gae.advantages[t]) > 1e-10) return "trial " + std::to_string(trial);
    }
  }
  return {};
}

std::string preference_values() {
  const double lw = pgpo::lambda_weight(0.0, 1.0, 2, 1);
  if (std::abs(lw - 0.5325) > 1e-4) return "lambda weight " + std::to_string(lw);
  if (std::abs(pgpo::pair_loss(0.0) - std::log(2.0)) > 1e-12) return "pair loss at 0";
  for (int k = 0; k < 100; ++k) {
    if (!(pgpo::pair_loss(-5.0 + 0.1 * (k + 1)) < pgpo::pair_loss(-5.0 + 0.1 * k))) return "pair loss not decreasing";
  }
  const std::vector<double> rewards = {0.1, 0.7, 0.2, 0.9, 0.4};
  const auto pairs = pgpo::select_pairs(rewards, 0.75, 6);
  if (pairs.size() != 6) return "expected 6 pairs, got " + std::to_string(pairs.size());
  return {};
}

std::string filter_retention() {
  std::vector<pgpo::Trajectory> batch;
  int id = 0;
  for (int g = 0; g < 8; ++g) {
    for (int k = 0; k < 16; ++k) {
      pgpo::Trajectory t;
      t.id = id++;
      t.group = g;
      pgpo::TurnRecord turn;
      turn.reward = (g + 1) * 0.1 * k + 0.001 * g;
      t.turns.push_back(turn);
      batch.push_back(std::move(t));
    }
  }
  const auto out = filter::filter_batch(batch);
  if (out.trajectories.size() != 48) return "kept " + std::to_string(out.trajectories.size()) + " of 128";
  return {};
}

std::string temperature_schedule() {
  const evolve::EvolveConfig cfg;
  const double t1 = evolve::temperature_at(1, cfg), t5 = evolve::temperature_at(5, cfg),
               t12 = evolve::temperature_at(12, cfg);
  if (std::abs(t1 - 0.9) > 1e-12 || std::abs(t5 - 1.3) > 1e-12 || t12 != 2.0) {
    std::ostringstream os;
    os << t1 << ", " << t5 << ", " << t12;
    return os.str();
  }
  return {};
}

std::string budget_discipline() {
  auto oracle = std::make_shared<const oracle::Oracle>(
      std::vector<oracle::PropertySpec>{oracle::default_property_spec("logp_proxy")});
  const auto& library = policy::FragmentLibrary::builtin();
  auto params = std::make_shared<const policy::PolicyParams>(
      policy::PolicyParams::zeros(policy::kNumFeatures, policy::num_action_classes(library.size())));
  const policy::EditPolicy pol(params, library);
  for (long budget : {1L, 10L, 40L}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      oracle::OracleLedger ledger(oracle, budget);
      evolve::EvolveConfig cfg;
      cfg.budget = budget;
      cfg.generations = 3;
      cfg.rollouts = 4;
      evolve::run_evolution(pol, kPanel[2 + seed], cfg, {}, ledger, seed);
      const auto order = ledger.evaluation_order();
      if (ledger.calls_used() > budget) return "budget " + std::to_string(budget) + " exceeded";
      std::vector<std::string> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "duplicate charge";
    }
  }
  return {};
}

std::string metrics_conventions() {
  std::vector<OptimizationResult> rs(4);
  rs[0].success = true;
  rs[0].similarity = 0.5;
  rs[1].success = true;
  rs[1].similarity = 0.6;
  if (success_rate(rs) != 50.0) return "success rate";
  if (std::abs(avg_similarity(rs) - 0.775) > 1e-12) return "similarity";
  return {};
}

}  // namespace

std::vector<CheckResult> run_selftest(const std::function<void(const CheckResult&)>& on_check) {
  const std::pair<const char*, std::string (*)()> checks[] = {
      {"canonical_roundtrip", canonical_roundtrip}, {"gae_double_sum", gae_matches_double_sum},
      {"preference_values", preference_values},     {"filter_retention", filter_retention},
      {"temperature_schedule", temperature_schedule}, {"budget_discipline", budget_discipline},
      {"metrics_conventions", metrics_conventions},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    CheckResult r{name, false, {}};
    try {
      r.detail = fn();
      r.passed = r.detail.empty();
    } catch (const Error& e) {
      r.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    if (on_check) on_check(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace leadopt::bench
