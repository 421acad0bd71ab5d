// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "policy/policy.hpp"
#include "random_molecules.hpp"

using namespace leadopt;
using namespace leadopt::policy;
using chemgraph::canonicalize;
using chemgraph::parse_smiles;

namespace {

std::shared_ptr<oracle::Oracle> logp_oracle() {
  return std::make_shared<oracle::Oracle>(
      std::vector<oracle::PropertySpec>{oracle::default_property_spec("logp_proxy")});
}

PolicyParams random_params(std::mt19937_64& gen, int nf, int nc, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  auto p = PolicyParams::zeros(nf, nc);
  for (auto& w : p.theta) w = normal(gen);
  return p;
}

}  // namespace

TEST_CASE("zero weights give a uniform distribution") {
  const auto p = PolicyParams::zeros(3, 6);
  const std::vector<double> f{1.0, -2.0, 0.5};
  for (int k : {1, 2, 4, 6}) {
    std::vector<int> classes;
    for (int c = 0; c < k; ++c) classes.push_back(c);
    for (std::size_t a = 0; a < classes.size(); ++a) {
      CHECK(log_prob(p, f, classes, a, 1.0) == doctest::Approx(-std::log(k)).epsilon(1e-15));
    }
  }
  Rng rng(7);
  const std::vector<int> four{0, 1, 2, 3};
  const auto draw = sample_categorical(action_logits(p, f, four, 1.0), rng);
  CHECK(draw.log_prob == doctest::Approx(-std::log(4.0)).epsilon(1e-15));
}

TEST_CASE("temperature scales logits and keeps the argmax") {
  std::mt19937_64 gen(3);
  const auto p = random_params(gen, 4, 8);
  const std::vector<double> f{1.0, 0.3, -0.7, 2.0};
  const std::vector<int> classes{0, 1, 2, 3, 4, 5, 6, 7};
  for (double tau : {0.5, 0.9, 1.0, 1.7}) {
    const auto a = action_logits(p, f, classes, tau);
    const auto b = action_logits(p, f, classes, 2 * tau);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i] / 2).epsilon(1e-14));
    CHECK(std::max_element(a.begin(), a.end()) - a.begin() == std::max_element(b.begin(), b.end()) - b.begin());
  }
  // Scaling one row up strictly raises that action's probability when its logit is positive.
  auto q = p;
  const auto before = log_softmax(action_logits(p, f, classes, 1.0));
  const auto logits = action_logits(p, f, classes, 1.0);
  const int up = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
  for (int k = 0; k < 4; ++k) q.weight(up, k) *= 2;
  const auto after = log_softmax(action_logits(q, f, classes, 1.0));
  CHECK(after[static_cast<std::size_t>(up)] > before[static_cast<std::size_t>(up)]);
}

TEST_CASE("probabilities are normalized and log-probs are non-positive") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_params(gen, 5, 9, 3.0);
    std::vector<double> f(5);
    for (auto& x : f) x = std::normal_distribution<double>(0, 2)(gen);
    std::vector<int> classes;
    for (int k = 0; k < 12; ++k) classes.push_back(static_cast<int>(gen() % 9));
    const auto lsm = log_softmax(action_logits(p, f, classes, 0.7));
    double total = 0.0;
    for (double l : lsm) {
      CHECK(std::isfinite(l));
      CHECK(l <= 0.0);
      total += std::exp(l);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("sampling frequencies match the softmax") {
  std::mt19937_64 gen(5);
  const auto p = random_params(gen, 3, 5);
  const std::vector<double> f{1.0, 0.5, -0.5};
  const std::vector<int> classes{0, 1, 2, 3, 4};
  const auto logits = action_logits(p, f, classes, 1.0);
  const auto lsm = log_softmax(logits);
  constexpr int kDraws = 100000;
  std::vector<int> counts(classes.size(), 0);
  Rng rng(2024);
  for (int i = 0; i < kDraws; ++i) {
    const auto d = sample_categorical(logits, rng);
    CHECK_EQ(d.log_prob, lsm[d.index]);
    ++counts[d.index];
  }
  for (std::size_t a = 0; a < classes.size(); ++a) {
    const double prob = std::exp(lsm[a]);
    const double sigma = std::sqrt(kDraws * prob * (1 - prob));
    CHECK(std::abs(counts[a] - kDraws * prob) < 3 * sigma);
  }
  Rng r1(9), r2(9);
  for (int i = 0; i < 50; ++i) CHECK(sample_categorical(logits, r1).index == sample_categorical(logits, r2).index);
}

TEST_CASE("log-prob gradient") {
  // Two equal actions, chosen first: rows (+1/2, -1/2) times features over tau.
  const auto p = PolicyParams::zeros(2, 2);
  const std::vector<double> f{1.0, 3.0};
  const std::vector<int> classes{0, 1};
  const auto g = grad_logprob(p, f, classes, 0, 2.0);
  CHECK(g[0] == doctest::Approx(0.25));
  CHECK(g[1] == doctest::Approx(0.75));
  CHECK(g[2] == doctest::Approx(-0.25));
  CHECK(g[3] == doctest::Approx(-0.75));

  std::mt19937_64 gen(17);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = random_params(gen, 4, 6);
    std::vector<double> feat(4);
    for (auto& x : feat) x = std::normal_distribution<double>(0, 1)(gen);
    std::vector<int> cls;
    for (int k = 0; k < 7; ++k) cls.push_back(static_cast<int>(gen() % 6));
    const std::size_t chosen = gen() % cls.size();
    const double tau = 0.5 + 0.1 * static_cast<double>(gen() % 10);
    const auto grad = grad_logprob(q, feat, cls, chosen, tau);

    // Expected gradient is zero: sum_a p_a * grad log p_a = 0.
    const auto lsm = log_softmax(action_logits(q, feat, cls, tau));
    std::vector<double> expect(q.theta.size(), 0.0);
    for (std::size_t a = 0; a < cls.size(); ++a) accumulate_grad_logprob(q, feat, cls, a, tau, std::exp(lsm[a]), expect);
    for (double e : expect) CHECK(std::abs(e) < 1e-12);

    // Relative error of the whole gradient vector.
    const double h = 1e-5;
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < q.theta.size(); ++i) {
      auto plus = q, minus = q;
      plus.theta[i] += h;
      minus.theta[i] -= h;
      const double fd = (log_prob(plus, feat, cls, chosen, tau) - log_prob(minus, feat, cls, chosen, tau)) / (2 * h);
      diff += (fd - grad[i]) * (fd - grad[i]);
      norm += grad[i] * grad[i];
    }
    worst = std::max(worst, std::sqrt(diff / norm));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("reference snapshot") {
  std::mt19937_64 gen(23);
  auto live = random_params(gen, 3, 4);
  const auto ref = snapshot_reference(live);
  const std::vector<double> f{1.0, -1.0, 0.25};
  const std::vector<int> classes{0, 1, 2, 3};
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(psi(live.beta, log_prob(live, f, classes, a, 1.0), ref->log_prob(f, classes, a, 1.0)) == 0.0);
  }
  const double frozen = ref->log_prob(f, classes, 2, 1.0);
  live.theta[5] += 1.0;
  CHECK(ref->log_prob(f, classes, 2, 1.0) == frozen);

  // Recompute both log-probs from raw dot products.
  auto raw_logp = [&](const PolicyParams& p, std::size_t a) {
    std::vector<double> z;
    for (int c : classes) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += p.weight(c, k) * f[static_cast<std::size_t>(k)];
      z.push_back(s);
    }
    double norm = 0;
    for (double v : z) norm += std::exp(v);
    return z[a] - std::log(norm);
  };
  const double expected = 0.1 * (raw_logp(live, 1) - raw_logp(ref->params(), 1));
  CHECK(psi(0.1, log_prob(live, f, classes, 1, 1.0), ref->log_prob(f, classes, 1, 1.0)) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("checkpoint round trip") {
  std::mt19937_64 gen(29);
  auto p = random_params(gen, kNumFeatures, num_action_classes(FragmentLibrary::builtin().size()));
  p.beta = 0.25;
  p.temperature = 0.9;
  const auto path = (std::filesystem::temp_directory_path() / "leadopt_policy_ckpt.json").string();
  save_params(p, path);
  const auto q = load_params(path);
  CHECK(q.theta == p.theta);
  CHECK(q.beta == p.beta);
  CHECK(q.temperature == p.temperature);
  std::filesystem::remove(path);

  auto j = params_to_json(p);
  j["theta"].erase(0);
  CHECK_THROWS_AS(params_from_json(j), Error);
  j = params_to_json(p);
  j["version"] = 2;
  CHECK_THROWS_AS(params_from_json(j), Error);
}

TEST_CASE("fragment library") {
  const auto& lib = FragmentLibrary::builtin();
  CHECK(lib.size() == 20);
  CHECK(num_action_classes(lib.size()) == 33);
  const auto shipped = FragmentLibrary::load(std::string(LEADOPT_SOURCE_DIR) + "/data/fragments.smi");
  REQUIRE(shipped.size() == lib.size());
  for (std::size_t i = 0; i < lib.size(); ++i) {
    CHECK(shipped[i].smiles == lib[i].smiles);
    CHECK(shipped[i].name == lib[i].name);
  }
  CHECK_THROWS_AS(FragmentLibrary::parse("C(\n"), Error);
  CHECK_THROWS_AS(FragmentLibrary::parse("[O-2]\n"), Error);
}

TEST_CASE("edit application") {
  const auto& lib = FragmentLibrary::builtin();
  const auto cco = parse_smiles("CCO");
  // Methyl on the terminal carbon (atom 0).
  const auto propanol = apply_edit(cco, {EditKind::kAppendFragment, 0, 0, chemgraph::Element::C}, lib);
  CHECK(canonicalize(propanol) == canonicalize(parse_smiles("OCCC")));

  try {
    apply_edit(parse_smiles("C"), {EditKind::kDeleteTerminal, 0, -1, chemgraph::Element::C}, lib);
    FAIL("expected IllegalEdit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIllegalEdit);
  }
  const auto cn = apply_edit(parse_smiles("CC"), {EditKind::kReplaceAtom, 1, -1, chemgraph::Element::N}, lib);
  CHECK(canonicalize(cn) == canonicalize(parse_smiles("CN")));

  const auto ethane = apply_edit(cco, {EditKind::kDeleteTerminal, 2, -1, chemgraph::Element::C}, lib);
  CHECK(canonicalize(ethane) == "CC");
  const auto pyridine =
      apply_edit(parse_smiles("c1ccccc1"), {EditKind::kReplaceAtom, 0, -1, chemgraph::Element::N}, lib);
  CHECK(canonicalize(pyridine) == canonicalize(parse_smiles("c1ccncc1")));
  // Fluorine cannot replace a carbon with two neighbours.
  CHECK_THROWS_AS(apply_edit(parse_smiles("CCC"), {EditKind::kReplaceAtom, 1, -1, chemgraph::Element::F}, lib),
                  Error);
  CHECK(render_edit(parse_smiles("C"), {EditKind::kDeleteTerminal, 0, -1, chemgraph::Element::C}, lib) == "?");
}

TEST_CASE("enumerated edits always yield valid molecules") {
  const auto& lib = FragmentLibrary::builtin();
  std::mt19937_64 gen(31);
  int built = 0;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_molecule(gen, 16);
    const auto edits = enumerate_edits(m, lib);
    REQUIRE(!edits.empty());
    CHECK(edits.size() <= kMaxCandidates);
    CHECK(edits.back().kind == EditKind::kDone);
    for (const auto& e : edits) {
      const int cls = action_class(e, m, lib.size());
      CHECK(cls >= 0);
      CHECK(cls < num_action_classes(lib.size()));
      if (e.kind == EditKind::kDone) continue;
      ++checked;
      try {
        const auto out = apply_edit(m, e, lib);
        ++built;
        // The rendered answer round-trips to the same molecule.
        const auto text = render_edit(m, e, lib);
        CHECK(canonicalize(parse_smiles(text)) == canonicalize(out));
      } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::kIllegalEdit);
      }
    }
  }
  CHECK(checked > 1000);
  CHECK(built == checked);
}

TEST_CASE("enumeration cap keeps every edit kind") {
  const auto& lib = FragmentLibrary::builtin();
  const auto m = parse_smiles("CCCCCCCCc1ccccc1O");
  const auto edits = enumerate_edits(m, lib);
  CHECK(edits.size() == kMaxCandidates);
  bool saw[4] = {false, false, false, false};
  for (const auto& e : edits) saw[static_cast<int>(e.kind)] = true;
  CHECK(saw[0]);
  CHECK(saw[1]);
  CHECK(saw[2]);
  CHECK(saw[3]);
  CHECK(enumerate_edits(m, lib) .size() == edits.size());
}

TEST_CASE("features") {
  auto ledger = oracle::OracleLedger(logp_oracle(), -1);
  env::EnvConfig cfg;
  const auto ep = env::Episode::reset("CCO", cfg, ledger);
  const auto f = featurize(ep);
  REQUIRE(f.size() == static_cast<std::size_t>(kNumFeatures));
  CHECK(f[12] == doctest::Approx(1.0 - cfg.similarity_threshold));
  CHECK(f[13] == 1.0);
  CHECK(featurize(env::Episode::reset("OCC", cfg, ledger)) == f);

  std::mt19937_64 gen(37);
  for (int i = 0; i < 50; ++i) {
    const auto m = testing::random_molecule(gen, 14);
    const auto e = env::Episode::reset(chemgraph::write_smiles(m), cfg, ledger);
    CHECK(featurize(e).size() == static_cast<std::size_t>(kNumFeatures));
  }
}

TEST_CASE("edit policy drives an episode") {
  auto ledger = oracle::OracleLedger(logp_oracle(), -1);
  env::EnvConfig cfg;
  const auto& lib = FragmentLibrary::builtin();
  auto params = std::make_shared<PolicyParams>(PolicyParams::zeros(kNumFeatures, num_action_classes(lib.size())));
  const EditPolicy policy(params, lib);
  auto run = [&](std::uint64_t seed) {
    auto ep = env::Episode::reset("OCCc1ccccc1", cfg, ledger);
    Rng rng(seed);
    std::vector<std::string> actions;
    while (!ep.done()) {
      const auto d = policy.act(ep, 1.0, rng);
      CHECK(d.differentiable);
      CHECK(d.log_prob <= 0.0);
      actions.push_back(d.text);
      ep.step(d.text);
    }
    return actions;
  };
  CHECK(run(1) == run(1));

  const TextPolicy echo([](const std::string& obs, double, Rng&) {
    CHECK(!obs.empty());
    return std::string("<answer>OCCCc1ccccc1</answer>");
  });
  auto ep = env::Episode::reset("OCCc1ccccc1", cfg, ledger);
  Rng rng(1);
  const auto d = echo.act(ep, 1.0, rng);
  CHECK(!d.differentiable);
  CHECK(ep.step(d.text).reward != cfg.invalid_reward);
}
