// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "common/error.hpp"
#include "pgpo/pgpo.hpp"
#include "pgpo_fixture.hpp"

using namespace leadopt;
using namespace leadopt::pgpo;

namespace {

// Straight from the definition: A_t = sum_k (gamma lambda)^k delta_{t+k}.
std::vector<double> brute_force_gae(const std::vector<double>& r, const std::vector<double>& v, double g, double l) {
  std::vector<double> a(r.size(), 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) {
    for (std::size_t k = 0; t + k < r.size(); ++k) {
      const double delta = r[t + k] + g * v[t + k + 1] - v[t + k];
      a[t] += std::pow(g * l, static_cast<double>(k)) * delta;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("generalized advantage estimation") {
  const std::vector<double> r{0.0, 1.0};
  const std::vector<double> zeros(3, 0.0);
  const auto mc = compute_gae(r, zeros, 1.0, 1.0);
  CHECK(mc.advantages == std::vector<double>{1.0, 1.0});
  CHECK(mc.returns == std::vector<double>{1.0, 1.0});

  const std::vector<double> v{0.3, -0.2, 0.5};
  const auto td = compute_gae(r, v, 0.9, 0.0);
  CHECK(td.advantages[0] == doctest::Approx(0.0 + 0.9 * -0.2 - 0.3).epsilon(1e-15));
  CHECK(td.advantages[1] == doctest::Approx(1.0 + 0.9 * 0.5 + 0.2).epsilon(1e-15));

  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto g = compute_gae(ones, std::vector<double>(4, 0.0), 0.99, 0.95);
  const auto bf = brute_force_gae(ones, std::vector<double>(4, 0.0), 0.99, 0.95);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(g.advantages[i] - bf[i]) < 1e-12);

  CHECK_THROWS_AS(compute_gae(r, std::vector<double>(2, 0.0), 0.99, 0.95), Error);

  std::mt19937_64 gen(41);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int len = 1; len <= 6; ++len) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> rr(static_cast<std::size_t>(len)), vv(static_cast<std::size_t>(len) + 1);
      for (auto& x : rr) x = normal(gen);
      for (auto& x : vv) x = normal(gen);
      const auto a = compute_gae(rr, vv, 0.99, 0.95);
      const auto b = brute_force_gae(rr, vv, 0.99, 0.95);
      for (std::size_t i = 0; i < rr.size(); ++i) {
        CHECK(std::abs(a.advantages[i] - b[i]) < 1e-10);
        CHECK(a.returns[i] == doctest::Approx(a.advantages[i] + vv[i]));
      }
    }
  }
}

TEST_CASE("clipped surrogate") {
  CHECK(ppo_surrogate(0.0, 0.0, 1.0, 0.2) == doctest::Approx(1.0));
  CHECK(ppo_surrogate(0.0, std::log(1.5), 1.0, 0.2) == doctest::Approx(1.2));
  CHECK(ppo_surrogate(0.0, std::log(0.5), -1.0, 0.2) == doctest::Approx(-0.8));
  CHECK(ppo_surrogate(0.0, std::log(1.5), -1.0, 0.2) == doctest::Approx(-1.5));
}

TEST_CASE("pair selection") {
  const std::vector<double> r{0.1, 0.5, -0.3, 0.9, 0.2};
  // Ten ordered pairs; floor(7.5) = 7 kept before the cap of 6.
  const auto all = select_pairs(r, 1.0, 100);
  CHECK(all.size() == 10);
  CHECK(select_pairs(r, 0.75, 100).size() == 7);
  const auto pairs = select_pairs(r, 0.75, 6);
  REQUIRE(pairs.size() == 6);
  CHECK(pairs[0].worse == 2);
  CHECK(pairs[0].better == 3);
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    const double prev = r[static_cast<std::size_t>(pairs[k - 1].better)] - r[static_cast<std::size_t>(pairs[k - 1].worse)];
    const double cur = r[static_cast<std::size_t>(pairs[k].better)] - r[static_cast<std::size_t>(pairs[k].worse)];
    CHECK(prev >= cur);
  }
  // Gaps by hand: 1.2, 0.8, 0.8, 0.7, 0.5, 0.4 are the six largest.
  const double expect[] = {1.2, 0.8, 0.8, 0.7, 0.5, 0.4};
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(r[static_cast<std::size_t>(pairs[k].better)] - r[static_cast<std::size_t>(pairs[k].worse)] ==
          doctest::Approx(expect[k]));
    CHECK(pairs[k].weight >= 0.0);
  }
  CHECK(select_pairs(std::vector<double>{0.3, 0.3, 0.3}, 0.75, 6).empty());
  CHECK(select_pairs(std::vector<double>{0.0, 1.0}, 0.75, 6).size() == 1);

  CHECK(turn_ranks(r) == std::vector<int>{4, 2, 5, 1, 3});
  // Ties: the earlier turn ranks worse.
  CHECK(turn_ranks(std::vector<double>{1.0, 1.0, 0.0}) == std::vector<int>{2, 1, 3});
}

TEST_CASE("lambda weights") {
  CHECK(lambda_weight(0.0, 1.0, 2, 1) == doctest::Approx(0.5325).epsilon(1e-4 / 0.5325));
  CHECK(lambda_weight(0.0, 1.0, 2, 1) == doctest::Approx(std::abs(1.0 / std::log(3.0) - 1.0 / std::log(2.0))));
  CHECK(lambda_weight(0.4, 0.4, 1, 2) == 0.0);
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(-2, 3);
  for (int i = 0; i < 200; ++i) {
    const double a = u(gen), b = u(gen);
    const int ra = 1 + static_cast<int>(gen() % 5), rb = 1 + static_cast<int>(gen() % 5);
    CHECK(lambda_weight(a, b, ra, rb) >= 0.0);
    CHECK(lambda_weight(a, b, ra, rb) == lambda_weight(b, a, rb, ra));
  }
  CHECK(gain(-1.0) == doctest::Approx(-0.5));
}

TEST_CASE("preference loss") {
  CHECK(std::abs(pair_loss(0.0) - std::log(2.0)) < 1e-12);
  CHECK(pair_loss(std::log(3.0)) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
  CHECK(pair_loss(40.0) < 1e-6);
  CHECK(std::isfinite(pair_loss(-800.0)));
  double prev = pair_loss(-10.0);
  for (int k = 1; k < 100; ++k) {
    const double cur = pair_loss(-10.0 + 20.0 * k / 99.0);
    CHECK(cur < prev);
    prev = cur;
  }
  const std::vector<PreferencePair> pairs{{0, 0, 1, 2, 1, 1.0}};
  const std::vector<double> psi{0.2, 0.2 + std::log(3.0)};
  const auto loss = preference_loss(pairs, psi);
  CHECK(loss.value == doctest::Approx(std::log(4.0 / 3.0)));
  CHECK(loss.d_psi[1] == doctest::Approx(-0.25));
  CHECK(loss.d_psi[0] == doctest::Approx(0.25));
}

TEST_CASE("signal counts") {
  PGPOConfig cfg;
  std::vector<Trajectory> batch;
  for (int n = 0; n < 4; ++n) batch.push_back(testing::toy_trajectory(n, n, {0.1 * n, 0.5, -0.3, 0.9 + n, 0.2}));
  auto s = signal_count(batch, cfg);
  CHECK(s.trajectory_signals == 4);
  CHECK(s.preference_signals == 24);

  batch.clear();
  for (int n = 0; n < 3; ++n) batch.push_back(testing::toy_trajectory(n, n, {0.0, 1.0 * n}));
  s = signal_count(batch, cfg);
  CHECK(s.trajectory_signals == 3);
  CHECK(s.preference_signals <= 3);

  batch.clear();
  for (int n = 0; n < 5; ++n) batch.push_back(testing::toy_trajectory(n, n, {0.2, 0.2, 0.2}));
  s = signal_count(batch, cfg);
  CHECK(s.trajectory_signals == 5);
  CHECK(s.preference_signals == 0);
}

TEST_CASE("objective gradient matches finite differences") {
  std::mt19937_64 gen(47);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto toy = testing::random_toy_problem(gen, 2, 5, 2);
    PGPOConfig cfg;
    const auto prepared = prepare_batch(toy.batch, cfg);
    worst = std::max(worst, testing::gradient_error(prepared, toy.params, *toy.reference, cfg));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("preference weight zero reduces to the clipped policy gradient") {
  std::mt19937_64 gen(53);
  const auto toy = testing::random_toy_problem(gen, 4, 5, 4);
  PGPOConfig pgpo_cfg;
  pgpo_cfg.pref_weight = 0.0;
  PGPOConfig ppo_cfg;
  ppo_cfg.max_pairs = 0;
  const auto a = prepare_batch(toy.batch, pgpo_cfg);
  const auto b = prepare_batch(toy.batch, ppo_cfg);
  std::vector<double> ga(toy.params.theta.size()), gb(toy.params.theta.size());
  pgpo_loss(a, 0, a.trajectories.size(), toy.params, *toy.reference, pgpo_cfg, ga);
  pgpo_loss(b, 0, b.trajectories.size(), toy.params, *toy.reference, ppo_cfg, gb);
  CHECK(ga == gb);
  bool any = false;
  for (double g : ga) any = any || g != 0.0;
  CHECK(any);
}

TEST_CASE("zero signal leaves parameters unchanged") {
  std::mt19937_64 gen(59);
  auto toy = testing::random_toy_problem(gen, 3, 4, 3);
  for (auto& t : toy.batch) {
    for (auto& turn : t.turns) turn.reward = 0.0;
  }
  const auto before = toy.params.theta;
  AdamState adam;
  PGPOConfig cfg;
  const auto diag = pgpo_update(toy.batch, toy.params, *toy.reference, cfg, adam);
  CHECK(diag.steps == 1);
  CHECK(diag.loss.pair_count == 0);
  CHECK(toy.params.theta == before);
}

TEST_CASE("update steps") {
  std::mt19937_64 gen(61);
  auto toy = testing::random_toy_problem(gen, 5, 5, 3);
  PGPOConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.minibatch_size = 2;
  AdamState adam;
  const auto before = toy.params.theta;
  const auto diag = pgpo_update(toy.batch, toy.params, *toy.reference, cfg, adam);
  CHECK(diag.steps == 3);
  CHECK(adam.steps() == 3);
  // Adam moves each weight by at most about lr per step.
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(toy.params.theta[i] - before[i]) <= 3 * 1e-2 + 1e-12);
  const auto j = diagnostics_to_json(diag);
  CHECK(j.contains("pref_loss"));
  CHECK(j.contains("clip_fraction"));

  // A NaN feature poisons the gradient; the step aborts before writing.
  toy.batch[0].turns[0].features[0] = std::nan("");
  const auto frozen = toy.params.theta;
  try {
    pgpo_update(toy.batch, toy.params, *toy.reference, cfg, adam);
    FAIL("expected NonFiniteGradient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFiniteGradient);
  }
  CHECK(toy.params.theta == frozen);

  cfg.clip_epsilon = 1.5;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("Adam first step") {
  PGPOConfig cfg;
  cfg.learning_rate = 0.1;
  AdamState adam;
  std::vector<double> p{1.0, -2.0, 0.5};
  const std::vector<double> g{0.3, -4.0, 0.0};
  adam.step(p, g, cfg);
  CHECK(p[0] == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(-1.9).epsilon(1e-6));
  CHECK(p[2] == 0.5);
}
