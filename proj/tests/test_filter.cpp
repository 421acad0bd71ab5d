// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "common/error.hpp"
#include "filter/filter.hpp"
#include "pgpo_fixture.hpp"

using namespace leadopt;
using namespace leadopt::filter;
using testing::toy_trajectory;

namespace {

// A group of two trajectories with returns mean +- sigma has population std sigma.
void add_pair_group(std::vector<pgpo::Trajectory>& batch, int group, double sigma, int& next_id) {
  batch.push_back(toy_trajectory(next_id++, group, {1.0 - sigma}));
  batch.push_back(toy_trajectory(next_id++, group, {1.0 + sigma}));
}

std::vector<pgpo::Trajectory> synthetic_batch(std::mt19937_64& gen, int groups, int per_group, bool distinct) {
  std::vector<pgpo::Trajectory> batch;
  std::normal_distribution<double> normal(0.0, 1.0);
  int id = 0;
  for (int g = 0; g < groups; ++g) {
    const double spread = distinct ? 0.5 + 0.25 * g : 1.0;
    for (int k = 0; k < per_group; ++k) {
      const double r = distinct ? spread * normal(gen) + 0.001 * k : (k % 2 == 0 ? -1.0 : 1.0);
      batch.push_back(toy_trajectory(id++, g, {r}));
    }
  }
  return batch;
}

}  // namespace

TEST_CASE("median and quantiles") {
  CHECK(quantile({0.1, 0.5, 0.3, 0.7}, 0.5) == doctest::Approx(0.4));
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(population_std(std::vector<double>{1.0, 3.0}) == 1.0);
  CHECK(population_std(std::vector<double>{2.0}) == 0.0);
}

TEST_CASE("variance stage keeps groups at or above the median") {
  std::vector<pgpo::Trajectory> batch;
  int id = 0;
  const double sigmas[] = {0.1, 0.5, 0.3, 0.7};
  for (int g = 0; g < 4; ++g) add_pair_group(batch, g, sigmas[g], id);
  const auto out = filter_batch(batch);
  CHECK(out.sigma_cutoff == doctest::Approx(0.4));
  std::set<int> kept;
  for (const auto& g : out.groups) {
    if (g.kept) kept.insert(g.group);
  }
  CHECK(kept == std::set<int>{1, 3});
  for (const auto& t : out.trajectories) CHECK(kept.count(t.group) == 1);
}

TEST_CASE("score stage keeps the ceiling of three quarters") {
  std::vector<pgpo::Trajectory> batch;
  for (int k = 0; k < 4; ++k) batch.push_back(toy_trajectory(k, 0, {static_cast<double>(k)}));
  const auto out = filter_batch(batch);
  REQUIRE(out.trajectories.size() == 3);
  CHECK(out.trajectories[0].id == 3);
  CHECK(out.trajectories[1].id == 2);
  CHECK(out.trajectories[2].id == 1);

  // All equal: sigma 0 is its own median; ties resolve by id.
  batch.clear();
  for (int k = 0; k < 4; ++k) batch.push_back(toy_trajectory(k, 0, {0.5}));
  const auto tied = filter_batch(batch);
  REQUIRE(tied.trajectories.size() == 3);
  CHECK(tied.trajectories[0].id == 0);
  CHECK(tied.trajectories[2].id == 2);
  CHECK(retention_ratio(4, tied.trajectories.size()) == 0.75);
}

TEST_CASE("retention on synthetic batches") {
  std::mt19937_64 gen(67);
  for (int trial = 0; trial < 20; ++trial) {
    const auto batch = synthetic_batch(gen, 8, 16, true);
    const auto out = filter_batch(batch);
    CHECK(retention_ratio(batch.size(), out.trajectories.size()) == 0.375);
  }
  const auto same = synthetic_batch(gen, 8, 16, false);
  CHECK(retention_ratio(same.size(), filter_batch(same).trajectories.size()) >= 0.375);
  CHECK_THROWS_AS(retention_ratio(0, 0), Error);
  CHECK_THROWS_AS(filter_batch(std::vector<pgpo::Trajectory>{}), Error);
}

TEST_CASE("filter output properties") {
  std::mt19937_64 gen(71);
  for (int trial = 0; trial < 50; ++trial) {
    const int groups = 1 + static_cast<int>(gen() % 6);
    std::vector<pgpo::Trajectory> batch;
    std::uniform_int_distribution<int> coarse(-3, 3);
    int id = 0;
    for (int g = 0; g < groups; ++g) {
      const int size = 1 + static_cast<int>(gen() % 7);
      for (int k = 0; k < size; ++k) batch.push_back(toy_trajectory(id++, g, {0.5 * coarse(gen)}));
    }
    const auto out = filter_batch(batch);
    std::set<int> ids;
    for (const auto& t : out.trajectories) CHECK(ids.insert(t.id).second);
    for (std::size_t k = 1; k < out.trajectories.size(); ++k) {
      const auto& a = out.trajectories[k - 1];
      const auto& b = out.trajectories[k];
      const bool ordered = a.group < b.group ||
                           (a.group == b.group && (a.total_reward() > b.total_reward() ||
                                                   (a.total_reward() == b.total_reward() && a.id < b.id)));
      CHECK(ordered);
    }
    for (const auto& g : out.groups) {
      if (!g.kept) continue;
      double worst_kept = 1e9, best_dropped = -1e9;
      for (const auto& t : batch) {
        if (t.group != g.group) continue;
        if (ids.count(t.id)) {
          worst_kept = std::min(worst_kept, t.total_reward());
        } else {
          best_dropped = std::max(best_dropped, t.total_reward());
        }
      }
      CHECK(worst_kept >= best_dropped);
    }
  }
}
