// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_PGPO_TRAJECTORY_HPP_
#define LEADOPT_PGPO_TRAJECTORY_HPP_

#include <numeric>
#include <vector>

namespace leadopt::pgpo {

// Everything needed to re-evaluate one decision under new parameters.
struct TurnRecord {
  std::vector<double> features;
  std::vector<int> classes;  // action class of every candidate
  std::size_t chosen = 0;
  double temperature = 1.0;
  double old_logp = 0.0;  // log-prob under the sampling policy
  double reward = 0.0;
};

struct Trajectory {
  int id = 0;
  int group = 0;  // lead index
  std::vector<TurnRecord> turns;
  bool success = false;

  double total_reward() const {
    return std::accumulate(turns.begin(), turns.end(), 0.0,
                           [](double acc, const TurnRecord& t) { return acc + t.reward; });
  }
  std::vector<double> rewards() const {
    std::vector<double> r;
    r.reserve(turns.size());
    for (const auto& t : turns) r.push_back(t.reward);
    return r;
  }
};

}  // namespace leadopt::pgpo

#endif  // LEADOPT_PGPO_TRAJECTORY_HPP_
