// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_FILTER_FILTER_HPP_
#define LEADOPT_FILTER_FILTER_HPP_

#include <span>
#include <vector>

#include "pgpo/trajectory.hpp"

namespace leadopt::filter {

struct FilterConfig {
  double variance_keep_ratio = 0.5;  // groups at or above this upper quantile of sigma
  double score_keep_ratio = 0.75;    // ceil(ratio * n) best trajectories per kept group
};

struct GroupStats {
  int group = 0;
  int size = 0;
  double sigma = 0.0;  // population std of R over the whole group
  bool kept = false;
  int retained = 0;
};

struct FilterResult {
  std::vector<pgpo::Trajectory> trajectories;  // group id, then R descending, then id
  std::vector<GroupStats> groups;              // by group id
  double sigma_cutoff = 0.0;
};

// Population standard deviation.
double population_std(std::span<const double> values);

// Linear-interpolation quantile; the 0.5 quantile of an even-length list is
// the midpoint of the middle pair.
double quantile(std::vector<double> values, double q);

// Two-stage selection: high-variance groups, then top trajectories inside
// each kept group. Throws EmptyAfterFilter when nothing survives.
FilterResult filter_batch(std::span<const pgpo::Trajectory> batch, const FilterConfig& cfg = {});

// |after| / |before|; throws InvalidArgument when before is 0.
double retention_ratio(std::size_t before, std::size_t after);

}  // namespace leadopt::filter

#endif  // LEADOPT_FILTER_FILTER_HPP_
