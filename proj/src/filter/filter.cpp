// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "filter/filter.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "common/error.hpp"

namespace leadopt::filter {

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "quantile of an empty list");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  if (frac == 0.5) return (values[lo] + values[hi]) / 2.0;
  return values[lo] + frac * (values[hi] - values[lo]);
}

FilterResult filter_batch(std::span<const pgpo::Trajectory> batch, const FilterConfig& cfg) {
  if (!(cfg.variance_keep_ratio > 0 && cfg.variance_keep_ratio <= 1) ||
      !(cfg.score_keep_ratio > 0 && cfg.score_keep_ratio <= 1)) {
    fail(ErrorCode::kConfigError, "filter ratios must be in (0, 1]");
  }
  std::map<int, std::vector<const pgpo::Trajectory*>> groups;
  for (const auto& t : batch) groups[t.group].push_back(&t);
  if (groups.empty()) fail(ErrorCode::kEmptyAfterFilter, "no trajectories to filter");

  FilterResult out;
  std::vector<double> sigmas;
  for (const auto& [id, members] : groups) {
    std::vector<double> r;
    for (const auto* t : members) r.push_back(t->total_reward());
    GroupStats g;
    g.group = id;
    g.size = static_cast<int>(members.size());
    g.sigma = population_std(r);
    out.groups.push_back(g);
    sigmas.push_back(g.sigma);
  }
  out.sigma_cutoff = quantile(sigmas, 1.0 - cfg.variance_keep_ratio);

  std::size_t gi = 0;
  for (auto& [id, members] : groups) {
    GroupStats& g = out.groups[gi++];
    if (!(g.sigma >= out.sigma_cutoff)) continue;
    g.kept = true;
    std::vector<std::pair<double, const pgpo::Trajectory*>> ranked;
    for (const auto* t : members) ranked.emplace_back(t->total_reward(), t);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second->id < b.second->id;
    });
    const auto keep = static_cast<std::size_t>(
        std::ceil(cfg.score_keep_ratio * static_cast<double>(ranked.size()) - 1e-9));
    g.retained = static_cast<int>(std::min(keep, ranked.size()));
    for (std::size_t k = 0; k < static_cast<std::size_t>(g.retained); ++k) out.trajectories.push_back(*ranked[k].second);
  }
  if (out.trajectories.empty()) fail(ErrorCode::kEmptyAfterFilter, "filtering removed every trajectory");
  return out;
}

double retention_ratio(std::size_t before, std::size_t after) {
  if (before == 0) fail(ErrorCode::kInvalidArgument, "retention ratio of an empty batch");
  return static_cast<double>(after) / static_cast<double>(before);
}

}  // namespace leadopt::filter
