// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pgpo/pgpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace leadopt::pgpo {

void validate(const PGPOConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kConfigError, what);
  };
  require(cfg.clip_epsilon > 0 && cfg.clip_epsilon < 1, "clip_epsilon must be in (0, 1)");
  require(cfg.discount > 0 && cfg.discount <= 1, "discount must be in (0, 1]");
  require(cfg.gae_lambda >= 0 && cfg.gae_lambda <= 1, "gae_lambda must be in [0, 1]");
  require(cfg.pref_weight >= 0 && std::isfinite(cfg.pref_weight), "pref_weight must be >= 0");
  require(cfg.max_pairs >= 0, "max_pairs must be >= 0");
  require(cfg.pair_keep_ratio > 0 && cfg.pair_keep_ratio <= 1, "pair_keep_ratio must be in (0, 1]");
  require(cfg.learning_rate > 0 && std::isfinite(cfg.learning_rate), "learning_rate must be positive");
  require(cfg.minibatch_size > 0, "minibatch_size must be positive");
  require(cfg.epochs > 0, "epochs must be positive");
  require(cfg.max_grad_norm > 0, "max_grad_norm must be positive");
  require(cfg.adam_beta1 >= 0 && cfg.adam_beta1 < 1, "adam_beta1 must be in [0, 1)");
  require(cfg.adam_beta2 >= 0 && cfg.adam_beta2 < 1, "adam_beta2 must be in [0, 1)");
  require(cfg.adam_epsilon > 0, "adam_epsilon must be positive");
}

Gae compute_gae(std::span<const double> rewards, std::span<const double> values, double discount,
                double gae_lambda) {
  if (values.size() != rewards.size() + 1) {
    fail(ErrorCode::kLengthMismatch, "GAE needs one value per reward plus a bootstrap value (got " +
                                         std::to_string(values.size()) + " values for " +
                                         std::to_string(rewards.size()) + " rewards)");
  }
  const std::size_t n = rewards.size();
  Gae out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double delta = rewards[k] + discount * values[k + 1] - values[k];
    running = delta + discount * gae_lambda * running;
    out.advantages[k] = running;
    out.returns[k] = running + values[k];
  }
  return out;
}

double ppo_surrogate(double old_logp, double new_logp, double advantage, double epsilon) {
  const double ratio = std::exp(new_logp - old_logp);
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

std::vector<int> turn_ranks(std::span<const double> rewards) {
  std::vector<int> order(rewards.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = rewards[static_cast<std::size_t>(a)];
    const double rb = rewards[static_cast<std::size_t>(b)];
    if (ra != rb) return ra > rb;
    return a > b;
  });
  std::vector<int> rank(rewards.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos) + 1;
  return rank;
}

double gain(double reward) { return std::exp2(reward) - 1.0; }

double rank_discount(int rank) { return std::log1p(static_cast<double>(rank)); }

double lambda_weight(double r_i, double r_j, int rank_i, int rank_j) {
  if (rank_i < 1 || rank_j < 1) fail(ErrorCode::kInvalidArgument, "ranks start at 1");
  return std::abs(gain(r_i) - gain(r_j)) * std::abs(1.0 / rank_discount(rank_i) - 1.0 / rank_discount(rank_j));
}

std::vector<PreferencePair> select_pairs(std::span<const double> rewards, double keep_ratio, int max_pairs,
                                         int trajectory_id, bool lambda_weights) {
  std::vector<PreferencePair> pairs;
  const int n = static_cast<int>(rewards.size());
  const auto ranks = turn_ranks(rewards);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double ri = rewards[static_cast<std::size_t>(i)];
      const double rj = rewards[static_cast<std::size_t>(j)];
      if (!(rj > ri)) continue;
      PreferencePair p;
      p.trajectory = trajectory_id;
      p.worse = i;
      p.better = j;
      p.worse_rank = ranks[static_cast<std::size_t>(i)];
      p.better_rank = ranks[static_cast<std::size_t>(j)];
      p.weight = lambda_weights ? lambda_weight(ri, rj, p.worse_rank, p.better_rank) : 1.0;
      pairs.push_back(p);
    }
  }
  if (pairs.empty()) return pairs;
  auto gap = [&](const PreferencePair& p) {
    return rewards[static_cast<std::size_t>(p.better)] - rewards[static_cast<std::size_t>(p.worse)];
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const PreferencePair& a, const PreferencePair& b) { return gap(a) > gap(b); });
  // The small slack keeps exact products such as 0.75 * 8 from rounding down.
  auto keep = static_cast<std::size_t>(std::floor(keep_ratio * static_cast<double>(pairs.size()) + 1e-9));
  keep = std::max<std::size_t>(keep, 1);
  keep = std::min(keep, static_cast<std::size_t>(std::max(max_pairs, 0)));
  pairs.resize(std::min(keep, pairs.size()));
  return pairs;
}

double pair_loss(double psi_gap) {
  // softplus(-gap)
  const double x = -psi_gap;
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

namespace {

// d softplus(-gap) / d gap = -sigmoid(-gap)
double pair_loss_slope(double psi_gap) {
  if (psi_gap >= 0) {
    const double e = std::exp(-psi_gap);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(psi_gap));
}

}  // namespace

PreferenceLoss preference_loss(std::span<const PreferencePair> pairs, std::span<const double> psi) {
  PreferenceLoss out;
  out.d_psi.assign(psi.size(), 0.0);
  for (const auto& p : pairs) {
    const auto i = static_cast<std::size_t>(p.worse);
    const auto j = static_cast<std::size_t>(p.better);
    if (i >= psi.size() || j >= psi.size()) fail(ErrorCode::kLengthMismatch, "pair refers to a missing turn");
    const double gap = psi[j] - psi[i];
    out.value += p.weight * pair_loss(gap);
    const double slope = p.weight * pair_loss_slope(gap);
    out.d_psi[j] += slope;
    out.d_psi[i] -= slope;
  }
  return out;
}

PreparedBatch prepare_batch(std::span<const Trajectory> batch, const PGPOConfig& cfg) {
  PreparedBatch out;
  std::size_t horizon = 0;
  for (const auto& t : batch) horizon = std::max(horizon, t.turns.size());
  std::vector<double> sum(horizon, 0.0);
  std::vector<int> count(horizon, 0);
  for (const auto& t : batch) {
    double g = 0.0;
    for (std::size_t k = t.turns.size(); k-- > 0;) {
      g = t.turns[k].reward + cfg.discount * g;
      sum[k] += g;
      ++count[k];
    }
  }
  out.baseline.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k) out.baseline[k] = count[k] > 0 ? sum[k] / count[k] : 0.0;

  for (const auto& t : batch) {
    const auto rewards = t.rewards();
    std::vector<double> values(out.baseline.begin(),
                               out.baseline.begin() + static_cast<std::ptrdiff_t>(rewards.size()));
    values.push_back(0.0);  // episodes end at the last recorded turn
    out.trajectories.push_back(&t);
    out.advantages.push_back(compute_gae(rewards, values, cfg.discount, cfg.gae_lambda).advantages);
    if (rewards.size() >= 2) {
      out.pairs.push_back(select_pairs(rewards, cfg.pair_keep_ratio, cfg.max_pairs, t.id, cfg.lambda_weights));
    } else {
      out.pairs.emplace_back();
    }
  }
  return out;
}

LossBreakdown pgpo_loss(const PreparedBatch& batch, std::size_t begin, std::size_t end,
                        const policy::PolicyParams& params, const policy::ReferencePolicy& reference,
                        const PGPOConfig& cfg, std::span<double> grad) {
  LossBreakdown out;
  end = std::min(end, batch.trajectories.size());
  if (begin >= end) return out;
  const double n = static_cast<double>(end - begin);
  const bool want_grad = !grad.empty();
  const bool use_pref = cfg.pref_weight > 0.0;
  double ratio_sum = 0.0;
  int clipped = 0;
  std::vector<double> logp, psi;
  for (std::size_t b = begin; b < end; ++b) {
    const Trajectory& traj = *batch.trajectories[b];
    const auto& adv = batch.advantages[b];
    const std::size_t turns = traj.turns.size();
    logp.assign(turns, 0.0);
    for (std::size_t k = 0; k < turns; ++k) {
      const TurnRecord& t = traj.turns[k];
      logp[k] = policy::log_prob(params, t.features, t.classes, t.chosen, t.temperature);
      const double ratio = std::exp(logp[k] - t.old_logp);
      const double surrogate = ppo_surrogate(t.old_logp, logp[k], adv[k], cfg.clip_epsilon);
      out.traj_objective += surrogate / n;
      ratio_sum += ratio;
      if (std::abs(ratio - 1.0) > cfg.clip_epsilon) ++clipped;
      ++out.turn_count;
      // The unclipped branch carries the gradient whenever it attains the min.
      if (want_grad && ratio * adv[k] <= surrogate) {
        policy::accumulate_grad_logprob(params, t.features, t.classes, t.chosen, t.temperature,
                                        -adv[k] * ratio / n, grad);
      }
    }
    const auto& pairs = batch.pairs[b];
    out.pair_count += static_cast<int>(pairs.size());
    if (!use_pref || pairs.empty()) continue;
    psi.assign(turns, 0.0);
    for (std::size_t k = 0; k < turns; ++k) {
      const TurnRecord& t = traj.turns[k];
      psi[k] = policy::psi(params.beta, logp[k], reference.log_prob(t.features, t.classes, t.chosen, t.temperature));
    }
    const auto pref = preference_loss(pairs, psi);
    out.pref_loss += pref.value / n;
    if (!want_grad) continue;
    for (std::size_t k = 0; k < turns; ++k) {
      if (pref.d_psi[k] == 0.0) continue;
      const TurnRecord& t = traj.turns[k];
      policy::accumulate_grad_logprob(params, t.features, t.classes, t.chosen, t.temperature,
                                      cfg.pref_weight * pref.d_psi[k] * params.beta / n, grad);
    }
  }
  out.total = -out.traj_objective + (use_pref ? cfg.pref_weight * out.pref_loss : 0.0);
  out.mean_ratio = out.turn_count > 0 ? ratio_sum / out.turn_count : 0.0;
  out.clip_fraction = out.turn_count > 0 ? static_cast<double>(clipped) / out.turn_count : 0.0;
  return out;
}

void AdamState::step(std::span<double> params, std::span<const double> grad, const PGPOConfig& cfg) {
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0);
    v_.assign(params.size(), 0.0);
    t_ = 0;
  }
  ++t_;
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg.adam_beta1 * m_[i] + (1.0 - cfg.adam_beta1) * grad[i];
    v_[i] = cfg.adam_beta2 * v_[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
  }
}

nlohmann::ordered_json diagnostics_to_json(const UpdateDiagnostics& d) {
  nlohmann::ordered_json j;
  j["steps"] = d.steps;
  j["trajectories"] = d.trajectories;
  j["loss"] = d.loss.total;
  j["traj_objective"] = d.loss.traj_objective;
  j["pref_loss"] = d.loss.pref_loss;
  j["mean_ratio"] = d.loss.mean_ratio;
  j["clip_fraction"] = d.loss.clip_fraction;
  j["pairs"] = d.loss.pair_count;
  j["grad_norm"] = d.grad_norm;
  return j;
}

UpdateDiagnostics pgpo_update(std::span<const Trajectory> batch, policy::PolicyParams& params,
                              const policy::ReferencePolicy& reference, const PGPOConfig& cfg, AdamState& optimizer) {
  validate(cfg);
  policy::validate(params);
  UpdateDiagnostics diag;
  const PreparedBatch prepared = prepare_batch(batch, cfg);
  const std::size_t n = prepared.trajectories.size();
  diag.trajectories = static_cast<int>(n);
  diag.loss = pgpo_loss(prepared, 0, n, params, reference, cfg);
  std::vector<double> grad(params.theta.size());
  const auto mb = static_cast<std::size_t>(cfg.minibatch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t begin = 0; begin < n; begin += mb) {
      std::fill(grad.begin(), grad.end(), 0.0);
      pgpo_loss(prepared, begin, begin + mb, params, reference, cfg, grad);
      double norm2 = 0.0;
      for (double g : grad) norm2 += g * g;
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm)) {
        fail(ErrorCode::kNonFiniteGradient, "non-finite gradient at update step " + std::to_string(diag.steps));
      }
      diag.grad_norm = norm;
      if (norm > cfg.max_grad_norm) {
        const double scale = cfg.max_grad_norm / norm;
        for (double& g : grad) g *= scale;
      }
      optimizer.step(params.theta, grad, cfg);
      ++diag.steps;
    }
  }
  return diag;
}

SignalCount signal_count(std::span<const Trajectory> batch, const PGPOConfig& cfg) {
  SignalCount s;
  for (const auto& t : batch) {
    ++s.trajectory_signals;
    if (t.turns.size() < 2) continue;
    const auto rewards = t.rewards();
    const auto pairs = select_pairs(rewards, cfg.pair_keep_ratio, cfg.max_pairs, t.id, cfg.lambda_weights);
    long available = 0;
    for (double ri : rewards) {
      for (double rj : rewards) available += rj > ri ? 1 : 0;
    }
    if (static_cast<long>(pairs.size()) > std::min<long>(cfg.max_pairs, available)) {
      fail(ErrorCode::kInvalidArgument, "pair selection exceeded its cap");
    }
    s.preference_signals += static_cast<long>(pairs.size());
  }
  return s;
}

}  // namespace leadopt::pgpo
