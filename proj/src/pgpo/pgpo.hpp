// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_PGPO_PGPO_HPP_
#define LEADOPT_PGPO_PGPO_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgpo/trajectory.hpp"
#include "policy/policy.hpp"

namespace leadopt::pgpo {

struct PGPOConfig {
  double clip_epsilon = 0.2;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double pref_weight = 0.3;
  int max_pairs = 6;
  double pair_keep_ratio = 0.75;
  bool lambda_weights = true;  // false weighs every selected pair by 1
  double learning_rate = 5e-5;
  int minibatch_size = 32;  // trajectories per optimizer step
  int epochs = 1;
  double max_grad_norm = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

// Throws ConfigError.
void validate(const PGPOConfig& cfg);

struct Gae {
  std::vector<double> advantages;
  std::vector<double> returns;
};
// values has one entry per reward plus the bootstrap value of the final state.
Gae compute_gae(std::span<const double> rewards, std::span<const double> values, double discount,
                double gae_lambda);

// min(rho * A, clip(rho, 1-eps, 1+eps) * A) with rho = exp(new - old).
double ppo_surrogate(double old_logp, double new_logp, double advantage, double epsilon);

struct PreferencePair {
  int trajectory = 0;
  int worse = 0;   // turn index i
  int better = 0;  // turn index j, r_j > r_i
  int worse_rank = 0;
  int better_rank = 0;
  double weight = 0.0;
};

// 1-based rank of every turn by reward, best first. Among equal rewards the
// earlier turn gets the larger rank number.
std::vector<int> turn_ranks(std::span<const double> rewards);

double gain(double reward);        // 2^r - 1
double rank_discount(int rank);    // ln(1 + rank)
double lambda_weight(double r_i, double r_j, int rank_i, int rank_j);

// Ordered pairs with r_j > r_i, largest reward gap first; keeps
// floor(keep_ratio * n) (at least one) and at most max_pairs.
std::vector<PreferencePair> select_pairs(std::span<const double> rewards, double keep_ratio, int max_pairs,
                                         int trajectory_id = 0, bool lambda_weights = true);

// log(1 + exp(-gap)), computed without overflow.
double pair_loss(double psi_gap);

struct PreferenceLoss {
  double value = 0.0;
  std::vector<double> d_psi;  // dLoss/dpsi_t per turn
};
PreferenceLoss preference_loss(std::span<const PreferencePair> pairs, std::span<const double> psi);

// Trajectories with their advantages and pairs fixed for an update.
struct PreparedBatch {
  std::vector<const Trajectory*> trajectories;
  std::vector<std::vector<double>> advantages;
  std::vector<std::vector<PreferencePair>> pairs;
  std::vector<double> baseline;  // per turn index
};

// Baseline V_t = mean return-to-go at turn t over the batch, then GAE and
// pair selection per trajectory.
PreparedBatch prepare_batch(std::span<const Trajectory> batch, const PGPOConfig& cfg);

struct LossBreakdown {
  double total = 0.0;            // -J_traj + pref_weight * L_pref, per trajectory
  double traj_objective = 0.0;   // J_traj
  double pref_loss = 0.0;        // L_pref
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  int pair_count = 0;
  int turn_count = 0;
};

// Loss over trajectories [begin, end) of the prepared batch. When `grad` is
// non-empty the gradient of `total` with respect to theta is added to it.
LossBreakdown pgpo_loss(const PreparedBatch& batch, std::size_t begin, std::size_t end,
                        const policy::PolicyParams& params, const policy::ReferencePolicy& reference,
                        const PGPOConfig& cfg, std::span<double> grad = {});

class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(std::size_t size) : m_(size, 0.0), v_(size, 0.0) {}
  // Applies one descent step on `params`.
  void step(std::span<double> params, std::span<const double> grad, const PGPOConfig& cfg);
  long steps() const { return t_; }

 private:
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct UpdateDiagnostics {
  int steps = 0;
  int trajectories = 0;
  LossBreakdown loss;    // accumulated over the batch before the first step
  double grad_norm = 0;  // pre-clip norm of the last step
};
nlohmann::ordered_json diagnostics_to_json(const UpdateDiagnostics& d);

// Minibatch Adam steps on `params`. Throws NonFiniteGradient without
// touching `params` for the offending step.
UpdateDiagnostics pgpo_update(std::span<const Trajectory> batch, policy::PolicyParams& params,
                              const policy::ReferencePolicy& reference, const PGPOConfig& cfg, AdamState& optimizer);

struct SignalCount {
  long trajectory_signals = 0;
  long preference_signals = 0;
};
SignalCount signal_count(std::span<const Trajectory> batch, const PGPOConfig& cfg);

}  // namespace leadopt::pgpo

#endif  // LEADOPT_PGPO_PGPO_HPP_
