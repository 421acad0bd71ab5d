// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_POLICY_POLICY_HPP_
#define LEADOPT_POLICY_POLICY_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "common/rng.hpp"
#include "env/environment.hpp"
#include "policy/edits.hpp"

namespace leadopt::policy {

// bias, 10 molecule descriptors, last reward, similarity headroom, 5 turn slots.
inline constexpr int kNumFeatures = 18;
inline constexpr int kTurnSlots = 5;

std::vector<double> featurize(const env::Episode& episode);

// Linear softmax weights, row-major [class][feature].
struct PolicyParams {
  int num_features = 0;
  int num_classes = 0;
  double beta = 0.1;         // preference log-ratio scale
  double temperature = 1.0;  // default sampling temperature
  std::vector<double> theta;

  static PolicyParams zeros(int num_features, int num_classes);

  double& weight(int cls, int feature) {
    return theta[static_cast<std::size_t>(cls) * static_cast<std::size_t>(num_features) +
                 static_cast<std::size_t>(feature)];
  }
  double weight(int cls, int feature) const {
    return theta[static_cast<std::size_t>(cls) * static_cast<std::size_t>(num_features) +
                 static_cast<std::size_t>(feature)];
  }
  std::span<const double> row(int cls) const {
    return std::span<const double>(theta).subspan(
        static_cast<std::size_t>(cls) * static_cast<std::size_t>(num_features),
        static_cast<std::size_t>(num_features));
  }
};

// Throws InvalidArgument on shape mismatch, non-finite weights or temperature <= 0.
void validate(const PolicyParams& p);

// logit_k = <theta[classes[k]], features> / temperature
std::vector<double> action_logits(const PolicyParams& p, std::span<const double> features,
                                  std::span<const int> classes, double temperature);

std::vector<double> log_softmax(std::span<const double> logits);

double log_prob(const PolicyParams& p, std::span<const double> features, std::span<const int> classes,
                std::size_t chosen, double temperature);

// grad += scale * d log pi(chosen) / d theta. Rows of classes that appear
// several times in the candidate list collect every occurrence.
void accumulate_grad_logprob(const PolicyParams& p, std::span<const double> features,
                             std::span<const int> classes, std::size_t chosen, double temperature,
                             double scale, std::span<double> grad);

std::vector<double> grad_logprob(const PolicyParams& p, std::span<const double> features,
                                 std::span<const int> classes, std::size_t chosen, double temperature);

struct Draw {
  std::size_t index = 0;
  double log_prob = 0.0;
};
// Inverse-CDF categorical draw from logits.
Draw sample_categorical(std::span<const double> logits, Rng& rng);

// Frozen copy of the parameters used as the preference baseline.
class ReferencePolicy {
 public:
  explicit ReferencePolicy(PolicyParams params) : params_(std::move(params)) {}
  const PolicyParams& params() const { return params_; }
  double log_prob(std::span<const double> features, std::span<const int> classes, std::size_t chosen,
                  double temperature) const {
    return policy::log_prob(params_, features, classes, chosen, temperature);
  }

 private:
  const PolicyParams params_;
};

std::shared_ptr<const ReferencePolicy> snapshot_reference(const PolicyParams& p);

// beta * (log pi_theta - log pi_ref)
inline double psi(double beta, double logp, double ref_logp) { return beta * (logp - ref_logp); }

nlohmann::json params_to_json(const PolicyParams& p);
PolicyParams params_from_json(const nlohmann::json& j);
void save_params(const PolicyParams& p, const std::string& path);
PolicyParams load_params(const std::string& path);

// What a policy did on one turn. The gradient fields are empty for
// inference-only (text) policies.
struct Decision {
  std::string text;
  std::vector<double> features;
  std::vector<int> classes;
  std::size_t chosen = 0;
  double log_prob = 0.0;
  bool differentiable = false;
};

class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;
  virtual Decision act(const env::Episode& episode, double temperature, Rng& rng) const = 0;
};

// The built-in linear policy over enumerated edits.
class EditPolicy final : public ActionPolicy {
 public:
  EditPolicy(std::shared_ptr<const PolicyParams> params, const FragmentLibrary& library,
             std::size_t max_candidates = kMaxCandidates);

  Decision act(const env::Episode& episode, double temperature, Rng& rng) const override;

  const PolicyParams& params() const { return *params_; }
  const FragmentLibrary& library() const { return *library_; }

 private:
  std::shared_ptr<const PolicyParams> params_;
  const FragmentLibrary* library_;
  std::size_t max_candidates_;
};

// Adapter for external text generators: observation text in, action text
// out. Inference only.
class TextPolicy final : public ActionPolicy {
 public:
  using Generator = std::function<std::string(const std::string& observation, double temperature, Rng& rng)>;
  explicit TextPolicy(Generator generator) : generator_(std::move(generator)) {}

  Decision act(const env::Episode& episode, double temperature, Rng& rng) const override;

 private:
  Generator generator_;
};

std::string format_action(const std::string& reasoning, const std::string& smiles);

}  // namespace leadopt::policy

#endif  // LEADOPT_POLICY_POLICY_HPP_
