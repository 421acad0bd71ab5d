// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "oracle/properties.hpp"

namespace leadopt::policy {

using chemgraph::Element;

std::vector<double> featurize(const env::Episode& episode) {
  const auto& m = episode.current().graph;
  const int n = static_cast<int>(m.num_atoms());
  int carbon = 0, nitrogen = 0, oxygen = 0, halogen = 0, aromatic = 0;
  for (const auto& a : m.atoms()) {
    switch (a.element) {
      case Element::C: ++carbon; break;
      case Element::N: ++nitrogen; break;
      case Element::O: ++oxygen; break;
      default:
        if (chemgraph::is_halogen(a.element)) ++halogen;
    }
    if (a.aromatic) ++aromatic;
  }
  const double heavy = std::max(1, m.heavy_atom_count());
  std::vector<double> f;
  f.reserve(kNumFeatures);
  f.push_back(1.0);
  f.push_back(heavy / 20.0);
  f.push_back(carbon / heavy);
  f.push_back(nitrogen / 5.0);
  f.push_back(oxygen / 5.0);
  f.push_back(halogen / 3.0);
  f.push_back(m.ring_count() / 3.0);
  f.push_back(n > 0 ? static_cast<double>(aromatic) / n : 0.0);
  f.push_back(oracle::logp_proxy(m) / 5.0);
  f.push_back(oracle::sa_proxy(m) / 5.0);
  f.push_back(oracle::qed_proxy(m));
  f.push_back(std::clamp(episode.last_reward() / 3.0, -1.0, 1.0));
  f.push_back(episode.current_similarity() - episode.config().similarity_threshold);
  const int slot = std::clamp(episode.turn(), 0, kTurnSlots - 1);
  for (int k = 0; k < kTurnSlots; ++k) f.push_back(k == slot ? 1.0 : 0.0);
  return f;
}

PolicyParams PolicyParams::zeros(int num_features, int num_classes) {
  if (num_features <= 0 || num_classes <= 0) fail(ErrorCode::kInvalidArgument, "policy shape must be positive");
  PolicyParams p;
  p.num_features = num_features;
  p.num_classes = num_classes;
  p.theta.assign(static_cast<std::size_t>(num_features) * static_cast<std::size_t>(num_classes), 0.0);
  return p;
}

void validate(const PolicyParams& p) {
  if (p.num_features <= 0 || p.num_classes <= 0 ||
      p.theta.size() != static_cast<std::size_t>(p.num_features) * static_cast<std::size_t>(p.num_classes)) {
    fail(ErrorCode::kInvalidArgument, "policy weight matrix does not match its shape header");
  }
  if (!(p.temperature > 0.0) || !std::isfinite(p.temperature)) {
    fail(ErrorCode::kInvalidArgument, "sampling temperature must be positive");
  }
  if (!std::isfinite(p.beta)) fail(ErrorCode::kInvalidArgument, "beta must be finite");
  for (double w : p.theta) {
    if (!std::isfinite(w)) fail(ErrorCode::kInvalidArgument, "policy weights must be finite");
  }
}

std::vector<double> action_logits(const PolicyParams& p, std::span<const double> features,
                                  std::span<const int> classes, double temperature) {
  if (features.size() != static_cast<std::size_t>(p.num_features)) {
    fail(ErrorCode::kLengthMismatch, "feature vector has " + std::to_string(features.size()) +
                                         " entries, policy expects " + std::to_string(p.num_features));
  }
  std::vector<double> logits;
  logits.reserve(classes.size());
  for (int c : classes) {
    if (c < 0 || c >= p.num_classes) fail(ErrorCode::kInvalidArgument, "action class out of range");
    const auto w = p.row(c);
    double dot = 0.0;
    for (std::size_t k = 0; k < features.size(); ++k) dot += w[k] * features[k];
    logits.push_back(dot / temperature);
  }
  return logits;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  if (logits.empty()) fail(ErrorCode::kNoLegalEdits, "empty candidate set");
  const double hi = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - hi);
  const double lse = hi + std::log(z);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

double log_prob(const PolicyParams& p, std::span<const double> features, std::span<const int> classes,
                std::size_t chosen, double temperature) {
  if (chosen >= classes.size()) fail(ErrorCode::kInvalidArgument, "chosen action is not a candidate");
  return log_softmax(action_logits(p, features, classes, temperature))[chosen];
}

void accumulate_grad_logprob(const PolicyParams& p, std::span<const double> features,
                             std::span<const int> classes, std::size_t chosen, double temperature,
                             double scale, std::span<double> grad) {
  if (chosen >= classes.size()) fail(ErrorCode::kInvalidArgument, "chosen action is not a candidate");
  if (grad.size() != p.theta.size()) fail(ErrorCode::kLengthMismatch, "gradient buffer has the wrong size");
  const auto lsm = log_softmax(action_logits(p, features, classes, temperature));
  const auto nf = static_cast<std::size_t>(p.num_features);
  for (std::size_t a = 0; a < classes.size(); ++a) {
    const double coef = scale * ((a == chosen ? 1.0 : 0.0) - std::exp(lsm[a])) / temperature;
    if (coef == 0.0) continue;
    double* row = grad.data() + static_cast<std::size_t>(classes[a]) * nf;
    for (std::size_t k = 0; k < nf; ++k) row[k] += coef * features[k];
  }
}

std::vector<double> grad_logprob(const PolicyParams& p, std::span<const double> features,
                                 std::span<const int> classes, std::size_t chosen, double temperature) {
  std::vector<double> g(p.theta.size(), 0.0);
  accumulate_grad_logprob(p, features, classes, chosen, temperature, 1.0, g);
  return g;
}

Draw sample_categorical(std::span<const double> logits, Rng& rng) {
  const auto lsm = log_softmax(logits);
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < lsm.size(); ++i) {
    acc += std::exp(lsm[i]);
    if (u < acc) return {i, lsm[i]};
  }
  // Rounding left u above the last partial sum.
  std::size_t last = lsm.size() - 1;
  while (last > 0 && !std::isfinite(lsm[last])) --last;
  return {last, lsm[last]};
}

std::shared_ptr<const ReferencePolicy> snapshot_reference(const PolicyParams& p) {
  return std::make_shared<const ReferencePolicy>(p);
}

nlohmann::json params_to_json(const PolicyParams& p) {
  nlohmann::ordered_json j;
  j["format"] = "leadopt-policy";
  j["version"] = 1;
  j["num_features"] = p.num_features;
  j["num_classes"] = p.num_classes;
  j["beta"] = p.beta;
  j["temperature"] = p.temperature;
  j["theta"] = p.theta;
  return j;
}

PolicyParams params_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "leadopt-policy") {
      fail(ErrorCode::kParseError, "not a policy checkpoint");
    }
    if (j.at("version").get<int>() != 1) {
      fail(ErrorCode::kParseError, "unsupported checkpoint version " + j.at("version").dump());
    }
    PolicyParams p;
    p.num_features = j.at("num_features").get<int>();
    p.num_classes = j.at("num_classes").get<int>();
    p.beta = j.at("beta").get<double>();
    p.temperature = j.at("temperature").get<double>();
    p.theta = j.at("theta").get<std::vector<double>>();
    validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("malformed checkpoint: ") + e.what());
  }
}

void save_params(const PolicyParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write checkpoint '" + path + "'");
  out << params_to_json(p).dump(1) << '\n';
  if (!out) fail(ErrorCode::kIoError, "failed writing checkpoint '" + path + "'");
}

PolicyParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, path + ": " + e.what());
  }
  return params_from_json(j);
}

std::string format_action(const std::string& reasoning, const std::string& smiles) {
  return "<think>" + reasoning + "</think><answer>" + smiles + "</answer>";
}

EditPolicy::EditPolicy(std::shared_ptr<const PolicyParams> params, const FragmentLibrary& library,
                       std::size_t max_candidates)
    : params_(std::move(params)), library_(&library), max_candidates_(max_candidates) {
  validate(*params_);
  if (params_->num_features != kNumFeatures) {
    fail(ErrorCode::kInvalidArgument, "edit policy needs " + std::to_string(kNumFeatures) + " features");
  }
  if (params_->num_classes != num_action_classes(library.size())) {
    fail(ErrorCode::kInvalidArgument, "policy class count does not match the fragment library");
  }
}

Decision EditPolicy::act(const env::Episode& episode, double temperature, Rng& rng) const {
  const auto& m = episode.current().graph;
  const auto edits = enumerate_edits(m, *library_, max_candidates_);
  Decision d;
  d.features = featurize(episode);
  d.classes.reserve(edits.size());
  for (const auto& e : edits) d.classes.push_back(action_class(e, m, library_->size()));
  const auto logits = action_logits(*params_, d.features, d.classes, temperature);
  const Draw draw = sample_categorical(logits, rng);
  d.chosen = draw.index;
  d.log_prob = draw.log_prob;
  d.differentiable = true;
  const EditAction& edit = edits[draw.index];
  if (edit.kind == EditKind::kDone) {
    d.text = "<think>no further edit looks useful</think>[DONE]";
  } else {
    d.text = format_action(describe_edit(edit, *library_), render_edit(m, edit, *library_));
  }
  return d;
}

Decision TextPolicy::act(const env::Episode& episode, double temperature, Rng& rng) const {
  Decision d;
  d.text = generator_(episode.render_observation(), temperature, rng);
  return d;
}

}  // namespace leadopt::policy
