// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_ENV_ENVIRONMENT_HPP_
#define LEADOPT_ENV_ENVIRONMENT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemgraph/fingerprint.hpp"
#include "chemgraph/graph.hpp"
#include "oracle/oracle.hpp"

namespace leadopt::env {

enum class TaskMode { kSingle, kMulti };

std::string_view task_mode_name(TaskMode m);
TaskMode task_mode_from_name(std::string_view name);

struct EnvConfig {
  TaskMode mode = TaskMode::kSingle;
  double similarity_threshold = 0.4;
  int horizon = 5;
  double invalid_reward = -0.5;
  double identical_reward = -0.3;
  double similarity_penalty = 2.0;
  double improvement_scale = 5.0;
  bool structural_guard = true;
  int max_carbon_chain = 10;
};

// A scored molecule plus everything the environment needs to compare it.
struct Molecule {
  chemgraph::MolecularGraph graph;
  std::string canonical;
  chemgraph::Fingerprint fingerprint;
  std::vector<double> scores;
};

// Parses, canonicalizes, fingerprints and scores (charging the ledger).
Molecule make_molecule(std::string_view smiles, oracle::OracleLedger& ledger);
Molecule make_molecule(chemgraph::MolecularGraph graph, oracle::OracleLedger& ledger);

// Sum of w_i * sign_i * F_i: larger is better for every property.
double weighted_objective(std::span<const oracle::PropertySpec> specs, std::span<const double> scores);

// Success test of `scores` against the task; `lead_scores` is the baseline
// for multi-property deltas. Always conjoined with sim >= gamma.
struct SuccessCheck {
  std::vector<bool> per_property;
  bool similarity_ok = false;
  bool overall = false;
};
SuccessCheck check_success(const EnvConfig& cfg, std::span<const oracle::PropertySpec> specs,
                           std::span<const double> scores, std::span<const double> lead_scores,
                           double similarity);

struct GuardViolation {
  int chain_length = 0;
  std::string message;
};
// Longest acyclic all-carbon chain; violation above the limit.
int longest_carbon_chain(const chemgraph::MolecularGraph& m);
std::optional<GuardViolation> structural_guard(const chemgraph::MolecularGraph& m, int max_chain);

struct ExtractedAction {
  std::optional<std::string> answer;
  bool done = false;
};
// Last complete <answer>...</answer> span, trimmed, and the [DONE] sentinel.
ExtractedAction parse_action(std::string_view text);
// Throws NoAnswerTag when no complete answer span exists.
std::string extract_answer(std::string_view text);

enum class RewardCase {
  kDone,
  kNoAnswer,
  kInvalid,
  kGuard,
  kIdentical,
  kSimilarity,
  kDegradation,
  kImprovement,
  kBudgetExhausted,
};
std::string_view reward_case_name(RewardCase c);

struct Turn {
  int index = 0;
  std::string action;
  std::optional<std::string> smiles;
  std::optional<std::string> canonical;
  RewardCase reward_case = RewardCase::kInvalid;
  double reward = 0.0;
  std::optional<double> similarity;
  std::vector<double> scores;  // empty unless the proposal was scored
  double delta = 0.0;          // weighted objective change vs the current molecule
  bool success = false;
  bool rolled_back = false;
  std::string feedback;
};

struct StepResult {
  double reward = 0.0;
  bool done = false;
  std::string feedback;
};

// One multi-turn optimization episode. Similarity is always measured
// against the lead; the episode may start from a different molecule
// (evolutionary parents).
class Episode {
 public:
  Episode(const Molecule& lead, const Molecule& start, const EnvConfig& cfg,
          oracle::OracleLedger& ledger);

  static Episode reset(std::string_view lead_smiles, const EnvConfig& cfg, oracle::OracleLedger& ledger);

  StepResult step(std::string_view action);

  const Molecule& lead() const { return lead_; }
  const Molecule& current() const { return current_; }
  const Molecule& best() const { return best_; }
  double best_objective() const { return best_objective_; }
  double current_similarity() const { return current_similarity_; }
  int turn() const { return t_; }
  int horizon() const { return cfg_.horizon; }
  bool done() const { return done_; }
  bool succeeded() const { return succeeded_; }
  double last_reward() const { return last_reward_; }
  const EnvConfig& config() const { return cfg_; }
  const std::vector<Turn>& transcript() const { return transcript_; }
  const std::vector<oracle::PropertySpec>& specs() const { return ledger_->specs(); }
  // Every scored proposal that met the similarity gate, in turn order.
  const std::vector<Molecule>& scored() const { return scored_; }

  // Deterministic observation text for text-based policies.
  std::string render_observation() const;

 private:
  Molecule lead_;
  Molecule current_;
  Molecule best_;
  EnvConfig cfg_;
  oracle::OracleLedger* ledger_;
  double current_similarity_ = 1.0;
  double current_objective_ = 0.0;
  double best_objective_ = 0.0;
  int best_turn_ = 0;
  int t_ = 0;
  bool done_ = false;
  bool succeeded_ = false;
  double last_reward_ = 0.0;
  std::vector<Turn> transcript_;
  std::vector<Molecule> scored_;

  void finish_turn(Turn turn, StepResult& out);
};

// One JSON object per turn.
std::string turn_to_json(const Turn& t, std::span<const oracle::PropertySpec> specs);

}  // namespace leadopt::env

#endif  // LEADOPT_ENV_ENVIRONMENT_HPP_
