// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "env/environment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"

namespace leadopt::env {

using chemgraph::MolecularGraph;
using oracle::PropertySpec;

namespace {

std::string fmt3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string signed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.3f", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string scores_line(std::span<const PropertySpec> specs, std::span<const double> scores) {
  std::string out;
  for (std::size_t i = 0; i < specs.size() && i < scores.size(); ++i) {
    if (i > 0) out += ", ";
    out += specs[i].name + ": " + fmt3(scores[i]);
  }
  return out;
}

}  // namespace

std::string_view task_mode_name(TaskMode m) { return m == TaskMode::kSingle ? "single" : "multi"; }

TaskMode task_mode_from_name(std::string_view name) {
  if (name == "single") return TaskMode::kSingle;
  if (name == "multi") return TaskMode::kMulti;
  fail(ErrorCode::kConfigError, "task mode must be single or multi, got '" + std::string(name) + "'");
}

Molecule make_molecule(std::string_view smiles, oracle::OracleLedger& ledger) {
  return make_molecule(chemgraph::parse_smiles(smiles), ledger);
}

Molecule make_molecule(MolecularGraph graph, oracle::OracleLedger& ledger) {
  Molecule m;
  m.canonical = chemgraph::canonicalize(graph);
  m.fingerprint = chemgraph::morgan_fingerprint(graph);
  m.scores = ledger.query(graph, m.canonical);
  m.graph = std::move(graph);
  return m;
}

double weighted_objective(std::span<const PropertySpec> specs, std::span<const double> scores) {
  if (specs.size() != scores.size()) fail(ErrorCode::kLengthMismatch, "score vector does not match property list");
  double j = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) j += specs[i].weight * specs[i].sign() * scores[i];
  return j;
}

SuccessCheck check_success(const EnvConfig& cfg, std::span<const PropertySpec> specs,
                           std::span<const double> scores, std::span<const double> lead_scores,
                           double similarity) {
  SuccessCheck out;
  out.similarity_ok = similarity >= cfg.similarity_threshold;
  bool all = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    bool ok;
    if (cfg.mode == TaskMode::kSingle) {
      ok = s.direction == oracle::Direction::kMaximize ? scores[i] >= s.single_threshold
                                                       : scores[i] <= s.single_threshold;
    } else {
      ok = s.sign() * (scores[i] - lead_scores[i]) >= s.delta_threshold;
    }
    out.per_property.push_back(ok);
    all = all && ok;
  }
  out.overall = all && out.similarity_ok;
  return out;
}

int longest_carbon_chain(const MolecularGraph& m) {
  // The non-ring carbon subgraph is a forest; its longest path is the
  // largest tree diameter, found by two BFS sweeps per component.
  const int n = static_cast<int>(m.num_atoms());
  auto eligible = [&](int i) {
    const auto& a = m.atom(i);
    return a.element == chemgraph::Element::C && !a.in_ring;
  };
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> queue;
  auto bfs = [&](int src, std::vector<int>& visited_out) {
    for (int v : visited_out) dist[static_cast<std::size_t>(v)] = -1;
    visited_out.clear();
    queue.assign(1, src);
    dist[static_cast<std::size_t>(src)] = 0;
    visited_out.push_back(src);
    int far = src;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int u = queue[q];
      if (dist[static_cast<std::size_t>(u)] > dist[static_cast<std::size_t>(far)]) far = u;
      for (const auto& nb : m.neighbors(u)) {
        if (!eligible(nb.atom) || dist[static_cast<std::size_t>(nb.atom)] >= 0) continue;
        dist[static_cast<std::size_t>(nb.atom)] = dist[static_cast<std::size_t>(u)] + 1;
        visited_out.push_back(nb.atom);
        queue.push_back(nb.atom);
      }
    }
    return far;
  };
  int best = 0;
  std::vector<int> visited;
  for (int i = 0; i < n; ++i) {
    if (!eligible(i) || seen[static_cast<std::size_t>(i)]) continue;
    const int a = bfs(i, visited);
    for (int v : visited) seen[static_cast<std::size_t>(v)] = 1;
    const int b = bfs(a, visited);
    best = std::max(best, dist[static_cast<std::size_t>(b)] + 1);
  }
  return best;
}

std::optional<GuardViolation> structural_guard(const MolecularGraph& m, int max_chain) {
  const int len = longest_carbon_chain(m);
  if (len <= max_chain) return std::nullopt;
  return GuardViolation{len, "Carbon chain too long: " + std::to_string(len) + " atoms (limit ≤ " +
                                 std::to_string(max_chain) + ")"};
}

ExtractedAction parse_action(std::string_view text) {
  ExtractedAction out;
  out.done = text.find("[DONE]") != std::string_view::npos;
  static constexpr std::string_view kOpen = "<answer>";
  static constexpr std::string_view kClose = "</answer>";
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    const std::size_t body = open + kOpen.size();
    const std::size_t close = text.find(kClose, body);
    if (close == std::string_view::npos) break;
    out.answer = std::string(trim(text.substr(body, close - body)));
    pos = close + kClose.size();
  }
  return out;
}

std::string extract_answer(std::string_view text) {
  auto a = parse_action(text);
  if (!a.answer) fail(ErrorCode::kNoAnswerTag, "no <answer>...</answer> span in action");
  return *a.answer;
}

std::string_view reward_case_name(RewardCase c) {
  switch (c) {
    case RewardCase::kDone: return "done";
    case RewardCase::kNoAnswer: return "no_answer";
    case RewardCase::kInvalid: return "invalid";
    case RewardCase::kGuard: return "guard";
    case RewardCase::kIdentical: return "identical";
    case RewardCase::kSimilarity: return "similarity";
    case RewardCase::kDegradation: return "degradation";
    case RewardCase::kImprovement: return "improvement";
    case RewardCase::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

Episode::Episode(const Molecule& lead, const Molecule& start, const EnvConfig& cfg,
                 oracle::OracleLedger& ledger)
    : lead_(lead), current_(start), best_(start), cfg_(cfg), ledger_(&ledger) {
  if (cfg_.horizon < 1) fail(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  current_similarity_ = chemgraph::tanimoto(lead_.fingerprint, current_.fingerprint);
  current_objective_ = weighted_objective(specs(), current_.scores);
  best_objective_ = current_objective_;
}

Episode Episode::reset(std::string_view lead_smiles, const EnvConfig& cfg, oracle::OracleLedger& ledger) {
  Molecule lead = make_molecule(lead_smiles, ledger);
  return Episode(lead, lead, cfg, ledger);
}

StepResult Episode::step(std::string_view action) {
  if (done_ || t_ >= cfg_.horizon) fail(ErrorCode::kInvalidArgument, "step on a finished episode");
  Turn turn;
  turn.index = t_ + 1;
  turn.action = std::string(action);
  StepResult out;

  const ExtractedAction parsed = parse_action(action);
  if (parsed.done) {
    turn.reward_case = RewardCase::kDone;
    turn.reward = 0.0;
    turn.feedback = "Agent signalled [DONE].";
    out.done = true;
    finish_turn(std::move(turn), out);
    return out;
  }
  if (!parsed.answer) {
    turn.reward_case = RewardCase::kNoAnswer;
    turn.reward = cfg_.invalid_reward;
    turn.feedback = "No <answer> tag found. Wrap the proposed SMILES in <answer></answer>.";
    finish_turn(std::move(turn), out);
    return out;
  }
  turn.smiles = *parsed.answer;

  MolecularGraph graph;
  try {
    graph = chemgraph::parse_smiles(*parsed.answer);
  } catch (const Error& e) {
    turn.reward_case = RewardCase::kInvalid;
    turn.reward = cfg_.invalid_reward;
    turn.feedback = std::string("Invalid SMILES (") + std::string(error_code_name(e.code())) + "): " + e.what() +
                    ". Please propose a valid molecule.";
    finish_turn(std::move(turn), out);
    return out;
  }
  if (cfg_.structural_guard) {
    if (auto v = structural_guard(graph, cfg_.max_carbon_chain)) {
      turn.reward_case = RewardCase::kGuard;
      turn.reward = cfg_.invalid_reward;
      turn.feedback = v->message;
      finish_turn(std::move(turn), out);
      return out;
    }
  }
  std::string canonical = chemgraph::canonicalize(graph);
  turn.canonical = canonical;
  if (canonical == current_.canonical) {
    turn.reward_case = RewardCase::kIdentical;
    turn.reward = cfg_.identical_reward;
    turn.feedback =
        "No modification detected. Your proposed SMILES matches the current molecule. "
        "Please propose a different modification.";
    finish_turn(std::move(turn), out);
    return out;
  }
  auto fp = chemgraph::morgan_fingerprint(graph);
  const double sim = chemgraph::tanimoto(lead_.fingerprint, fp);
  turn.similarity = sim;
  if (sim < cfg_.similarity_threshold) {
    turn.reward_case = RewardCase::kSimilarity;
    turn.reward = -cfg_.similarity_penalty * (cfg_.similarity_threshold - sim);
    turn.feedback = "Similarity too low: " + fmt3(sim) + " < required " + fmt3(cfg_.similarity_threshold) +
                    ". Consider smaller, more conservative changes.";
    finish_turn(std::move(turn), out);
    return out;
  }

  std::vector<double> scores;
  try {
    scores = ledger_->query(graph, canonical);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBudgetExhausted) throw;
    turn.reward_case = RewardCase::kBudgetExhausted;
    turn.reward = 0.0;
    turn.feedback = "Oracle budget exhausted.";
    out.done = true;
    finish_turn(std::move(turn), out);
    return out;
  }
  const double objective = weighted_objective(specs(), scores);
  const double delta = objective - current_objective_;
  turn.delta = delta;
  turn.scores = scores;
  std::string feedback;
  if (delta > 0.0) {
    turn.reward_case = RewardCase::kImprovement;
    turn.reward = cfg_.improvement_scale * std::abs(delta);
  } else {
    turn.reward_case = RewardCase::kDegradation;
    turn.reward = delta == 0.0 ? 0.0 : -std::abs(delta);
  }

  Molecule proposal{std::move(graph), std::move(canonical), std::move(fp), scores};
  for (std::size_t i = 0; i < specs().size(); ++i) {
    if (i > 0) feedback += ", ";
    feedback += specs()[i].name + ": " + fmt3(scores[i]) + " (change: " + signed3(scores[i] - current_.scores[i]) + ")";
  }
  feedback += ". Similarity to Original: " + fmt3(sim) + " (required >= " + fmt3(cfg_.similarity_threshold) + ").";
  const bool new_best = objective > best_objective_;
  if (turn.reward_case == RewardCase::kImprovement) {
    feedback += new_best ? " Great job! New best score achieved! Keep refining." : " Score improved. Keep refining.";
  } else {
    feedback += " Score decreased. Valid modification, but negatively impacted property. Consider alternative strategies.";
  }
  current_ = proposal;
  current_similarity_ = sim;
  current_objective_ = objective;
  scored_.push_back(proposal);
  if (new_best) {
    best_ = std::move(proposal);
    best_objective_ = objective;
    best_turn_ = turn.index;
  }
  const auto success = check_success(cfg_, specs(), scores, lead_.scores, sim);
  if (success.overall) {
    turn.success = true;
    succeeded_ = true;
    out.done = true;
    feedback += " All targets achieved!";
  }
  turn.feedback = std::move(feedback);
  finish_turn(std::move(turn), out);
  return out;
}

void Episode::finish_turn(Turn turn, StepResult& out) {
  if (turn.reward < 0.0 && best_.canonical != current_.canonical && best_objective_ > current_objective_) {
    current_ = best_;
    current_objective_ = best_objective_;
    current_similarity_ = chemgraph::tanimoto(lead_.fingerprint, current_.fingerprint);
    turn.rolled_back = true;
    turn.feedback += " Environment reverted to best molecule (step " + std::to_string(best_turn_) + ").";
  }
  ++t_;
  if (t_ >= cfg_.horizon) out.done = true;
  done_ = out.done;
  last_reward_ = turn.reward;
  out.reward = turn.reward;
  out.feedback = turn.feedback;
  transcript_.push_back(std::move(turn));
}

std::string Episode::render_observation() const {
  std::string s;
  s += "Original Molecule: " + lead_.canonical + "\n";
  s += "Original properties: " + scores_line(specs(), lead_.scores) + "\n";
  if (!transcript_.empty()) {
    s += "Step " + std::to_string(t_) + " of " + std::to_string(cfg_.horizon) + "\n";
    s += transcript_.back().feedback + "\n";
  }
  s += "Current Molecule: " + current_.canonical + "\n";
  s += "Current properties: " + scores_line(specs(), current_.scores) + "\n";
  s += "Similarity to Original: " + fmt3(current_similarity_) + " (required >= " +
       fmt3(cfg_.similarity_threshold) + ")\n";
  s += "You have " + std::to_string(cfg_.horizon - t_) + " actions left.\n";
  return s;
}

std::string turn_to_json(const Turn& t, std::span<const PropertySpec> specs) {
  nlohmann::ordered_json j;
  j["turn"] = t.index;
  j["action"] = t.action;
  j["smiles"] = t.smiles ? nlohmann::ordered_json(*t.smiles) : nlohmann::ordered_json(nullptr);
  j["canonical"] = t.canonical ? nlohmann::ordered_json(*t.canonical) : nlohmann::ordered_json(nullptr);
  j["case"] = reward_case_name(t.reward_case);
  j["reward"] = t.reward;
  j["similarity"] = t.similarity ? nlohmann::ordered_json(*t.similarity) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json scores = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < t.scores.size() && i < specs.size(); ++i) scores[specs[i].name] = t.scores[i];
  j["scores"] = scores;
  j["delta"] = t.delta;
  j["success"] = t.success;
  j["rolled_back"] = t.rolled_back;
  j["feedback"] = t.feedback;
  return j.dump();
}

}  // namespace leadopt::env
