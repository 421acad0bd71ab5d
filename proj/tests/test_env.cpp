// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "common/error.hpp"
#include "env/environment.hpp"
#include "reward_fixture.hpp"

using namespace leadopt;
using namespace leadopt::env;
using testing::answer;

namespace {

std::shared_ptr<oracle::Oracle> heavy_oracle() {
  return std::make_shared<oracle::Oracle>(
      std::vector<oracle::PropertySpec>{oracle::default_property_spec("heavyatoms")});
}

}  // namespace

TEST_CASE("answer extraction") {
  CHECK(extract_answer("<think>x</think><answer>CCO</answer>") == "CCO");
  CHECK(extract_answer("<answer>A</answer><answer>B</answer>") == "B");
  CHECK(extract_answer("<answer>  CCO \n</answer>") == "CCO");
  CHECK(extract_answer("<answer>A</answer><answer>B") == "A");
  try {
    extract_answer("no tags here");
    FAIL("expected NoAnswerTag");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoAnswerTag);
  }
  CHECK(parse_action("<answer>C</answer> [DONE]").done);
  CHECK(!parse_action("<answer>C</answer>").done);
}

TEST_CASE("reset") {
  oracle::OracleLedger ledger(heavy_oracle(), 10);
  auto ep = Episode::reset("CCO", EnvConfig{}, ledger);
  CHECK(ep.turn() == 0);
  CHECK(ep.current_similarity() == 1.0);
  CHECK(ep.current().canonical == ep.lead().canonical);
  CHECK(ledger.calls_used() == 1);
  CHECK_THROWS_AS(Episode::reset("C(", EnvConfig{}, ledger), Error);

  oracle::OracleLedger empty(heavy_oracle(), 0);
  try {
    Episode::reset("CCO", EnvConfig{}, empty);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExhausted);
  }
}

TEST_CASE("reward fixture rows") {
  const auto cases = testing::reward_fixture();
  CHECK(cases.size() >= 20);
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto turn = testing::run_reward_case(c);
    CHECK(turn.reward_case == c.expected_case);
    CHECK(std::abs(turn.reward - c.expected_reward) <= 1e-12);
  }
}

TEST_CASE("worked reward examples") {
  // sim = 0.3 with gamma 0.4 gives -0.2.
  EnvConfig cfg;
  CHECK(-cfg.similarity_penalty * (cfg.similarity_threshold - 0.3) == doctest::Approx(-0.2));
  // A weighted improvement of +0.1 pays 0.5.
  const std::string lead = "OCCc1ccccc1";
  oracle::OracleLedger ledger(testing::fixture_oracle(false), -1);
  auto ep = Episode(make_molecule(lead, ledger), make_molecule(lead, ledger), cfg, ledger);
  auto r = ep.step(answer("COCCc1ccccc1"));  // activity 0.50 -> 0.55
  CHECK(r.reward == doctest::Approx(0.25).epsilon(1e-12));
  auto r2 = ep.step(answer("OCCCc1ccccc1"));  // 0.55 -> 0.65
  CHECK(std::abs(r2.reward - 0.5) <= 1e-12);
  CHECK(!r2.done);
}

TEST_CASE("invalid proposals do not end the episode") {
  oracle::OracleLedger ledger(heavy_oracle(), 10);
  auto ep = Episode::reset("CCO", EnvConfig{}, ledger);
  const auto r = ep.step(answer("C(("));
  CHECK(r.reward == -0.5);
  CHECK(!r.done);
  CHECK(ep.turn() == 1);
}

TEST_CASE("success criteria") {
  EnvConfig single;
  const std::vector<oracle::PropertySpec> qed{oracle::default_property_spec("QED")};
  const std::vector<double> lead_q{0.7};
  CHECK(check_success(single, qed, std::vector<double>{0.92}, lead_q, 0.5).overall);
  CHECK(!check_success(single, qed, std::vector<double>{0.92}, lead_q, 0.39).overall);
  CHECK(!check_success(single, qed, std::vector<double>{0.89}, lead_q, 0.9).overall);
  const std::vector<oracle::PropertySpec> sa{oracle::default_property_spec("SA")};
  CHECK(check_success(single, sa, std::vector<double>{2.4}, std::vector<double>{3.0}, 0.5).overall);
  CHECK(!check_success(single, sa, std::vector<double>{2.6}, std::vector<double>{3.0}, 0.5).overall);

  EnvConfig multi;
  multi.mode = TaskMode::kMulti;
  const std::vector<oracle::PropertySpec> qp{oracle::default_property_spec("QED"),
                                             oracle::default_property_spec("plogP")};
  const std::vector<double> base{0.6, 1.0};
  auto res = check_success(multi, qp, std::vector<double>{0.75, 1.5}, base, 0.6);
  CHECK(res.per_property[0]);
  CHECK(!res.per_property[1]);
  CHECK(!res.overall);
  CHECK(check_success(multi, qp, std::vector<double>{0.75, 2.0}, base, 0.6).overall);
  CHECK(!check_success(multi, qp, std::vector<double>{0.75, 2.0}, base, 0.39).overall);
  const std::vector<oracle::PropertySpec> sa_multi{oracle::default_property_spec("SA")};
  CHECK(check_success(multi, sa_multi, std::vector<double>{2.5}, std::vector<double>{3.0}, 0.5).overall);
}

TEST_CASE("structural guard") {
  using chemgraph::parse_smiles;
  CHECK(structural_guard(parse_smiles("CCCCCCCCCCC"), 10).has_value());
  CHECK(structural_guard(parse_smiles("CCCCCCCCCCC"), 10)->message == "Carbon chain too long: 11 atoms (limit ≤ 10)");
  CHECK(!structural_guard(parse_smiles("CCCCCCCCCC"), 10).has_value());
  CHECK(!structural_guard(parse_smiles("c1ccccc1"), 10).has_value());
  CHECK(longest_carbon_chain(parse_smiles("CCC(CCCC)CC")) == 7);
  CHECK(longest_carbon_chain(parse_smiles("CCCCCOCCCCC")) == 5);
  CHECK(longest_carbon_chain(parse_smiles("CCCCc1ccccc1CCCC")) == 4);

  oracle::OracleLedger ledger(heavy_oracle(), 10);
  auto ep = Episode::reset("CCCCCCCCCC", EnvConfig{}, ledger);
  const auto r = ep.step(answer("CCCCCCCCCCC"));
  CHECK(r.reward == -0.5);
  CHECK(ep.transcript().back().reward_case == RewardCase::kGuard);
  CHECK(ledger.calls_used() == 1);
}

TEST_CASE("done sentinel, horizon and budget end the episode") {
  oracle::OracleLedger ledger(heavy_oracle(), 100);
  auto ep = Episode::reset("c1ccccc1O", EnvConfig{}, ledger);
  auto r = ep.step("<think>fine</think>[DONE]");
  CHECK(r.done);
  CHECK(r.reward == 0.0);
  CHECK_THROWS_AS(ep.step(answer("C")), Error);

  EnvConfig cfg;
  cfg.horizon = 2;
  auto ep2 = Episode::reset("c1ccccc1O", cfg, ledger);
  CHECK(!ep2.step(answer("C(")).done);
  CHECK(ep2.step(answer("C(")).done);

  oracle::OracleLedger tight(heavy_oracle(), 1);
  auto ep3 = Episode::reset("OCCc1ccccc1", EnvConfig{}, tight);
  r = ep3.step(answer("OCCCc1ccccc1"));
  CHECK(r.done);
  CHECK(r.reward == 0.0);
  CHECK(ep3.transcript().back().reward_case == RewardCase::kBudgetExhausted);
}

TEST_CASE("similarity violations are not charged") {
  oracle::OracleLedger ledger(heavy_oracle(), 10);
  auto ep = Episode::reset("OCCc1ccccc1", EnvConfig{}, ledger);
  ep.step(answer("CCCC"));
  CHECK(ledger.calls_used() == 1);
}

TEST_CASE("degradation triggers rollback to the best molecule") {
  const std::string lead = "OCCc1ccccc1";
  oracle::OracleLedger ledger(testing::fixture_oracle(false), -1);
  auto ep = Episode::reset(lead, EnvConfig{}, ledger);
  ep.step(answer("Cc1ccccc1CCO"));  // 0.50 -> 0.70, new best
  const std::string best = ep.best().canonical;
  ep.step(answer("OCCc1ccccc1"));   // back to the lead: 0.70 -> 0.50
  const auto& t = ep.transcript().back();
  CHECK(t.reward_case == RewardCase::kDegradation);
  CHECK(t.reward == doctest::Approx(-0.2));
  CHECK(t.rolled_back);
  CHECK(ep.current().canonical == best);
  CHECK(t.feedback.find("Environment reverted to best molecule (step 1)") != std::string::npos);
  // Deltas are measured from the post-rollback molecule.
  ep.step(answer("OCCCc1ccccc1"));  // 0.70 -> 0.65
  CHECK(ep.transcript().back().reward == doctest::Approx(-0.05));
}

TEST_CASE("replaying a transcript reproduces rewards and best score is monotone") {
  std::mt19937_64 gen(3);
  std::vector<std::string> pool;
  for (const auto& [s, v] : testing::fixture_scores()) pool.push_back(s);
  pool.push_back("C(");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> actions;
    for (int k = 0; k < 5; ++k) actions.push_back(answer(pool[gen() % pool.size()]));
    auto run = [&] {
      oracle::OracleLedger ledger(testing::fixture_oracle(trial % 2 == 1), -1);
      EnvConfig cfg;
      cfg.mode = trial % 2 == 1 ? TaskMode::kMulti : TaskMode::kSingle;
      auto ep = Episode::reset("OCCc1ccccc1", cfg, ledger);
      std::vector<double> rewards;
      double best = ep.best_objective();
      for (const auto& a : actions) {
        if (ep.done()) break;
        rewards.push_back(ep.step(a).reward);
        CHECK(ep.best_objective() >= best);
        best = ep.best_objective();
        CHECK(ep.turn() <= ep.horizon());
      }
      return rewards;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("transcript and observation rendering") {
  oracle::OracleLedger ledger(heavy_oracle(), 10);
  auto ep = Episode::reset("OCCc1ccccc1", EnvConfig{}, ledger);
  ep.step(answer("OCCCc1ccccc1"));
  const auto line = turn_to_json(ep.transcript().back(), ep.specs());
  CHECK(line.find("\"case\":\"improvement\"") != std::string::npos);
  CHECK(line.find("\"heavyatoms\":10.0") != std::string::npos);
  const auto obs = ep.render_observation();
  CHECK(obs.find("Original Molecule: c1ccc(cc1)CCO") != std::string::npos);
  CHECK(obs.find("You have 4 actions left.") != std::string::npos);
  CHECK(obs == ep.render_observation());
}
