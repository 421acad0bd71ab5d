// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "bench/config.hpp"
#include "bench/experiment.hpp"
#include "bench/ga.hpp"
#include "bench/leads.hpp"
#include "bench/metrics.hpp"
#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "metrics_fixture.hpp"

using namespace leadopt;
using namespace leadopt::bench;

namespace {

using testing::logp_sa_specs;
using testing::six_results;

OptimizationResult made(bool success, double sim, std::vector<double> before, std::vector<double> after) {
  return testing::made_result(success, sim, std::move(before), std::move(after));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("leadopt_test_bench_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

nlohmann::json tiny_doc() {
  return {{"version", 1},
          {"task", {{"properties", {"logp_proxy"}}, {"budget", 30}}},
          {"leads", {{"train", 6}, {"test", 4}, {"logp_min", -6.0}, {"logp_max", -2.0}}},
          {"train", {{"iterations", 2}, {"leads_per_iteration", 3}, {"rollouts_per_lead", 4},
                     {"pgpo", {{"learning_rate", 0.01}, {"minibatch_size", 4}}}}},
          {"inference", {{"generations", 2}, {"rollouts", 4}}},
          {"seed", 5}};
}

}  // namespace

TEST_CASE("success rate and similarity examples") {
  std::vector<OptimizationResult> four = {made(true, 0.5, {1}, {2}), made(true, 0.6, {1}, {2}),
                                          made(false, 0, {1}, {}), made(false, 0, {1}, {})};
  CHECK(success_rate(four) == 50.0);
  CHECK(avg_similarity(four) == doctest::Approx(0.775).epsilon(1e-15));
  std::vector<OptimizationResult> fails(3, made(false, 0, {1}, {}));
  CHECK(success_rate(fails) == 0.0);
  CHECK(avg_similarity(fails) == 1.0);
  CHECK(avg_similarity(std::vector{made(true, 0.42, {1}, {2})}) == 0.42);

  std::vector<OptimizationResult> many(200, made(false, 0, {1}, {}));
  for (int i = 0; i < 182; ++i) many[static_cast<std::size_t>(i)] = made(true, 0.5, {1}, {2});
  CHECK(success_rate(many) == 91.0);

  CHECK_THROWS_AS(success_rate(std::vector<OptimizationResult>{}), Error);
  CHECK_THROWS_AS(avg_similarity(std::vector<OptimizationResult>{}), Error);
}

TEST_CASE("relative improvement examples") {
  const std::vector<oracle::PropertySpec> plogp{oracle::default_property_spec("plogP")};
  const std::vector<oracle::PropertySpec> sa{oracle::default_property_spec("SA")};
  CHECK(relative_improvement(std::vector{made(true, 0.5, {-2.0}, {-1.0})}, plogp).value == 0.5);
  CHECK(relative_improvement(std::vector{made(true, 0.5, {4.0}, {3.0})}, sa).value == 0.25);
  CHECK(relative_improvement(std::vector{made(false, 0.5, {4.0}, {3.0})}, sa).value == 0.0);

  // Zero baseline: the logP term is skipped, the SA term alone remains.
  const auto zero = relative_improvement(std::vector{made(true, 0.5, {0.0, 4.0}, {1.0, 3.0})}, logp_sa_specs());
  CHECK(zero.value == 0.25);
  CHECK(zero.skipped_terms == 1);
}

TEST_CASE("six-result fixture") {
  const auto rs = six_results();
  const auto specs = logp_sa_specs();
  const Metrics m = compute_metrics(rs, specs);
  CHECK(m.count == 6);
  CHECK(m.successes == 4);
  CHECK(std::abs(m.success_rate - testing::kSixSuccessRate) < 1e-12);
  CHECK(std::abs(m.similarity - testing::kSixSimilarity) < 1e-12);
  CHECK(std::abs(m.relative_improvement - testing::kSixRelativeImprovement) < 1e-12);
}

TEST_CASE("metrics are permutation invariant and survive serialization") {
  auto rs = six_results();
  const auto specs = logp_sa_specs();
  const Metrics m = compute_metrics(rs, specs);
  std::mt19937 gen(3);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(rs.begin(), rs.end(), gen);
    const Metrics p = compute_metrics(rs, specs);
    CHECK(std::abs(p.similarity - m.similarity) < 1e-12);
    CHECK(std::abs(p.relative_improvement - m.relative_improvement) < 1e-12);
    CHECK(p.success_rate == m.success_rate);
  }
  const double integral = m.success_rate * m.count / 100.0;
  CHECK(std::abs(integral - std::round(integral)) < 1e-9);

  const auto dir = scratch_dir("serialize");
  std::filesystem::create_directories(dir);
  write_results(dir + "/r.jsonl", rs, specs);
  const auto back = read_results(dir + "/r.jsonl", specs);
  REQUIRE(back.size() == rs.size());
  const Metrics again = compute_metrics(back, specs);
  CHECK(metrics_to_json(again).dump() == metrics_to_json(compute_metrics(rs, specs)).dump());
}

TEST_CASE("success curve") {
  auto rs = six_results();
  rs[0].success_call = 5;
  rs[1].success_call = 40;
  rs[3].success_call = 40;
  rs[5].success_call = 100;
  const auto curve = success_curve(rs, 100, 25);
  REQUIRE(curve.size() == 5);
  CHECK(curve[0].second == 0.0);
  CHECK(curve[1].second == doctest::Approx(100.0 / 6.0));
  CHECK(curve[2].second == doctest::Approx(300.0 / 6.0));
  CHECK(curve[4].first == 100);
  CHECK(curve[4].second == doctest::Approx(400.0 / 6.0));
}

TEST_CASE("lead generator") {
  const auto& lib = policy::FragmentLibrary::builtin();
  LeadSpec spec;
  spec.logp_min = -5.0;
  spec.logp_max = -3.0;
  const auto a = generate_leads(spec, 20, 10, 11, lib);
  const auto b = generate_leads(spec, 20, 10, 11, lib);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  REQUIRE(a.train.size() == 20);
  REQUIRE(a.test.size() == 10);
  std::set<std::string> all(a.train.begin(), a.train.end());
  for (const auto& t : a.test) CHECK(all.insert(t).second);
  for (const auto& s : all) {
    const auto m = chemgraph::parse_smiles(s);
    CHECK(chemgraph::canonicalize(m) == s);
    CHECK(oracle::logp_proxy(m) >= -5.0);
    CHECK(oracle::logp_proxy(m) <= -3.0);
  }
  spec.logp_min = 50.0;
  spec.logp_max = 60.0;
  CHECK_THROWS_AS(generate_leads(spec, 2, 2, 1, lib), Error);
}

TEST_CASE("leads file") {
  const auto dir = scratch_dir("leads");
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir + "/ok.smi") << "# leads\nCCO\n\n  c1ccccc1O  phenol\n";
    std::ofstream(dir + "/bad.smi") << "CCO\nC1CC\n";
  }
  CHECK(read_leads(dir + "/ok.smi") == std::vector<std::string>{"CCO", "c1ccccc1O"});
  try {
    read_leads(dir + "/bad.smi");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_leads(dir + "/missing.smi"), Error);
}

TEST_CASE("GA baseline") {
  auto heavy = std::make_shared<const oracle::Oracle>(
      std::vector<oracle::PropertySpec>{oracle::default_property_spec("heavyatoms")});
  const auto& lib = policy::FragmentLibrary::builtin();
  const env::EnvConfig env_cfg;

  SUBCASE("budget of one returns the lead") {
    oracle::OracleLedger ledger(heavy, 1);
    const auto r = ga_baseline("CCO", {}, env_cfg, ledger, lib, 1);
    REQUIRE(r.pool.size() == 1);
    CHECK(r.pool.entries()[0].molecule.canonical == r.lead.canonical);
    CHECK(ledger.calls_used() == 1);
  }
  SUBCASE("deterministic") {
    oracle::OracleLedger l1(heavy, 60), l2(heavy, 60);
    const auto a = ga_baseline("CC(=O)Nc1ccc(O)cc1", {}, env_cfg, l1, lib, 9);
    const auto b = ga_baseline("CC(=O)Nc1ccc(O)cc1", {}, env_cfg, l2, lib, 9);
    CHECK(l1.evaluation_order() == l2.evaluation_order());
    CHECK(pool_to_json(a.pool).dump() == pool_to_json(b.pool).dump());
  }
  SUBCASE("improves heavy-atom count on most leads") {
    LeadSpec wide;
    wide.logp_min = -10.0;
    wide.logp_max = 10.0;
    const auto leads = generate_leads(wide, 0, 50, 4, lib).test;
    int improved = 0;
    for (std::size_t i = 0; i < leads.size(); ++i) {
      oracle::OracleLedger ledger(heavy, 500);
      const auto r = ga_baseline(leads[i], {}, env_cfg, ledger, lib, i);
      CHECK(ledger.calls_used() <= 500);
      if (r.pool.best_fitness() > 0.0) ++improved;
    }
    CHECK(improved >= 45);
  }
}

TEST_CASE("config parsing") {
  const auto cfg = config_from_json(tiny_doc());
  CHECK(cfg.task.properties.size() == 1);
  CHECK(cfg.task.properties[0].single_threshold == 2.0);
  CHECK(cfg.task.env.similarity_threshold == 0.4);
  CHECK(cfg.inference.evolve.budget == 30);
  CHECK(cfg.train.pgpo.pref_weight == 0.3);
  CHECK(cfg.train.rollouts_per_lead == 4);

  // Resolved config parses back to itself.
  const auto dumped = config_to_json(cfg);
  CHECK(config_to_json(config_from_json(nlohmann::json::parse(dumped.dump()))).dump() == dumped.dump());

  auto expect_config_error = [](nlohmann::json doc, const std::string& needle) {
    try {
      config_from_json(doc);
      FAIL("expected ConfigError mentioning " << needle);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  for (const char* path : {"/extra", "/task/extra", "/train/pgpo/extra", "/train/filter/extra", "/inference/ga/extra",
                           "/leads/extra", "/policy/extra"}) {
    auto doc = tiny_doc();
    doc[nlohmann::json::json_pointer(path)] = 1;
    expect_config_error(doc, "extra");
  }
  auto doc = tiny_doc();
  doc["version"] = 2;
  expect_config_error(doc, "version");
  doc = tiny_doc();
  doc.erase("task");
  expect_config_error(doc, "task");
  doc = tiny_doc();
  doc["task"]["properties"] = {"no_such_property"};
  expect_config_error(doc, "no_such_property");
  doc = tiny_doc();
  doc["task"]["budget"] = "lots";
  expect_config_error(doc, "task.budget");
  doc = tiny_doc();
  doc["inference"]["method"] = "beam";
  expect_config_error(doc, "beam");
  doc = tiny_doc();
  doc["train"]["pgpo"]["clip_epsilon"] = -1.0;
  expect_config_error(doc, "clip");

  doc = tiny_doc();
  apply_override(doc, "train.pgpo.pref_weight=0");
  apply_override(doc, "inference.method=rollouts");
  apply_override(doc, "output=\"x y\"");
  const auto over = config_from_json(doc);
  CHECK(over.train.pgpo.pref_weight == 0.0);
  CHECK(over.inference.method == InferenceMethod::kRollouts);
  CHECK(over.output == "x y");
  CHECK_THROWS_AS(apply_override(doc, "novalue"), Error);
}

TEST_CASE("experiment outputs are reproducible across runs and worker counts") {
  auto run = [](int workers, const std::string& name) {
    auto doc = tiny_doc();
    doc["workers"] = workers;
    doc["output"] = scratch_dir(name);
    run_experiment(config_from_json(doc));
    return doc["output"].get<std::string>();
  };
  const auto a = run(1, "det_a");
  const auto b = run(1, "det_b");
  const auto c = run(4, "det_c");
  for (const char* file : {"/results.jsonl", "/metrics.json", "/summary.csv", "/checkpoint.json", "/train_log.jsonl"}) {
    const auto text = slurp(a + file);
    CHECK_MESSAGE(!text.empty(), file);
    CHECK_MESSAGE(text == slurp(b + file), file);
    CHECK_MESSAGE(text == slurp(c + file), file);
  }
}

TEST_CASE("zero training iterations keeps the initial policy") {
  auto doc = tiny_doc();
  doc["train"]["iterations"] = 0;
  const auto cfg = config_from_json(doc);
  const auto& lib = policy::FragmentLibrary::builtin();
  const auto out = run_training(cfg, {}, lib, make_oracle(cfg.task));
  CHECK(out.log.empty());
  CHECK(out.params.theta == initial_params(cfg, lib).theta);
}

TEST_CASE("optimize records failures instead of throwing") {
  auto doc = tiny_doc();
  const auto cfg = config_from_json(doc);
  const auto& lib = policy::FragmentLibrary::builtin();
  const auto r = optimize_lead(cfg, initial_params(cfg, lib), "C1CC", 3, lib, make_oracle(cfg.task));
  CHECK_FALSE(r.success);
  CHECK(r.index == 3);
  REQUIRE(r.error.has_value());
  CHECK(r.error->find("UnclosedRing") != std::string::npos);

  const auto dir = scratch_dir("failed");
  std::filesystem::create_directories(dir);
  write_results(dir + "/r.jsonl", std::vector{r}, cfg.task.properties);
  const auto back = read_results(dir + "/r.jsonl", cfg.task.properties);
  REQUIRE(back.size() == 1);
  CHECK(back[0].error == r.error);
  CHECK(compute_metrics(back, cfg.task.properties).success_rate == 0.0);
}
