// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bench/ga.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "evolve/evolve.hpp"

namespace leadopt::bench {

namespace {

constexpr std::uint64_t kTrainStream = 0x747261696eULL;
constexpr std::uint64_t kOptimizeStream = 0x6f7074ULL;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write '" + path + "'");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

OptimizationResult from_evolution(const evolve::EvolutionResult& run, const oracle::OracleLedger& ledger) {
  OptimizationResult r;
  r.lead = run.lead.canonical;
  r.before = run.lead.scores;
  r.after = run.lead.scores;
  r.calls_used = ledger.calls_used();
  r.cache_hits = ledger.cache_hits();
  if (run.best_success) {
    r.success = true;
    r.optimized = run.best_success->molecule.canonical;
    r.after = run.best_success->molecule.scores;
    r.similarity = run.best_success->similarity;
    r.success_call = run.first_success_call;
  }
  return r;
}

}  // namespace

LeadSplit resolve_leads(const ExperimentConfig& cfg, const policy::FragmentLibrary& library) {
  LeadSplit split;
  const bool need_generated = !cfg.leads.train_file || !cfg.leads.test_file;
  if (need_generated) {
    split = generate_leads(cfg.leads.band, cfg.leads.train, cfg.leads.test, cfg.leads.seed.value_or(cfg.seed),
                           library);
  }
  if (cfg.leads.train_file) split.train = read_leads(*cfg.leads.train_file);
  if (cfg.leads.test_file) split.test = read_leads(*cfg.leads.test_file);
  return split;
}

policy::PolicyParams initial_params(const ExperimentConfig& cfg, const policy::FragmentLibrary& library) {
  policy::PolicyParams p;
  if (cfg.policy.checkpoint) {
    p = policy::load_params(*cfg.policy.checkpoint);
  } else {
    p = policy::PolicyParams::zeros(policy::kNumFeatures, policy::num_action_classes(library.size()));
    p.beta = cfg.policy.beta;
    p.temperature = cfg.policy.temperature;
  }
  if (p.num_classes != policy::num_action_classes(library.size())) {
    fail(ErrorCode::kConfigError, "checkpoint has " + std::to_string(p.num_classes) +
                                      " action classes but the fragment library implies " +
                                      std::to_string(policy::num_action_classes(library.size())));
  }
  return p;
}

TrainOutput run_training(const ExperimentConfig& cfg, const std::vector<std::string>& leads,
                         const policy::FragmentLibrary& library, std::shared_ptr<const oracle::Oracle> oracle,
                         const pgpo::IterationCallback& on_iteration) {
  TrainOutput out;
  out.params = initial_params(cfg, library);
  if (cfg.train.iterations == 0) return out;
  if (leads.empty()) fail(ErrorCode::kConfigError, "training needs at least one lead");
  out.params = pgpo::train(out.params, leads, library, cfg.train, cfg.task.env, std::move(oracle),
                           derive_seed(cfg.seed, {kTrainStream}), cfg.workers,
                           [&](const pgpo::IterationLog& log) {
                             out.log.push_back(log);
                             if (on_iteration) on_iteration(log);
                           });
  return out;
}

OptimizationResult optimize_lead(const ExperimentConfig& cfg, const policy::PolicyParams& params,
                                 const std::string& lead, int index, const policy::FragmentLibrary& library,
                                 std::shared_ptr<const oracle::Oracle> oracle) {
  oracle::OracleLedger ledger(oracle, cfg.task.budget);
  const std::uint64_t seed = derive_seed(cfg.seed, {kOptimizeStream, static_cast<std::uint64_t>(index)});
  OptimizationResult r;
  try {
    const auto& inf = cfg.inference;
    if (inf.method == InferenceMethod::kGA) {
      r = from_evolution(ga_baseline(lead, inf.ga, cfg.task.env, ledger, library, seed), ledger);
    } else {
      policy::EditPolicy policy(std::make_shared<const policy::PolicyParams>(params), library,
                                static_cast<std::size_t>(cfg.policy.max_candidates));
      evolve::EvolveConfig ecfg = inf.evolve;
      if (inf.method == InferenceMethod::kRollouts) {
        // Same sampling effort, all of it from the lead at the base temperature.
        ecfg.rollouts = ecfg.rollouts * ecfg.generations;
        ecfg.generations = 1;
      }
      r = from_evolution(evolve::run_evolution(policy, lead, ecfg, cfg.task.env, ledger, seed), ledger);
    }
  } catch (const Error& e) {
    r = OptimizationResult{};
    r.lead = lead;
    r.calls_used = ledger.calls_used();
    r.cache_hits = ledger.cache_hits();
    r.error = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  r.index = index;
  return r;
}

std::vector<OptimizationResult> optimize_leads(const ExperimentConfig& cfg, const policy::PolicyParams& params,
                                               const std::vector<std::string>& leads,
                                               const policy::FragmentLibrary& library,
                                               std::shared_ptr<const oracle::Oracle> oracle) {
  std::vector<OptimizationResult> results(leads.size());
  parallel_for(leads.size(), cfg.workers, [&](std::size_t i) {
    results[i] = optimize_lead(cfg, params, leads[i], static_cast<int>(i), library, oracle);
  });
  return results;
}

std::string task_label(const TaskConfig& task) {
  std::string label;
  for (const auto& p : task.properties) {
    if (!label.empty()) label += '+';
    label += p.name;
  }
  if (task.env.mode == env::TaskMode::kMulti) label += "/multi";
  return label;
}

void write_results(const std::string& path, std::span<const OptimizationResult> results,
                   std::span<const oracle::PropertySpec> specs) {
  auto out = open_out(path);
  for (const auto& r : results) out << result_to_json(r, specs).dump() << '\n';
}

std::vector<OptimizationResult> read_results(const std::string& path, std::span<const oracle::PropertySpec> specs) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open results '" + path + "'");
  std::vector<OptimizationResult> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(result_from_json(nlohmann::json::parse(line), specs));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_metrics(const std::string& dir, const ExperimentConfig& cfg, const Metrics& metrics) {
  auto j = metrics_to_json(metrics);
  j["task"] = task_label(cfg.task);
  j["method"] = inference_method_name(cfg.inference.method);
  j["budget"] = cfg.task.budget;
  j["seed"] = cfg.seed;
  auto out = open_out(dir + "/metrics.json");
  out << j.dump(2) << '\n';

  auto csv = open_out(dir + "/summary.csv");
  csv << "task,method,leads,successes,success_rate,similarity,relative_improvement,oracle_calls,cache_hits\n";
  csv << task_label(cfg.task) << ',' << inference_method_name(cfg.inference.method) << ',' << metrics.count << ','
      << metrics.successes << ',' << fmt(metrics.success_rate) << ',' << fmt(metrics.similarity) << ','
      << fmt(metrics.relative_improvement) << ',' << metrics.oracle_calls << ',' << metrics.cache_hits << '\n';
}

std::string plot_data_csv(std::span<const OptimizationResult> results, long budget, long step) {
  std::string out = "oracle_calls,success_rate\n";
  for (const auto& [calls, rate] : success_curve(results, budget, step)) {
    out += std::to_string(calls) + ',' + fmt(rate) + '\n';
  }
  return out;
}

void write_checkpoint_and_log(const std::string& dir, const TrainOutput& out) {
  policy::save_params(out.params, dir + "/checkpoint.json");
  auto log = open_out(dir + "/train_log.jsonl");
  for (const auto& it : out.log) log << pgpo::iteration_to_json(it).dump() << '\n';
}

Metrics run_experiment(const ExperimentConfig& cfg) {
  const auto& library = policy::FragmentLibrary::builtin();
  auto oracle = make_oracle(cfg.task);
  const LeadSplit leads = resolve_leads(cfg, library);
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create '" + cfg.output + "': " + ec.message());

  {
    auto out = open_out(cfg.output + "/config.json");
    out << config_to_json(cfg).dump(2) << '\n';
  }
  const TrainOutput trained = run_training(cfg, leads.train, library, oracle);
  write_checkpoint_and_log(cfg.output, trained);

  const auto results = optimize_leads(cfg, trained.params, leads.test, library, oracle);
  write_results(cfg.output + "/results.jsonl", results, cfg.task.properties);
  const Metrics metrics = compute_metrics(results, cfg.task.properties);
  write_metrics(cfg.output, cfg, metrics);
  return metrics;
}

}  // namespace leadopt::bench
