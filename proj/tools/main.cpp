// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leadopt/leadopt.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ConfigDeleter {
  void operator()(leadopt_config* c) const { leadopt_config_free(c); }
};
struct PolicyDeleter {
  void operator()(leadopt_policy* p) const { leadopt_policy_free(p); }
};
using ConfigPtr = std::unique_ptr<leadopt_config, ConfigDeleter>;
using PolicyPtr = std::unique_ptr<leadopt_policy, PolicyDeleter>;

// Thrown to unwind with an exit code after the message was printed.
struct ExitError {
  int code;
};

int exit_code_for(leadopt_status s) {
  return (s == LEADOPT_CONFIG_ERROR) ? kExitConfig : kExitRuntime;
}

void check(leadopt_status s, const std::string& what) {
  if (s == LEADOPT_OK) return;
  std::cerr << "leadopt: " << what << ": " << leadopt_status_name(s) << ": " << leadopt_last_error() << "\n";
  throw ExitError{exit_code_for(s)};
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  long long seed = -1;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "override a config value, e.g. --set train.iterations=10");
  cmd->add_option("--seed", o.seed, "override the root seed");
  cmd->add_option("-j,--workers", o.workers, "override the worker count");
}

ConfigPtr load(const CommonOptions& o) {
  leadopt_config* raw = nullptr;
  check(leadopt_config_load(o.config.c_str(), &raw), "loading " + o.config);
  ConfigPtr cfg(raw);
  std::vector<std::string> all = o.overrides;
  if (o.seed >= 0) all.push_back("seed=" + std::to_string(o.seed));
  if (o.workers > 0) all.push_back("workers=" + std::to_string(o.workers));
  for (const auto& a : all) check(leadopt_config_set(cfg.get(), a.c_str()), "applying '" + a + "'");
  return cfg;
}

void print_line(const char* line, void* user) {
  if (*static_cast<bool*>(user)) std::cerr << line << "\n";
}

void print_metrics_file(const std::string& dir) {
  std::FILE* f = std::fopen((dir + "/summary.csv").c_str(), "r");
  if (!f) return;
  char buf[512];
  while (std::fgets(buf, sizeof buf, f)) std::cout << buf;
  std::fclose(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-turn molecular lead optimization: train, optimize and evaluate edit policies."};
  app.require_subcommand(1);
  app.set_version_flag("--version", leadopt_version());
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print per-iteration logs to stderr");

  CommonOptions train_opts, opt_opts, eval_opts, plot_opts, run_opts;
  std::string train_out, opt_out, opt_checkpoint, opt_leads, eval_results, eval_out, plot_results, plot_out;
  std::string run_out;
  long plot_step = 10;

  auto* train = app.add_subcommand("train", "train a policy and write checkpoint.json");
  add_common(train, train_opts);
  train->add_option("-o,--output", train_out, "output directory")->required();

  auto* optimize = app.add_subcommand("optimize", "optimize leads with a trained policy");
  add_common(optimize, opt_opts);
  optimize->add_option("--checkpoint", opt_checkpoint, "policy checkpoint (default: config policy)")
      ->check(CLI::ExistingFile);
  optimize->add_option("--leads", opt_leads, "leads file, one SMILES per line (default: held-out leads)")
      ->check(CLI::ExistingFile);
  optimize->add_option("-o,--output", opt_out, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "recompute metrics from a results file");
  add_common(eval, eval_opts);
  eval->add_option("-r,--results", eval_results, "results.jsonl")->required()->check(CLI::ExistingFile);
  eval->add_option("-o,--output", eval_out, "also write metrics.json and summary.csv here");

  auto* plot = app.add_subcommand("plot-data", "success rate against oracle calls as CSV");
  add_common(plot, plot_opts);
  plot->add_option("-r,--results", plot_results, "results.jsonl")->required()->check(CLI::ExistingFile);
  plot->add_option("--step", plot_step, "oracle-call spacing of the curve")->check(CLI::PositiveNumber);
  plot->add_option("-o,--output", plot_out, "CSV path")->required();

  auto* run = app.add_subcommand("run", "train then optimize the held-out leads");
  add_common(run, run_opts);
  run->add_option("-o,--output", run_out, "output directory (default: config output)");

  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) {
      auto cfg = load(train_opts);
      leadopt_policy* raw = nullptr;
      check(leadopt_train(cfg.get(), train_out.c_str(), print_line, &verbose, &raw), "train");
      PolicyPtr policy(raw);
      std::cout << train_out << "/checkpoint.json\n";
    } else if (*optimize) {
      auto cfg = load(opt_opts);
      PolicyPtr policy;
      leadopt_policy* raw = nullptr;
      if (!opt_checkpoint.empty()) {
        check(leadopt_policy_load(opt_checkpoint.c_str(), &raw), "loading " + opt_checkpoint);
      } else {
        check(leadopt_policy_init(cfg.get(), &raw), "policy");
      }
      policy.reset(raw);
      check(leadopt_optimize(cfg.get(), policy.get(), opt_leads.empty() ? nullptr : opt_leads.c_str(),
                             opt_out.c_str()),
            "optimize");
      print_metrics_file(opt_out);
    } else if (*eval) {
      auto cfg = load(eval_opts);
      std::size_t needed = 0;
      const char* out_dir = eval_out.empty() ? nullptr : eval_out.c_str();
      const leadopt_status probe = leadopt_evaluate(cfg.get(), eval_results.c_str(), out_dir, nullptr, 0, &needed);
      if (probe != LEADOPT_BUFFER_TOO_SMALL) check(probe, "eval");
      std::string text(needed, '\0');
      check(leadopt_evaluate(cfg.get(), eval_results.c_str(), nullptr, text.data(), text.size(), &needed), "eval");
      text.resize(needed - 1);
      std::cout << text << "\n";
    } else if (*plot) {
      auto cfg = load(plot_opts);
      check(leadopt_plot_data(cfg.get(), plot_results.c_str(), plot_step, plot_out.c_str()), "plot-data");
    } else if (*run) {
      auto cfg = load(run_opts);
      check(leadopt_run(cfg.get(), run_out.empty() ? nullptr : run_out.c_str(), print_line, &verbose), "run");
      if (!run_out.empty()) print_metrics_file(run_out);
    } else if (*selftest) {
      int failures = 0;
      bool always = true;
      check(leadopt_selftest([](const char* line, void*) { std::cout << line << "\n"; }, &always, &failures),
            "selftest");
      if (failures > 0) {
        std::cerr << "leadopt: " << failures << " selftest check(s) failed\n";
        return kExitRuntime;
      }
    }
  } catch (const ExitError& e) {
    return e.code;
  }
  return 0;
}
