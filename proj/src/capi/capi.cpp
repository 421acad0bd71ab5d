// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "leadopt/leadopt.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "bench/experiment.hpp"
#include "bench/selftest.hpp"
#include "chemgraph/fingerprint.hpp"
#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "oracle/properties.hpp"

struct leadopt_molecule {
  leadopt::chemgraph::MolecularGraph graph;
  std::string canonical;
  leadopt::chemgraph::Fingerprint fingerprint;
};

struct leadopt_config {
  nlohmann::json doc;  // kept so overrides re-validate the whole document
  leadopt::bench::ExperimentConfig cfg;
};

struct leadopt_policy {
  leadopt::policy::PolicyParams params;
};

namespace {

using leadopt::ErrorCode;

thread_local std::string g_last_error;

leadopt_status to_status(ErrorCode code) { return static_cast<leadopt_status>(static_cast<int>(code)); }

leadopt_status set_error(leadopt_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
leadopt_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    return fn();
  } catch (const leadopt::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(LEADOPT_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LEADOPT_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LEADOPT_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(LEADOPT_INTERNAL_ERROR, "unknown failure");
  }
}

leadopt_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || cap < s.size() + 1) {
    if (buf && cap > 0) buf[0] = '\0';
    return set_error(LEADOPT_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return LEADOPT_OK;
}

#define LEADOPT_REQUIRE(cond)                                                           \
  do {                                                                                  \
    if (!(cond)) return set_error(LEADOPT_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) leadopt::fail(ErrorCode::kIoError, "cannot create '" + dir + "': " + ec.message());
}

leadopt::bench::TrainOutput train_into(const leadopt_config* cfg, const std::string& dir, leadopt_log_fn log,
                                       void* user) {
  using namespace leadopt;
  const auto& library = policy::FragmentLibrary::builtin();
  const auto leads = bench::resolve_leads(cfg->cfg, library);
  make_dir(dir);
  auto out = bench::run_training(cfg->cfg, leads.train, library, bench::make_oracle(cfg->cfg.task),
                                 [&](const pgpo::IterationLog& it) {
                                   if (log) log(pgpo::iteration_to_json(it).dump().c_str(), user);
                                 });
  bench::write_checkpoint_and_log(dir, out);
  return out;
}

}  // namespace

extern "C" {

const char* leadopt_version(void) { return "0.1.0"; }

const char* leadopt_status_name(leadopt_status status) {
  switch (status) {
    case LEADOPT_OK: return "Ok";
    case LEADOPT_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case LEADOPT_INTERNAL_ERROR: return "InternalError";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(ErrorCode::kInvalidArgument)) {
    return leadopt::error_code_name(static_cast<ErrorCode>(code)).data();
  }
  return "Unknown";
}

const char* leadopt_last_error(void) { return g_last_error.c_str(); }

leadopt_status leadopt_molecule_parse(const char* smiles, leadopt_molecule** out) {
  LEADOPT_REQUIRE(smiles && out);
  return guarded([&] {
    auto mol = std::make_unique<leadopt_molecule>();
    mol->graph = leadopt::chemgraph::parse_smiles(smiles);
    mol->canonical = leadopt::chemgraph::canonicalize(mol->graph);
    mol->fingerprint = leadopt::chemgraph::morgan_fingerprint(mol->graph);
    *out = mol.release();
    return LEADOPT_OK;
  });
}

void leadopt_molecule_free(leadopt_molecule* mol) { delete mol; }

leadopt_status leadopt_molecule_canonical(const leadopt_molecule* mol, char* buf, size_t cap, size_t* needed) {
  LEADOPT_REQUIRE(mol);
  return guarded([&] { return copy_out(mol->canonical, buf, cap, needed); });
}

leadopt_status leadopt_molecule_similarity(const leadopt_molecule* a, const leadopt_molecule* b, double* out) {
  LEADOPT_REQUIRE(a && b && out);
  return guarded([&] {
    *out = leadopt::chemgraph::tanimoto(a->fingerprint, b->fingerprint);
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_molecule_property(const leadopt_molecule* mol, const char* name, double* out) {
  LEADOPT_REQUIRE(mol && name && out);
  return guarded([&] {
    *out = leadopt::oracle::builtin_property(name, mol->graph);
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_config_parse(const char* json_text, leadopt_config** out) {
  LEADOPT_REQUIRE(json_text && out);
  return guarded([&] {
    auto cfg = std::make_unique<leadopt_config>();
    try {
      cfg->doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      leadopt::fail(ErrorCode::kConfigError, e.what());
    }
    cfg->cfg = leadopt::bench::config_from_json(cfg->doc);
    *out = cfg.release();
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_config_load(const char* path, leadopt_config** out) {
  LEADOPT_REQUIRE(path && out);
  return guarded([&] {
    std::ifstream in(path);
    if (!in) leadopt::fail(ErrorCode::kIoError, std::string("cannot open config '") + path + "'");
    auto cfg = std::make_unique<leadopt_config>();
    try {
      cfg->doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      leadopt::fail(ErrorCode::kConfigError, std::string(path) + ": " + e.what());
    }
    cfg->cfg = leadopt::bench::config_from_json(cfg->doc);
    *out = cfg.release();
    return LEADOPT_OK;
  });
}

void leadopt_config_free(leadopt_config* cfg) { delete cfg; }

leadopt_status leadopt_config_set(leadopt_config* cfg, const char* assignment) {
  LEADOPT_REQUIRE(cfg && assignment);
  return guarded([&] {
    nlohmann::json doc = cfg->doc;
    leadopt::bench::apply_override(doc, assignment);
    auto parsed = leadopt::bench::config_from_json(doc);
    cfg->doc = std::move(doc);
    cfg->cfg = std::move(parsed);
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_config_to_json(const leadopt_config* cfg, char* buf, size_t cap, size_t* needed) {
  LEADOPT_REQUIRE(cfg);
  return guarded([&] { return copy_out(leadopt::bench::config_to_json(cfg->cfg).dump(2), buf, cap, needed); });
}

leadopt_status leadopt_policy_init(const leadopt_config* cfg, leadopt_policy** out) {
  LEADOPT_REQUIRE(cfg && out);
  return guarded([&] {
    auto p = std::make_unique<leadopt_policy>();
    p->params = leadopt::bench::initial_params(cfg->cfg, leadopt::policy::FragmentLibrary::builtin());
    *out = p.release();
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_policy_load(const char* path, leadopt_policy** out) {
  LEADOPT_REQUIRE(path && out);
  return guarded([&] {
    auto p = std::make_unique<leadopt_policy>();
    p->params = leadopt::policy::load_params(path);
    *out = p.release();
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_policy_save(const leadopt_policy* policy, const char* path) {
  LEADOPT_REQUIRE(policy && path);
  return guarded([&] {
    leadopt::policy::save_params(policy->params, path);
    return LEADOPT_OK;
  });
}

void leadopt_policy_free(leadopt_policy* policy) { delete policy; }

leadopt_status leadopt_train(const leadopt_config* cfg, const char* output_dir, leadopt_log_fn log, void* user,
                             leadopt_policy** out) {
  LEADOPT_REQUIRE(cfg && output_dir);
  return guarded([&] {
    auto trained = train_into(cfg, output_dir, log, user);
    if (out) *out = new leadopt_policy{std::move(trained.params)};
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_optimize(const leadopt_config* cfg, const leadopt_policy* policy, const char* leads_path,
                                const char* output_dir) {
  LEADOPT_REQUIRE(cfg && output_dir);
  LEADOPT_REQUIRE(policy || cfg->cfg.inference.method == leadopt::bench::InferenceMethod::kGA);
  return guarded([&] {
    using namespace leadopt;
    const auto& library = policy::FragmentLibrary::builtin();
    auto oracle = bench::make_oracle(cfg->cfg.task);
    const std::vector<std::string> leads =
        leads_path ? bench::read_leads(leads_path) : bench::resolve_leads(cfg->cfg, library).test;
    const policy::PolicyParams params = policy ? policy->params : bench::initial_params(cfg->cfg, library);
    make_dir(output_dir);
    const auto results = bench::optimize_leads(cfg->cfg, params, leads, library, oracle);
    const std::string dir = output_dir;
    bench::write_results(dir + "/results.jsonl", results, cfg->cfg.task.properties);
    bench::write_metrics(dir, cfg->cfg, bench::compute_metrics(results, cfg->cfg.task.properties));
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_evaluate(const leadopt_config* cfg, const char* results_path, const char* output_dir,
                                char* buf, size_t cap, size_t* needed) {
  LEADOPT_REQUIRE(cfg && results_path);
  return guarded([&] {
    using namespace leadopt;
    const auto results = bench::read_results(results_path, cfg->cfg.task.properties);
    const auto metrics = bench::compute_metrics(results, cfg->cfg.task.properties);
    if (output_dir) {
      make_dir(output_dir);
      bench::write_metrics(output_dir, cfg->cfg, metrics);
    }
    if (!buf && !needed) return LEADOPT_OK;
    return copy_out(bench::metrics_to_json(metrics).dump(2), buf, cap, needed);
  });
}

leadopt_status leadopt_plot_data(const leadopt_config* cfg, const char* results_path, long step,
                                 const char* csv_path) {
  LEADOPT_REQUIRE(cfg && results_path && csv_path);
  return guarded([&] {
    using namespace leadopt;
    const auto results = bench::read_results(results_path, cfg->cfg.task.properties);
    const std::string csv = bench::plot_data_csv(results, cfg->cfg.task.budget, step);
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, std::string("cannot write '") + csv_path + "'");
    out << csv;
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_run(const leadopt_config* cfg, const char* output_dir, leadopt_log_fn log, void* user) {
  LEADOPT_REQUIRE(cfg);
  return guarded([&] {
    using namespace leadopt;
    const std::string dir = output_dir ? output_dir : cfg->cfg.output;
    make_dir(dir);
    {
      std::ofstream out(dir + "/config.json", std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorCode::kIoError, "cannot write '" + dir + "/config.json'");
      out << bench::config_to_json(cfg->cfg).dump(2) << '\n';
    }
    const auto trained = train_into(cfg, dir, log, user);
    const leadopt_policy policy{trained.params};
    const leadopt_status s = leadopt_optimize(cfg, &policy, nullptr, dir.c_str());
    if (s != LEADOPT_OK) throw Error(static_cast<ErrorCode>(s), leadopt_last_error());
    return LEADOPT_OK;
  });
}

leadopt_status leadopt_selftest(leadopt_log_fn log, void* user, int* failures) {
  LEADOPT_REQUIRE(failures);
  return guarded([&] {
    int failed = 0;
    leadopt::bench::run_selftest([&](const leadopt::bench::CheckResult& r) {
      if (!r.passed) ++failed;
      if (log) {
        nlohmann::ordered_json j = {{"check", r.name}, {"passed", r.passed}};
        if (!r.detail.empty()) j["detail"] = r.detail;
        log(j.dump().c_str(), user);
      }
    });
    *failures = failed;
    return LEADOPT_OK;
  });
}

}  // extern "C"
