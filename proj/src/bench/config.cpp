// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "oracle/properties.hpp"

namespace leadopt::bench {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(ErrorCode::kConfigError, where() + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
            throw std::invalid_argument("expected a non-negative integer");
          }
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      fail(ErrorCode::kConfigError, key_path(key) + ": " + e.what());
    }
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (!has(key) || obj_.at(key).is_null()) return;
    T value{};
    read(key, value);
    out = value;
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    return Section(obj_.contains(key) ? obj_.at(key) : kEmpty, key_path(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  // Throws on keys that were never asked for.
  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) fail(ErrorCode::kConfigError, "unknown key '" + key_path(key) + "'");
    }
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

oracle::PropertySpec read_property(const json& item, const std::string& path) {
  if (item.is_string()) {
    try {
      return oracle::default_property_spec(item.get<std::string>());
    } catch (const Error& e) {
      fail(ErrorCode::kConfigError, path + ": " + e.what());
    }
  }
  Section s(item, path);
  std::string name;
  s.read("name", name);
  if (name.empty()) fail(ErrorCode::kConfigError, path + ".name is required");
  oracle::PropertySpec spec;
  try {
    spec = oracle::default_property_spec(name);
  } catch (const Error&) {
    spec.name = name;  // table-backed property; everything below is then required
    if (!item.contains("direction") || !item.contains("threshold") || !item.contains("delta")) {
      fail(ErrorCode::kConfigError, path + ": property '" + name +
                                        "' has no defaults; direction, threshold and delta are required");
    }
  }
  std::string direction(oracle::direction_name(spec.direction));
  s.read("direction", direction);
  spec.direction = oracle::direction_from_name(direction);
  s.read("weight", spec.weight);
  s.read("threshold", spec.single_threshold);
  s.read("delta", spec.delta_threshold);
  s.finish();
  if (!(spec.weight > 0.0)) fail(ErrorCode::kConfigError, path + ".weight must be > 0");
  return spec;
}

void read_task(Section s, TaskConfig& task) {
  if (!s.has("properties")) fail(ErrorCode::kConfigError, "task.properties is required");
  const json& props = s.raw("properties");
  if (!props.is_array() || props.empty()) {
    fail(ErrorCode::kConfigError, "task.properties must be a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < props.size(); ++i) {
    auto spec = read_property(props[i], "task.properties[" + std::to_string(i) + "]");
    if (!names.insert(spec.name).second) {
      fail(ErrorCode::kConfigError, "task.properties lists '" + spec.name + "' twice");
    }
    task.properties.push_back(std::move(spec));
  }
  std::string mode(env::task_mode_name(task.env.mode));
  s.read("mode", mode);
  task.env.mode = env::task_mode_from_name(mode);
  s.read("similarity", task.env.similarity_threshold);
  s.read("budget", task.budget);
  s.read("horizon", task.env.horizon);
  s.read("structural_guard", task.env.structural_guard);
  s.read("max_carbon_chain", task.env.max_carbon_chain);
  if (s.has("oracle_tables")) {
    Section tables = s.child("oracle_tables");
    for (const auto& spec : task.properties) tables.read(spec.name, task.oracle_tables[spec.name]);
    tables.finish();
    std::erase_if(task.oracle_tables, [](const auto& kv) { return kv.second.empty(); });
  }
  s.finish();
  if (task.env.similarity_threshold < 0.0 || task.env.similarity_threshold > 1.0) {
    fail(ErrorCode::kConfigError, "task.similarity must lie in [0, 1]");
  }
  if (task.budget < 1) fail(ErrorCode::kConfigError, "task.budget must be >= 1");
  if (task.env.horizon < 1) fail(ErrorCode::kConfigError, "task.horizon must be >= 1");
  for (const auto& spec : task.properties) {
    if (!oracle::is_builtin_property(spec.name) && !task.oracle_tables.count(spec.name)) {
      fail(ErrorCode::kConfigError, "property '" + spec.name + "' needs an entry in task.oracle_tables");
    }
  }
}

void read_leads(Section s, LeadsConfig& leads) {
  s.read("train", leads.train);
  s.read("test", leads.test);
  s.read("seed", leads.seed);
  s.read("train_file", leads.train_file);
  s.read("test_file", leads.test_file);
  s.read("logp_min", leads.band.logp_min);
  s.read("logp_max", leads.band.logp_max);
  s.read("min_heavy", leads.band.min_heavy);
  s.read("max_heavy", leads.band.max_heavy);
  s.read("max_edits", leads.band.max_edits);
  s.finish();
  if (leads.band.logp_min > leads.band.logp_max) fail(ErrorCode::kConfigError, "leads.logp_min > leads.logp_max");
  if (leads.band.min_heavy < 1 || leads.band.min_heavy > leads.band.max_heavy) {
    fail(ErrorCode::kConfigError, "leads heavy-atom band is empty");
  }
  if (leads.band.max_edits < 0) fail(ErrorCode::kConfigError, "leads.max_edits must be >= 0");
}

void read_policy(Section s, PolicyConfig& p) {
  s.read("beta", p.beta);
  s.read("temperature", p.temperature);
  s.read("max_candidates", p.max_candidates);
  s.read("checkpoint", p.checkpoint);
  s.finish();
  if (!(p.beta > 0.0)) fail(ErrorCode::kConfigError, "policy.beta must be > 0");
  if (!(p.temperature > 0.0)) fail(ErrorCode::kConfigError, "policy.temperature must be > 0");
  if (p.max_candidates < 2) fail(ErrorCode::kConfigError, "policy.max_candidates must be >= 2");
}

void read_train(Section s, pgpo::TrainConfig& t) {
  s.read("iterations", t.iterations);
  s.read("leads_per_iteration", t.leads_per_iteration);
  s.read("rollouts_per_lead", t.rollouts_per_lead);
  s.read("temperature", t.temperature);
  {
    Section f = s.child("filter");
    f.read("enabled", t.use_filter);
    f.read("variance_keep_ratio", t.filter.variance_keep_ratio);
    f.read("score_keep_ratio", t.filter.score_keep_ratio);
    f.finish();
  }
  {
    Section p = s.child("pgpo");
    auto& c = t.pgpo;
    p.read("clip_epsilon", c.clip_epsilon);
    p.read("discount", c.discount);
    p.read("gae_lambda", c.gae_lambda);
    p.read("pref_weight", c.pref_weight);
    p.read("max_pairs", c.max_pairs);
    p.read("pair_keep_ratio", c.pair_keep_ratio);
    p.read("lambda_weights", c.lambda_weights);
    p.read("learning_rate", c.learning_rate);
    p.read("minibatch_size", c.minibatch_size);
    p.read("epochs", c.epochs);
    p.read("max_grad_norm", c.max_grad_norm);
    p.read("adam_beta1", c.adam_beta1);
    p.read("adam_beta2", c.adam_beta2);
    p.read("adam_epsilon", c.adam_epsilon);
    p.finish();
  }
  s.finish();
  try {
    pgpo::validate(t);
  } catch (const Error& e) {
    fail(ErrorCode::kConfigError, std::string("train: ") + e.what());
  }
}

void read_inference(Section s, InferenceConfig& inf) {
  std::string method(inference_method_name(inf.method));
  s.read("method", method);
  if (method == "evolution") {
    inf.method = InferenceMethod::kEvolution;
  } else if (method == "rollouts") {
    inf.method = InferenceMethod::kRollouts;
  } else if (method == "ga") {
    inf.method = InferenceMethod::kGA;
  } else {
    fail(ErrorCode::kConfigError, "inference.method must be evolution, rollouts or ga, got '" + method + "'");
  }
  auto& e = inf.evolve;
  s.read("generations", e.generations);
  s.read("rollouts", e.rollouts);
  s.read("tau_base", e.tau_base);
  s.read("tau_step", e.tau_step);
  s.read("tau_max", e.tau_max);
  s.read("pool_capacity", e.pool_capacity);
  s.read("elite_similarity", e.elite_similarity);
  {
    Section g = s.child("ga");
    g.read("population", inf.ga.population);
    g.read("offspring", inf.ga.offspring);
    g.read("max_generations", inf.ga.max_generations);
    g.finish();
  }
  s.finish();
  inf.ga.elite_similarity = e.elite_similarity;
  if (inf.ga.population < 1 || inf.ga.offspring < 1 || inf.ga.max_generations < 1) {
    fail(ErrorCode::kConfigError, "inference.ga sizes must be >= 1");
  }
}

}  // namespace

std::string_view inference_method_name(InferenceMethod m) {
  switch (m) {
    case InferenceMethod::kEvolution: return "evolution";
    case InferenceMethod::kRollouts: return "rollouts";
    case InferenceMethod::kGA: return "ga";
  }
  return "?";
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  Section root(doc, "");
  int version = 0;
  root.read("version", version);
  if (version != kConfigVersion) {
    fail(ErrorCode::kConfigError, "config version must be " + std::to_string(kConfigVersion) + ", got " +
                                      std::to_string(version));
  }
  if (!root.has("task")) fail(ErrorCode::kConfigError, "task section is required");
  read_task(root.child("task"), cfg.task);
  read_leads(root.child("leads"), cfg.leads);
  read_policy(root.child("policy"), cfg.policy);
  read_train(root.child("train"), cfg.train);
  read_inference(root.child("inference"), cfg.inference);
  root.read("seed", cfg.seed);
  root.read("workers", cfg.workers);
  root.read("output", cfg.output);
  root.finish();
  if (cfg.workers < 1) fail(ErrorCode::kConfigError, "workers must be >= 1");

  cfg.inference.evolve.budget = cfg.task.budget;
  cfg.inference.evolve.horizon = cfg.task.env.horizon;
  try {
    evolve::validate(cfg.inference.evolve);
  } catch (const Error& e) {
    fail(ErrorCode::kConfigError, std::string("inference: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfigError, path + ": " + e.what());
  }
  return config_from_json(doc);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json props = ordered_json::array();
  for (const auto& p : cfg.task.properties) {
    props.push_back({{"name", p.name},
                     {"direction", oracle::direction_name(p.direction)},
                     {"weight", p.weight},
                     {"threshold", p.single_threshold},
                     {"delta", p.delta_threshold}});
  }
  ordered_json task = {{"properties", props},
                       {"mode", env::task_mode_name(cfg.task.env.mode)},
                       {"similarity", cfg.task.env.similarity_threshold},
                       {"budget", cfg.task.budget},
                       {"horizon", cfg.task.env.horizon},
                       {"structural_guard", cfg.task.env.structural_guard},
                       {"max_carbon_chain", cfg.task.env.max_carbon_chain}};
  if (!cfg.task.oracle_tables.empty()) {
    ordered_json tables = ordered_json::object();
    for (const auto& [k, v] : cfg.task.oracle_tables) tables[k] = v;
    task["oracle_tables"] = tables;
  }
  ordered_json leads = {{"train", cfg.leads.train},
                        {"test", cfg.leads.test},
                        {"logp_min", cfg.leads.band.logp_min},
                        {"logp_max", cfg.leads.band.logp_max},
                        {"min_heavy", cfg.leads.band.min_heavy},
                        {"max_heavy", cfg.leads.band.max_heavy},
                        {"max_edits", cfg.leads.band.max_edits}};
  if (cfg.leads.seed) leads["seed"] = *cfg.leads.seed;
  if (cfg.leads.train_file) leads["train_file"] = *cfg.leads.train_file;
  if (cfg.leads.test_file) leads["test_file"] = *cfg.leads.test_file;
  ordered_json policy = {{"beta", cfg.policy.beta},
                         {"temperature", cfg.policy.temperature},
                         {"max_candidates", cfg.policy.max_candidates}};
  if (cfg.policy.checkpoint) policy["checkpoint"] = *cfg.policy.checkpoint;
  const auto& c = cfg.train.pgpo;
  ordered_json train = {
      {"iterations", cfg.train.iterations},
      {"leads_per_iteration", cfg.train.leads_per_iteration},
      {"rollouts_per_lead", cfg.train.rollouts_per_lead},
      {"temperature", cfg.train.temperature},
      {"filter",
       {{"enabled", cfg.train.use_filter},
        {"variance_keep_ratio", cfg.train.filter.variance_keep_ratio},
        {"score_keep_ratio", cfg.train.filter.score_keep_ratio}}},
      {"pgpo",
       {{"clip_epsilon", c.clip_epsilon},
        {"discount", c.discount},
        {"gae_lambda", c.gae_lambda},
        {"pref_weight", c.pref_weight},
        {"max_pairs", c.max_pairs},
        {"pair_keep_ratio", c.pair_keep_ratio},
        {"lambda_weights", c.lambda_weights},
        {"learning_rate", c.learning_rate},
        {"minibatch_size", c.minibatch_size},
        {"epochs", c.epochs},
        {"max_grad_norm", c.max_grad_norm},
        {"adam_beta1", c.adam_beta1},
        {"adam_beta2", c.adam_beta2},
        {"adam_epsilon", c.adam_epsilon}}}};
  const auto& e = cfg.inference.evolve;
  ordered_json inference = {{"method", inference_method_name(cfg.inference.method)},
                            {"generations", e.generations},
                            {"rollouts", e.rollouts},
                            {"tau_base", e.tau_base},
                            {"tau_step", e.tau_step},
                            {"tau_max", e.tau_max},
                            {"pool_capacity", e.pool_capacity},
                            {"elite_similarity", e.elite_similarity},
                            {"ga",
                             {{"population", cfg.inference.ga.population},
                              {"offspring", cfg.inference.ga.offspring},
                              {"max_generations", cfg.inference.ga.max_generations}}}};
  return {{"version", kConfigVersion}, {"task", task},       {"leads", leads},
          {"policy", policy},          {"train", train},     {"inference", inference},
          {"seed", cfg.seed},          {"workers", cfg.workers}, {"output", cfg.output}};
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::kConfigError, "override '" + assignment + "' is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) fail(ErrorCode::kConfigError, "override key '" + path + "' has an empty segment");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) fail(ErrorCode::kConfigError, "override key '" + path + "' crosses a non-object");
    node = &(*node)[parts[i]];
  }
  *node = std::move(value);
}

std::shared_ptr<const oracle::Oracle> make_oracle(const TaskConfig& task) {
  auto o = std::make_shared<oracle::Oracle>(task.properties);
  for (const auto& [name, path] : task.oracle_tables) {
    o->bind(name, std::make_shared<oracle::TableOracle>(oracle::TableOracle::load(path)));
  }
  return o;
}

}  // namespace leadopt::bench
