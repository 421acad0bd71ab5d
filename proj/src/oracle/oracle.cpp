// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracle/oracle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"

namespace leadopt::oracle {

BuiltinSource::BuiltinSource(std::string name) : name_(std::move(name)) {
  if (!is_builtin_property(name_)) {
    fail(ErrorCode::kUnknownProperty, "unknown property '" + name_ + "'");
  }
}

double BuiltinSource::score(const chemgraph::MolecularGraph& m, const std::string&) const {
  return builtin_property(name_, m);
}

TableOracle TableOracle::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open table oracle '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

TableOracle TableOracle::parse(std::string_view text, const std::string& origin) {
  TableOracle t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::kParseError, origin + ":" + std::to_string(line_no) + ": " + why);
    };
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) bad("expected 'SMILES<TAB>score'");
    const std::string_view smiles = line.substr(0, tab);
    const std::string_view value = line.substr(tab + 1);
    double score = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), score);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad("bad score '" + std::string(value) + "'");
    if (!std::isfinite(score)) bad("non-finite score");
    std::string key;
    try {
      key = chemgraph::canonicalize(chemgraph::parse_smiles(smiles));
    } catch (const Error& e) {
      bad(std::string("bad SMILES: ") + e.what());
    }
    t.table_[key] = score;
  }
  return t;
}

double TableOracle::score(const chemgraph::MolecularGraph&, const std::string& canonical) const {
  auto it = table_.find(canonical);
  if (it == table_.end()) fail(ErrorCode::kMissingKey, "no table score for '" + canonical + "'");
  return it->second;
}

Oracle::Oracle(std::vector<PropertySpec> specs) : specs_(std::move(specs)) {
  sources_.resize(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (is_builtin_property(specs_[i].name)) sources_[i] = std::make_shared<BuiltinSource>(specs_[i].name);
  }
}

void Oracle::bind(const std::string& property, std::shared_ptr<const PropertySource> source) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == property) {
      sources_[i] = std::move(source);
      return;
    }
  }
  fail(ErrorCode::kUnknownProperty, "oracle has no property '" + property + "'");
}

std::vector<double> Oracle::evaluate(const chemgraph::MolecularGraph& m, const std::string& canonical) const {
  std::vector<double> scores(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (!sources_[i]) fail(ErrorCode::kUnknownProperty, "no source bound for '" + specs_[i].name + "'");
    scores[i] = sources_[i]->score(m, canonical);
    if (!std::isfinite(scores[i])) {
      fail(ErrorCode::kNonFiniteScore, specs_[i].name + " returned a non-finite score for '" + canonical + "'");
    }
  }
  return scores;
}

OracleLedger::OracleLedger(std::shared_ptr<const Oracle> oracle, std::int64_t budget)
    : oracle_(std::move(oracle)), budget_(budget) {}

std::vector<double> OracleLedger::query(const chemgraph::MolecularGraph& m) {
  return query(m, chemgraph::canonicalize(m));
}

std::vector<double> OracleLedger::query(const chemgraph::MolecularGraph& m, const std::string& canonical) {
  std::unique_lock lock(mutex_);
  if (auto it = cache_.find(canonical); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  if (budget_ >= 0 && static_cast<std::int64_t>(order_.size()) >= budget_) {
    fail(ErrorCode::kBudgetExhausted, "oracle budget of " + std::to_string(budget_) + " calls exhausted");
  }
  // Evaluation happens under the lock so that charge and insert are one step.
  auto scores = oracle_->evaluate(m, canonical);
  cache_.emplace(canonical, scores);
  order_.push_back(canonical);
  return scores;
}

std::optional<std::vector<double>> OracleLedger::cached(const std::string& canonical) const {
  std::shared_lock lock(mutex_);
  if (auto it = cache_.find(canonical); it != cache_.end()) return it->second;
  return std::nullopt;
}

bool OracleLedger::exhausted() const {
  std::shared_lock lock(mutex_);
  return budget_ >= 0 && static_cast<std::int64_t>(order_.size()) >= budget_;
}

std::int64_t OracleLedger::calls_used() const {
  std::shared_lock lock(mutex_);
  return static_cast<std::int64_t>(order_.size());
}

std::int64_t OracleLedger::cache_hits() const {
  std::shared_lock lock(mutex_);
  return hits_;
}

std::vector<std::string> OracleLedger::evaluation_order() const {
  std::shared_lock lock(mutex_);
  return order_;
}

}  // namespace leadopt::oracle
