// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_ORACLE_ORACLE_HPP_
#define LEADOPT_ORACLE_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "chemgraph/graph.hpp"
#include "oracle/properties.hpp"

namespace leadopt::oracle {

// Scores one property. `canonical` is the canonical SMILES of m.
class PropertySource {
 public:
  virtual ~PropertySource() = default;
  virtual double score(const chemgraph::MolecularGraph& m, const std::string& canonical) const = 0;
};

class BuiltinSource final : public PropertySource {
 public:
  explicit BuiltinSource(std::string name);
  double score(const chemgraph::MolecularGraph& m, const std::string& canonical) const override;

 private:
  std::string name_;
};

class FunctionSource final : public PropertySource {
 public:
  using Fn = std::function<double(const chemgraph::MolecularGraph&, const std::string&)>;
  explicit FunctionSource(Fn fn) : fn_(std::move(fn)) {}
  double score(const chemgraph::MolecularGraph& m, const std::string& canonical) const override {
    return fn_(m, canonical);
  }

 private:
  Fn fn_;
};

// Lookup oracle over "SMILES<TAB>score" lines. Keys are canonicalized on load.
class TableOracle final : public PropertySource {
 public:
  static TableOracle load(const std::string& path);
  static TableOracle parse(std::string_view text, const std::string& origin = "<memory>");

  double score(const chemgraph::MolecularGraph& m, const std::string& canonical) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, double> table_;
};

// A fixed list of properties, each bound to a source. Unbound builtin names
// use the builtin proxies.
class Oracle {
 public:
  explicit Oracle(std::vector<PropertySpec> specs);

  void bind(const std::string& property, std::shared_ptr<const PropertySource> source);

  const std::vector<PropertySpec>& specs() const { return specs_; }

  // Scores every property. Throws NonFiniteScore, UnknownProperty, MissingKey.
  std::vector<double> evaluate(const chemgraph::MolecularGraph& m, const std::string& canonical) const;

 private:
  std::vector<PropertySpec> specs_;
  std::vector<std::shared_ptr<const PropertySource>> sources_;
};

// Budgeted, cached access to an Oracle. One budget unit buys the full score
// vector of one distinct canonical molecule. A negative budget means
// unmetered (calls are still counted).
class OracleLedger {
 public:
  OracleLedger(std::shared_ptr<const Oracle> oracle, std::int64_t budget);

  std::vector<double> query(const chemgraph::MolecularGraph& m);
  std::vector<double> query(const chemgraph::MolecularGraph& m, const std::string& canonical);

  std::optional<std::vector<double>> cached(const std::string& canonical) const;
  bool exhausted() const;

  const Oracle& oracle() const { return *oracle_; }
  const std::vector<PropertySpec>& specs() const { return oracle_->specs(); }
  std::int64_t budget() const { return budget_; }
  bool metered() const { return budget_ >= 0; }
  std::int64_t calls_used() const;
  std::int64_t cache_hits() const;
  // Canonical SMILES in the order they were charged.
  std::vector<std::string> evaluation_order() const;

 private:
  std::shared_ptr<const Oracle> oracle_;
  std::int64_t budget_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::vector<double>> cache_;
  std::vector<std::string> order_;
  std::int64_t hits_ = 0;
};

}  // namespace leadopt::oracle

#endif  // LEADOPT_ORACLE_ORACLE_HPP_
