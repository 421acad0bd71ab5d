// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_ORACLE_PROPERTIES_HPP_
#define LEADOPT_ORACLE_PROPERTIES_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemgraph/graph.hpp"

namespace leadopt::oracle {

enum class Direction { kMaximize, kMinimize };

std::string_view direction_name(Direction d);
Direction direction_from_name(std::string_view name);

// One optimization target. Thresholds are stated in the natural units of the
// property: for minimized properties the single-task test is F <= threshold
// and the multi-task test is -(F' - F) >= delta.
struct PropertySpec {
  std::string name;
  Direction direction = Direction::kMaximize;
  double weight = 1.0;
  double single_threshold = 0.0;
  double delta_threshold = 0.0;

  double sign() const { return direction == Direction::kMaximize ? 1.0 : -1.0; }
};

// Defaults for the builtin properties (and the standard named properties, for
// table-backed oracles). Throws UnknownProperty for anything else.
PropertySpec default_property_spec(std::string_view name);

bool is_builtin_property(std::string_view name);
const std::vector<std::string>& builtin_property_names();

// Deterministic structural proxies. Throws UnknownProperty.
double builtin_property(std::string_view name, const chemgraph::MolecularGraph& m);

double logp_proxy(const chemgraph::MolecularGraph& m);
double sa_proxy(const chemgraph::MolecularGraph& m);
double qed_proxy(const chemgraph::MolecularGraph& m);
double molecular_weight(const chemgraph::MolecularGraph& m);

struct LogpContribution {
  std::string_view type;
  double value;
};

// The per-atom-environment table behind logp_proxy, in file order.
std::span<const LogpContribution> logp_contribution_table();

// Environment type of one atom (a key into the contribution table).
std::string_view logp_atom_type(const chemgraph::MolecularGraph& m, int atom);

}  // namespace leadopt::oracle

#endif  // LEADOPT_ORACLE_PROPERTIES_HPP_
