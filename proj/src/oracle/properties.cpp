// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracle/properties.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "common/error.hpp"

namespace leadopt::oracle {

using chemgraph::Element;
using chemgraph::MolecularGraph;

namespace {

// Mirrors data/logp_proxy_contrib.tsv; a unit test keeps the two in sync.
constexpr std::array<LogpContribution, 24> kLogpTable{{
    {"C_sp3", 0.15},
    {"C_hetero", -0.20},
    {"C_carbonyl", -0.15},
    {"C_sp", 0.20},
    {"C_ar", 0.30},
    {"C_ar_hetero", 0.10},
    {"N_h", -1.00},
    {"N_noh", -0.50},
    {"N_ar", -0.50},
    {"O_h", -0.70},
    {"O_ether", -0.30},
    {"O_carbonyl", -0.40},
    {"O_ar", 0.00},
    {"S", 0.60},
    {"S_ar", 0.50},
    {"S_oxidized", -0.50},
    {"P", -0.30},
    {"B", -0.20},
    {"F", 0.15},
    {"Cl", 0.65},
    {"Br", 0.85},
    {"I", 1.05},
    {"H_on_C", 0.12},
    {"charged", -1.00},
}};

std::size_t table_index(std::string_view type) {
  for (std::size_t i = 0; i < kLogpTable.size(); ++i) {
    if (kLogpTable[i].type == type) return i;
  }
  return 0;
}

constexpr double kHydrogenMass = 1.008;

double gaussian_desirability(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

const std::vector<std::string> kBuiltinNames{"logp_proxy", "sa_proxy", "qed_proxy", "ringcount",
                                             "heavyatoms"};

}  // namespace

std::string_view direction_name(Direction d) {
  return d == Direction::kMaximize ? "maximize" : "minimize";
}

Direction direction_from_name(std::string_view name) {
  if (name == "maximize") return Direction::kMaximize;
  if (name == "minimize") return Direction::kMinimize;
  fail(ErrorCode::kConfigError, "direction must be maximize or minimize, got '" + std::string(name) + "'");
}

PropertySpec default_property_spec(std::string_view name) {
  PropertySpec s;
  s.name = std::string(name);
  // Single-task threshold, multi-task delta and weight per property. The
  // proxies inherit the thresholds of the property they stand in for.
  if (name == "qed_proxy" || name == "QED") {
    s.single_threshold = 0.9;
    s.delta_threshold = 0.1;
    s.weight = 10.0;
  } else if (name == "logp_proxy" || name == "plogP" || name == "logP") {
    s.single_threshold = 2.0;
    s.delta_threshold = 1.0;
    s.weight = 1.0;
  } else if (name == "sa_proxy" || name == "SA") {
    s.direction = Direction::kMinimize;
    s.single_threshold = 2.5;
    s.delta_threshold = 0.5;
    s.weight = 2.0;
  } else if (name == "JNK3") {
    s.single_threshold = 0.4;
    s.delta_threshold = 0.1;
    s.weight = 12.0;
  } else if (name == "DRD2") {
    s.single_threshold = 0.8;
    s.delta_threshold = 0.5;
    s.weight = 4.0;
  } else if (name == "heavyatoms") {
    s.single_threshold = 30.0;
    s.delta_threshold = 3.0;
  } else if (name == "ringcount") {
    s.single_threshold = 3.0;
    s.delta_threshold = 1.0;
  } else {
    fail(ErrorCode::kUnknownProperty, "no default spec for property '" + std::string(name) + "'");
  }
  return s;
}

bool is_builtin_property(std::string_view name) {
  return std::find(kBuiltinNames.begin(), kBuiltinNames.end(), name) != kBuiltinNames.end();
}

const std::vector<std::string>& builtin_property_names() { return kBuiltinNames; }

std::span<const LogpContribution> logp_contribution_table() { return kLogpTable; }

std::string_view logp_atom_type(const MolecularGraph& m, int i) {
  const auto& a = m.atom(i);
  bool hetero_neighbor = false;
  bool double_to_hetero = false;
  bool triple = false;
  bool double_to_o = false;
  for (const auto& nb : m.neighbors(i)) {
    const auto& b = m.bond(nb.bond);
    const Element e = m.atom(nb.atom).element;
    const bool hetero = e != Element::C && e != Element::H;
    if (hetero) hetero_neighbor = true;
    if (!b.aromatic && b.kekule_order == 2 && hetero) double_to_hetero = true;
    if (!b.aromatic && b.kekule_order == 2 && e == Element::O) double_to_o = true;
    if (b.kekule_order == 3) triple = true;
  }
  switch (a.element) {
    case Element::C:
      if (a.aromatic) return hetero_neighbor ? "C_ar_hetero" : "C_ar";
      if (triple) return "C_sp";
      if (double_to_hetero) return "C_carbonyl";
      return hetero_neighbor ? "C_hetero" : "C_sp3";
    case Element::N:
      if (a.aromatic) return "N_ar";
      return a.hydrogens > 0 ? "N_h" : "N_noh";
    case Element::O:
      if (a.aromatic) return "O_ar";
      if (a.hydrogens > 0) return "O_h";
      return m.degree(i) >= 2 ? "O_ether" : "O_carbonyl";
    case Element::S:
      if (a.aromatic) return "S_ar";
      return double_to_o ? "S_oxidized" : "S";
    case Element::P: return "P";
    case Element::B: return "B";
    case Element::F: return "F";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
    case Element::I: return "I";
    case Element::H: return "H_on_C";  // explicit hydrogen atoms are rare; treat as CH
  }
  return "C_sp3";
}

double logp_proxy(const MolecularGraph& m) {
  // Integer counts per type, summed in table order, so the result does not
  // depend on atom order.
  std::array<int, kLogpTable.size()> counts{};
  for (int i = 0; i < static_cast<int>(m.num_atoms()); ++i) {
    const auto& a = m.atom(i);
    ++counts[table_index(logp_atom_type(m, i))];
    if (a.element == Element::C) counts[table_index("H_on_C")] += a.hydrogens;
    if (a.charge != 0) ++counts[table_index("charged")];
  }
  double total = 0.0;
  for (std::size_t k = 0; k < kLogpTable.size(); ++k) total += counts[k] * kLogpTable[k].value;
  return total;
}

double molecular_weight(const MolecularGraph& m) {
  std::array<int, 64> element_counts{};
  int hydrogens = 0;
  for (const auto& a : m.atoms()) {
    ++element_counts[static_cast<std::size_t>(a.element)];
    hydrogens += a.hydrogens;
  }
  double mw = hydrogens * kHydrogenMass;
  for (std::size_t z = 0; z < element_counts.size(); ++z) {
    if (element_counts[z] > 0) mw += element_counts[z] * chemgraph::element_mass(static_cast<Element>(z));
  }
  return mw;
}

double sa_proxy(const MolecularGraph& m) {
  const int n = static_cast<int>(m.num_atoms());
  int branch = 0;
  int charged = 0;
  for (int i = 0; i < n; ++i) {
    if (m.degree(i) >= 3) ++branch;
    if (m.atom(i).charge != 0) ++charged;
  }
  std::vector<int> ring_memberships(static_cast<std::size_t>(n), 0);
  int strained = 0;
  for (const auto& ring : m.small_rings()) {
    for (int a : ring) ++ring_memberships[static_cast<std::size_t>(a)];
    const auto size = ring.size();
    if (size == 3 || size == 4 || size == 7 || size == 8) ++strained;
  }
  const int fused = static_cast<int>(
      std::count_if(ring_memberships.begin(), ring_memberships.end(), [](int c) { return c > 1; }));
  int stereo = 0;
  for (const auto& a : m.atoms()) {
    if (!a.chirality.empty()) ++stereo;
  }
  const double score = 1.0 + 0.05 * m.heavy_atom_count() + 0.25 * branch + 0.5 * fused +
                       0.3 * strained + 0.2 * charged + 0.3 * stereo;
  return std::clamp(score, 1.0, 10.0);
}

double qed_proxy(const MolecularGraph& m) {
  const int heavy = m.heavy_atom_count();
  int hetero = 0;
  for (const auto& a : m.atoms()) {
    if (a.element != Element::C && a.element != Element::H) ++hetero;
  }
  const double hetero_fraction = heavy > 0 ? static_cast<double>(hetero) / heavy : 0.0;
  const double d = gaussian_desirability(molecular_weight(m), 350.0, 120.0) *
                   gaussian_desirability(logp_proxy(m), 2.5, 1.5) *
                   gaussian_desirability(static_cast<double>(m.ring_count()), 2.0, 1.2) *
                   gaussian_desirability(hetero_fraction, 0.2, 0.12);
  return std::clamp(d, 0.0, 1.0);
}

double builtin_property(std::string_view name, const MolecularGraph& m) {
  if (name == "logp_proxy") return logp_proxy(m);
  if (name == "sa_proxy") return sa_proxy(m);
  if (name == "qed_proxy") return qed_proxy(m);
  if (name == "ringcount") return static_cast<double>(m.ring_count());
  if (name == "heavyatoms") return static_cast<double>(m.heavy_atom_count());
  fail(ErrorCode::kUnknownProperty, "unknown property '" + std::string(name) + "'");
}

}  // namespace leadopt::oracle
