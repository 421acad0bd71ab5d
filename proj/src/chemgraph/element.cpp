// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "chemgraph/element.hpp"

#include <array>

namespace leadopt::chemgraph {

namespace {

// Valence sets indexed by a (period-row, group) slot. Period 2 has no
// hypervalent states; periods 3+ do for groups 15 and 16.
constexpr std::array<int, 1> kV0{0};
constexpr std::array<int, 1> kV1{1};
constexpr std::array<int, 1> kV2{2};
constexpr std::array<int, 1> kV3{3};
constexpr std::array<int, 1> kV4{4};
constexpr std::array<int, 2> kV35{3, 5};
constexpr std::array<int, 3> kV246{2, 4, 6};

int group_of(Element e) {
  switch (e) {
    case Element::H: return 1;
    case Element::B: return 13;
    case Element::C: return 14;
    case Element::N:
    case Element::P: return 15;
    case Element::O:
    case Element::S: return 16;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: return 17;
  }
  return 0;
}

bool is_period2(Element e) {
  return e == Element::B || e == Element::C || e == Element::N ||
         e == Element::O || e == Element::F;
}

std::span<const int> valences_for_group(int group, bool period2) {
  switch (group) {
    case 13: return kV3;
    case 14: return kV4;
    case 15: return period2 ? std::span<const int>(kV3) : std::span<const int>(kV35);
    case 16: return period2 ? std::span<const int>(kV2) : std::span<const int>(kV246);
    case 17: return kV1;
    case 18: return kV0;
    default: return {};
  }
}

}  // namespace

std::optional<Element> element_from_symbol(std::string_view s) {
  if (s == "H") return Element::H;
  if (s == "B") return Element::B;
  if (s == "C") return Element::C;
  if (s == "N") return Element::N;
  if (s == "O") return Element::O;
  if (s == "F") return Element::F;
  if (s == "P") return Element::P;
  if (s == "S") return Element::S;
  if (s == "Cl") return Element::Cl;
  if (s == "Br") return Element::Br;
  if (s == "I") return Element::I;
  return std::nullopt;
}

std::string_view element_symbol(Element e) {
  switch (e) {
    case Element::H: return "H";
    case Element::B: return "B";
    case Element::C: return "C";
    case Element::N: return "N";
    case Element::O: return "O";
    case Element::F: return "F";
    case Element::P: return "P";
    case Element::S: return "S";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
    case Element::I: return "I";
  }
  return "?";
}

double element_mass(Element e) {
  switch (e) {
    case Element::H: return 1.008;
    case Element::B: return 10.81;
    case Element::C: return 12.011;
    case Element::N: return 14.007;
    case Element::O: return 15.999;
    case Element::F: return 18.998;
    case Element::P: return 30.974;
    case Element::S: return 32.06;
    case Element::Cl: return 35.45;
    case Element::Br: return 79.904;
    case Element::I: return 126.904;
  }
  return 0.0;
}

bool is_organic_subset(Element e) { return e != Element::H; }

bool can_be_aromatic(Element e) {
  return e == Element::B || e == Element::C || e == Element::N ||
         e == Element::O || e == Element::P || e == Element::S;
}

std::span<const int> allowed_valences(Element e, int charge) {
  if (e == Element::H) {
    if (charge == 0) return kV1;
    return kV0;
  }
  // A positive charge on groups 15-17 (or a negative one anywhere) moves the
  // atom to its isoelectronic neighbour; C+ behaves like boron.
  int group = group_of(e);
  if (charge > 0) {
    if (group >= 15) {
      group -= charge;
    } else if (group == 14 || group == 13) {
      group = 13 - (charge - 1);
    }
  } else if (charge < 0) {
    group -= charge;  // moves right
  }
  if (group < 13 || group > 18) return {};
  return valences_for_group(group, is_period2(e));
}

int default_valence(Element e, int charge) {
  auto v = allowed_valences(e, charge);
  return v.empty() ? -1 : v.front();
}

int max_valence(Element e, int charge) {
  auto v = allowed_valences(e, charge);
  return v.empty() ? -1 : v.back();
}

}  // namespace leadopt::chemgraph
