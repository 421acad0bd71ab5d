// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_CHEMGRAPH_ELEMENT_HPP_
#define LEADOPT_CHEMGRAPH_ELEMENT_HPP_

#include <optional>
#include <span>
#include <string_view>

namespace leadopt::chemgraph {

// Atomic numbers of the supported subset: H B C N O F P S Cl Br I.
enum class Element : unsigned char {
  H = 1,
  B = 5,
  C = 6,
  N = 7,
  O = 8,
  F = 9,
  P = 15,
  S = 16,
  Cl = 17,
  Br = 35,
  I = 53,
};

std::optional<Element> element_from_symbol(std::string_view symbol);
std::string_view element_symbol(Element e);
double element_mass(Element e);

// True for elements that may appear outside brackets in SMILES.
bool is_organic_subset(Element e);

// True for elements that may be written as lowercase aromatic atoms.
bool can_be_aromatic(Element e);

// Allowed total valences (bond orders plus hydrogens) for an element carrying
// the given formal charge, in increasing order. Charged atoms take the
// valences of their isoelectronic neighbour in the same period, e.g. N+ ~ C.
std::span<const int> allowed_valences(Element e, int charge);

// Smallest allowed valence (the "default" used for implicit hydrogens), or -1
// if the element/charge combination admits no bonding at all.
int default_valence(Element e, int charge);
int max_valence(Element e, int charge);

inline bool is_halogen(Element e) {
  return e == Element::F || e == Element::Cl || e == Element::Br ||
         e == Element::I;
}

}  // namespace leadopt::chemgraph

#endif  // LEADOPT_CHEMGRAPH_ELEMENT_HPP_
