// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_CHEMGRAPH_GRAPH_HPP_
#define LEADOPT_CHEMGRAPH_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemgraph/element.hpp"

namespace leadopt::chemgraph {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  Element element = Element::C;
  int charge = 0;
  int hydrogens = 0;
  bool aromatic = false;
  bool in_ring = false;
  // Written inside brackets on input; hydrogens were given explicitly.
  bool bracket = false;
  // Opaque stereo annotation ("@" or "@@"); never used for ranking.
  std::string chirality;
};

struct Bond {
  int begin = 0;
  int end = 0;
  // Kekule order (1..3). Aromatic bonds keep one valid Kekule assignment so
  // valence arithmetic stays integral.
  int kekule_order = 1;
  bool aromatic = false;
  // Opaque directional annotation ('/' or '\\'), 0 if none.
  char stereo = 0;

  BondOrder order() const {
    return aromatic ? BondOrder::kAromatic : static_cast<BondOrder>(kekule_order);
  }
  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Input to graph construction. hydrogens < 0 requests implicit-hydrogen
// perception; bond order 4 marks an aromatic bond.
struct RawAtom {
  Element element = Element::C;
  int charge = 0;
  int hydrogens = -1;
  bool aromatic = false;
  std::string chirality;
};

struct RawBond {
  int begin = 0;
  int end = 0;
  int order = 1;
  char stereo = 0;
};

// A sanitized, connected, valence-checked molecule. Construction either
// succeeds with a graph that satisfies every invariant or throws
// leadopt::Error (BadValence, MultiFragment, SyntaxError).
class MolecularGraph {
 public:
  MolecularGraph() = default;

  static MolecularGraph build(std::vector<RawAtom> atoms,
                              std::vector<RawBond> bonds);

  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }

  std::span<const Neighbor> neighbors(int atom) const {
    const auto b = adj_offsets_[static_cast<std::size_t>(atom)];
    const auto e = adj_offsets_[static_cast<std::size_t>(atom) + 1];
    return {adjacency_.data() + b, e - b};
  }
  int degree(int atom) const { return static_cast<int>(neighbors(atom).size()); }
  std::optional<int> bond_between(int a, int b) const;

  // Sum of Kekule bond orders at the atom (hydrogens excluded).
  int bond_valence(int atom) const;

  // Cyclomatic number: independent cycles of the connected graph.
  int ring_count() const {
    return static_cast<int>(bonds_.size()) - static_cast<int>(atoms_.size()) + 1;
  }
  int heavy_atom_count() const;

  // Unique smallest rings (size <= 8) through each ring bond, as atom lists
  // in cycle order.
  const std::vector<std::vector<int>>& small_rings() const { return rings_; }

  // Converts back into construction input, hydrogens kept explicit.
  std::vector<RawAtom> raw_atoms() const;
  std::vector<RawBond> raw_bonds() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::vector<int>> rings_;

  void build_adjacency();
};

}  // namespace leadopt::chemgraph

#endif  // LEADOPT_CHEMGRAPH_GRAPH_HPP_
