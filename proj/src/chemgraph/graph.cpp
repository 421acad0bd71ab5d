// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "chemgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "common/error.hpp"

namespace leadopt::chemgraph {

namespace {

constexpr int kMaxRingSize = 8;
constexpr int kMatchingStepLimit = 200000;

struct Adjacency {
  std::vector<std::vector<Neighbor>> lists;
};

Adjacency make_adjacency(std::size_t n, const std::vector<RawBond>& bonds) {
  Adjacency adj;
  adj.lists.resize(n);
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    adj.lists[static_cast<std::size_t>(bonds[i].begin)].push_back(
        {bonds[i].end, static_cast<int>(i)});
    adj.lists[static_cast<std::size_t>(bonds[i].end)].push_back(
        {bonds[i].begin, static_cast<int>(i)});
  }
  return adj;
}

void check_connected(const Adjacency& adj) {
  const std::size_t n = adj.lists.size();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& nb : adj.lists[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(nb.atom)]) {
        seen[static_cast<std::size_t>(nb.atom)] = 1;
        ++count;
        stack.push_back(nb.atom);
      }
    }
  }
  if (count != n) fail(ErrorCode::kMultiFragment, "molecule is not connected");
}

// Iterative Tarjan bridge finding. Returns ring-bond flags.
std::vector<char> ring_bonds(const Adjacency& adj, std::size_t num_bonds) {
  const std::size_t n = adj.lists.size();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_ring(num_bonds, 1);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    stack.push_back({static_cast<int>(root), -1, 0});
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& list = adj.lists[static_cast<std::size_t>(f.atom)];
      if (f.next < list.size()) {
        const Neighbor nb = list[f.next++];
        if (nb.bond == f.parent_bond) continue;
        const auto v = static_cast<std::size_t>(nb.atom);
        if (disc[v] < 0) {
          disc[v] = low[v] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[static_cast<std::size_t>(f.atom)] =
              std::min(low[static_cast<std::size_t>(f.atom)], disc[v]);
        }
      } else {
        const int child = f.atom;
        const int pbond = f.parent_bond;
        stack.pop_back();
        if (!stack.empty()) {
          const int parent = stack.back().atom;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)],
                       low[static_cast<std::size_t>(child)]);
          if (low[static_cast<std::size_t>(child)] >
              disc[static_cast<std::size_t>(parent)]) {
            is_ring[static_cast<std::size_t>(pbond)] = 0;
          }
        }
      }
    }
  }
  return is_ring;
}

// Smallest cycle through each ring bond, limited to kMaxRingSize atoms.
std::vector<std::vector<int>> find_small_rings(const Adjacency& adj,
                                               const std::vector<RawBond>& bonds,
                                               const std::vector<char>& is_ring) {
  const std::size_t n = adj.lists.size();
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> rings;
  std::vector<int> prev(n), depth(n);
  std::vector<int> queue;
  for (std::size_t bi = 0; bi < bonds.size(); ++bi) {
    if (!is_ring[bi]) continue;
    const int src = bonds[bi].begin;
    const int dst = bonds[bi].end;
    std::fill(prev.begin(), prev.end(), -2);
    queue.clear();
    queue.push_back(src);
    prev[static_cast<std::size_t>(src)] = -1;
    depth[static_cast<std::size_t>(src)] = 0;
    bool found = false;
    for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
      const int u = queue[qi];
      if (depth[static_cast<std::size_t>(u)] >= kMaxRingSize - 1) break;
      for (const auto& nb : adj.lists[static_cast<std::size_t>(u)]) {
        if (static_cast<std::size_t>(nb.bond) == bi || !is_ring[static_cast<std::size_t>(nb.bond)]) continue;
        const auto v = static_cast<std::size_t>(nb.atom);
        if (prev[v] != -2) continue;
        prev[v] = u;
        depth[v] = depth[static_cast<std::size_t>(u)] + 1;
        if (nb.atom == dst) {
          found = true;
          break;
        }
        queue.push_back(nb.atom);
      }
    }
    if (!found) continue;
    std::vector<int> cycle;
    for (int a = dst; a != -1; a = prev[static_cast<std::size_t>(a)]) cycle.push_back(a);
    std::vector<int> key = cycle;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) rings.push_back(std::move(cycle));
  }
  return rings;
}

// Perfect matching over aromatic bonds between atoms that need a pi bond.
bool kekulize(const std::vector<char>& needy, const Adjacency& adj,
              const std::vector<RawBond>& bonds, std::vector<int>& match) {
  const std::size_t n = needy.size();
  match.assign(n, -1);  // bond index used for the double bond
  std::vector<int> partner(n, -1);
  int steps = 0;

  auto candidates = [&](int u) {
    int c = 0;
    for (const auto& nb : adj.lists[static_cast<std::size_t>(u)]) {
      if (bonds[static_cast<std::size_t>(nb.bond)].order == 4 &&
          needy[static_cast<std::size_t>(nb.atom)] &&
          partner[static_cast<std::size_t>(nb.atom)] < 0) {
        ++c;
      }
    }
    return c;
  };

  auto solve = [&](auto&& self) -> bool {
    if (++steps > kMatchingStepLimit) return false;
    int best = -1;
    int best_count = 1 << 30;
    for (std::size_t i = 0; i < n; ++i) {
      if (!needy[i] || partner[i] >= 0) continue;
      const int c = candidates(static_cast<int>(i));
      if (c < best_count) {
        best_count = c;
        best = static_cast<int>(i);
        if (c == 0) break;
      }
    }
    if (best < 0) return true;
    if (best_count == 0) return false;
    for (const auto& nb : adj.lists[static_cast<std::size_t>(best)]) {
      const auto v = static_cast<std::size_t>(nb.atom);
      if (bonds[static_cast<std::size_t>(nb.bond)].order != 4 || !needy[v] || partner[v] >= 0) continue;
      partner[static_cast<std::size_t>(best)] = nb.atom;
      partner[v] = best;
      match[static_cast<std::size_t>(best)] = nb.bond;
      match[v] = nb.bond;
      if (self(self)) return true;
      partner[static_cast<std::size_t>(best)] = -1;
      partner[v] = -1;
      match[static_cast<std::size_t>(best)] = -1;
      match[v] = -1;
    }
    return false;
  };
  return solve(solve);
}

// Pi electrons an atom donates to a ring, or -1 if it cannot be aromatic.
int pi_electrons(const MolecularGraph& g, int atom, const std::vector<char>& in_ring) {
  const Atom& a = g.atom(atom);
  if (!can_be_aromatic(a.element)) return -1;
  int double_partner = -1;
  for (const auto& nb : g.neighbors(atom)) {
    const int order = g.bond(nb.bond).kekule_order;
    if (order == 3) return -1;
    if (order == 2) {
      if (double_partner >= 0) return -1;
      double_partner = nb.atom;
    }
  }
  if (double_partner >= 0) {
    if (in_ring[static_cast<std::size_t>(double_partner)]) return 1;
    // Exocyclic double bond to a non-ring atom (e.g. a carbonyl).
    return a.element == Element::C ? 0 : -1;
  }
  const int valence = g.bond_valence(atom) + a.hydrogens;
  switch (a.element) {
    case Element::C:
      if (a.charge == -1 && valence == 3) return 2;
      if (a.charge == 1 && valence == 3) return 0;
      return -1;
    case Element::N:
    case Element::P:
      if (a.charge == 0 && valence == 3) return 2;
      if (a.charge == -1 && valence == 2) return 2;
      return -1;
    case Element::O:
    case Element::S:
      if (a.charge == 0 && valence == 2) return 2;
      return -1;
    case Element::B:
      if (a.charge == 0 && valence == 3) return 0;
      return -1;
    default:
      return -1;
  }
}

}  // namespace

MolecularGraph MolecularGraph::build(std::vector<RawAtom> raw_atoms,
                                     std::vector<RawBond> raw_bonds) {
  const std::size_t n = raw_atoms.size();
  if (n == 0) fail(ErrorCode::kSyntaxError, "empty molecule");

  {
    std::set<std::pair<int, int>> seen;
    for (const auto& b : raw_bonds) {
      if (b.begin < 0 || b.end < 0 || static_cast<std::size_t>(b.begin) >= n ||
          static_cast<std::size_t>(b.end) >= n) {
        fail(ErrorCode::kSyntaxError, "bond endpoint out of range");
      }
      if (b.begin == b.end) fail(ErrorCode::kSyntaxError, "self bond on atom " + std::to_string(b.begin));
      if (b.order < 1 || b.order > 4) fail(ErrorCode::kSyntaxError, "bad bond order");
      auto key = std::minmax(b.begin, b.end);
      if (!seen.insert(key).second) {
        fail(ErrorCode::kSyntaxError, "duplicate bond " + std::to_string(key.first) +
                                          "-" + std::to_string(key.second));
      }
    }
  }

  Adjacency adj = make_adjacency(n, raw_bonds);
  check_connected(adj);
  const std::vector<char> is_ring_bond = ring_bonds(adj, raw_bonds.size());

  // Aromatic bonds outside rings (e.g. the biphenyl link) are plain single bonds.
  for (std::size_t i = 0; i < raw_bonds.size(); ++i) {
    if (raw_bonds[i].order == 4 && !is_ring_bond[i]) raw_bonds[i].order = 1;
  }
  std::vector<char> atom_in_ring(n, 0);
  for (std::size_t i = 0; i < raw_bonds.size(); ++i) {
    if (is_ring_bond[i]) {
      atom_in_ring[static_cast<std::size_t>(raw_bonds[i].begin)] = 1;
      atom_in_ring[static_cast<std::size_t>(raw_bonds[i].end)] = 1;
    }
  }

  // Decide which aromatic atoms need a Kekule double bond.
  std::vector<char> needy(n, 0);
  bool any_aromatic_bond = false;
  for (std::size_t i = 0; i < n; ++i) {
    const RawAtom& a = raw_atoms[i];
    int arom_bonds = 0;
    int other = 0;
    for (const auto& nb : adj.lists[i]) {
      const int order = raw_bonds[static_cast<std::size_t>(nb.bond)].order;
      if (order == 4) {
        ++arom_bonds;
      } else {
        other += order;
      }
    }
    if (arom_bonds > 0) any_aromatic_bond = true;
    if (!a.aromatic) {
      if (arom_bonds > 0) {
        fail(ErrorCode::kBadValence, "aromatic bond on non-aromatic atom " + std::to_string(i));
      }
      continue;
    }
    if (!atom_in_ring[i] || arom_bonds == 0) {
      fail(ErrorCode::kBadValence, "aromatic atom " + std::to_string(i) + " is not in a ring");
    }
    if (!can_be_aromatic(a.element)) {
      fail(ErrorCode::kBadValence, "element cannot be aromatic at atom " + std::to_string(i));
    }
    const int dv = default_valence(a.element, a.charge);
    const int sum = arom_bonds + other + std::max(a.hydrogens, 0);
    needy[i] = (dv >= 0 && sum + 1 <= dv) ? 1 : 0;
  }

  if (any_aromatic_bond) {
    std::vector<int> match;
    if (!kekulize(needy, adj, raw_bonds, match)) {
      fail(ErrorCode::kBadValence, "cannot assign a Kekule structure to the aromatic system");
    }
    for (std::size_t i = 0; i < raw_bonds.size(); ++i) {
      if (raw_bonds[i].order == 4) raw_bonds[i].order = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (match[i] >= 0) raw_bonds[static_cast<std::size_t>(match[i])].order = 2;
    }
  }

  MolecularGraph g;
  g.atoms_.resize(n);
  g.bonds_.resize(raw_bonds.size());
  for (std::size_t i = 0; i < raw_bonds.size(); ++i) {
    Bond& b = g.bonds_[i];
    b.begin = raw_bonds[i].begin;
    b.end = raw_bonds[i].end;
    b.kekule_order = raw_bonds[i].order;
    b.stereo = raw_bonds[i].stereo;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Atom& a = g.atoms_[i];
    a.element = raw_atoms[i].element;
    a.charge = raw_atoms[i].charge;
    a.bracket = raw_atoms[i].hydrogens >= 0;
    a.hydrogens = std::max(raw_atoms[i].hydrogens, 0);
    a.in_ring = atom_in_ring[i] != 0;
    a.chirality = std::move(raw_atoms[i].chirality);
  }
  g.build_adjacency();

  // Hydrogens and valence.
  for (std::size_t i = 0; i < n; ++i) {
    Atom& a = g.atoms_[i];
    const int v = g.bond_valence(static_cast<int>(i));
    const auto allowed = allowed_valences(a.element, a.charge);
    if (allowed.empty()) {
      fail(ErrorCode::kBadValence, "unsupported charge state at atom " + std::to_string(i));
    }
    if (!a.bracket) {
      int h = -1;
      for (int val : allowed) {
        if (val >= v) {
          h = val - v;
          break;
        }
      }
      if (h < 0) {
        fail(ErrorCode::kBadValence, "valence exceeded at atom " + std::to_string(i) + " (" +
                                         std::string(element_symbol(a.element)) + ")");
      }
      a.hydrogens = h;
    } else if (v + a.hydrogens > allowed.back()) {
      fail(ErrorCode::kBadValence, "valence exceeded at atom " + std::to_string(i) + " (" +
                                       std::string(element_symbol(a.element)) + ")");
    }
  }

  g.rings_ = find_small_rings(adj, raw_bonds, is_ring_bond);

  // Hueckel perception on 5-7 membered rings.
  for (const auto& ring : g.rings_) {
    if (ring.size() < 5 || ring.size() > 7) continue;
    int electrons = 0;
    bool ok = true;
    for (int atom : ring) {
      const int e = pi_electrons(g, atom, atom_in_ring);
      if (e < 0) {
        ok = false;
        break;
      }
      electrons += e;
    }
    if (!ok || electrons % 4 != 2) continue;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const int u = ring[k];
      const int v = ring[(k + 1) % ring.size()];
      g.atoms_[static_cast<std::size_t>(u)].aromatic = true;
      if (auto bi = g.bond_between(u, v)) g.bonds_[static_cast<std::size_t>(*bi)].aromatic = true;
    }
  }
  return g;
}

void MolecularGraph::build_adjacency() {
  const std::size_t n = atoms_.size();
  adj_offsets_.assign(n + 1, 0);
  for (const auto& b : bonds_) {
    ++adj_offsets_[static_cast<std::size_t>(b.begin) + 1];
    ++adj_offsets_[static_cast<std::size_t>(b.end) + 1];
  }
  std::partial_sum(adj_offsets_.begin(), adj_offsets_.end(), adj_offsets_.begin());
  adjacency_.resize(adj_offsets_.back());
  std::vector<std::size_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const auto& b = bonds_[i];
    adjacency_[fill[static_cast<std::size_t>(b.begin)]++] = {b.end, static_cast<int>(i)};
    adjacency_[fill[static_cast<std::size_t>(b.end)]++] = {b.begin, static_cast<int>(i)};
  }
}

std::optional<int> MolecularGraph::bond_between(int a, int b) const {
  for (const auto& nb : neighbors(a)) {
    if (nb.atom == b) return nb.bond;
  }
  return std::nullopt;
}

int MolecularGraph::bond_valence(int atom) const {
  int v = 0;
  for (const auto& nb : neighbors(atom)) v += bonds_[static_cast<std::size_t>(nb.bond)].kekule_order;
  return v;
}

int MolecularGraph::heavy_atom_count() const {
  int count = 0;
  for (const auto& a : atoms_) {
    if (a.element != Element::H) ++count;
  }
  return count;
}

std::vector<RawAtom> MolecularGraph::raw_atoms() const {
  std::vector<RawAtom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    out.push_back({a.element, a.charge, a.hydrogens, a.aromatic, a.chirality});
  }
  return out;
}

std::vector<RawBond> MolecularGraph::raw_bonds() const {
  std::vector<RawBond> out;
  out.reserve(bonds_.size());
  for (const auto& b : bonds_) {
    out.push_back({b.begin, b.end, b.aromatic ? 4 : b.kekule_order, b.stereo});
  }
  return out;
}

}  // namespace leadopt::chemgraph
