// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "chemgraph/smiles.hpp"

namespace leadopt::chemgraph {

namespace {

struct View {
  std::span<const RawAtom> atoms;
  std::span<const RawBond> bonds;
  std::vector<std::vector<Neighbor>> adj;
};

View make_view(std::span<const RawAtom> atoms, std::span<const RawBond> bonds) {
  View v{atoms, bonds, {}};
  v.adj.resize(atoms.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    v.adj[static_cast<std::size_t>(bonds[i].begin)].push_back({bonds[i].end, static_cast<int>(i)});
    v.adj[static_cast<std::size_t>(bonds[i].end)].push_back({bonds[i].begin, static_cast<int>(i)});
  }
  return v;
}

// Whether the parser would reproduce this atom's hydrogen count (and pi
// participation, for aromatic atoms) from a bare organic-subset symbol.
bool needs_bracket(const View& v, int idx) {
  const RawAtom& a = v.atoms[static_cast<std::size_t>(idx)];
  if (a.element == Element::H || a.charge != 0) return true;
  int arom = 0;
  int other = 0;
  for (const auto& nb : v.adj[static_cast<std::size_t>(idx)]) {
    const int order = v.bonds[static_cast<std::size_t>(nb.bond)].order;
    if (order == 4) {
      ++arom;
    } else {
      other += order;
    }
  }
  const auto allowed = allowed_valences(a.element, 0);
  if (allowed.empty()) return true;
  if (!a.aromatic) {
    for (int val : allowed) {
      if (val >= other) return val - other != a.hydrogens;
    }
    return true;
  }
  const int dv = allowed.front();
  const int implicit_pi = (arom + other + 1 <= dv) ? 1 : 0;
  const int actual_pi = (arom + other + a.hydrogens + 1 <= dv) ? 1 : 0;
  if (implicit_pi != actual_pi) return true;
  const int kekule = arom + other + implicit_pi;
  for (int val : allowed) {
    if (val >= kekule) return val - kekule != a.hydrogens;
  }
  return true;
}

void append_atom(std::string& out, const View& v, int idx) {
  const RawAtom& a = v.atoms[static_cast<std::size_t>(idx)];
  std::string sym(element_symbol(a.element));
  if (a.aromatic) sym[0] = static_cast<char>(sym[0] - 'A' + 'a');
  if (!needs_bracket(v, idx)) {
    out += sym;
    return;
  }
  out += '[';
  out += sym;
  if (a.hydrogens > 0) {
    out += 'H';
    if (a.hydrogens > 1) out += std::to_string(a.hydrogens);
  }
  if (a.charge != 0) {
    out += a.charge > 0 ? '+' : '-';
    const int mag = a.charge > 0 ? a.charge : -a.charge;
    if (mag > 1) out += std::to_string(mag);
  }
  out += ']';
}

void append_bond(std::string& out, const View& v, int bond) {
  const RawBond& b = v.bonds[static_cast<std::size_t>(bond)];
  switch (b.order) {
    case 4: return;
    case 2: out += '='; return;
    case 3: out += '#'; return;
    default:
      if (v.atoms[static_cast<std::size_t>(b.begin)].aromatic &&
          v.atoms[static_cast<std::size_t>(b.end)].aromatic) {
        out += '-';
      }
  }
}

void append_ring_label(std::string& out, int label) {
  if (label < 10) {
    out += static_cast<char>('0' + label);
  } else {
    out += '%';
    out += std::to_string(label);
  }
}

// Two-pass DFS writer: the first pass fixes the spanning tree and ring
// closures, the second emits text.
std::string write_ordered(const View& v, const std::vector<int>& order_key) {
  const std::size_t n = v.atoms.size();
  if (n == 0) return {};
  std::vector<std::vector<Neighbor>> sorted_adj = v.adj;
  for (auto& list : sorted_adj) {
    std::sort(list.begin(), list.end(), [&](const Neighbor& x, const Neighbor& y) {
      return order_key[static_cast<std::size_t>(x.atom)] < order_key[static_cast<std::size_t>(y.atom)];
    });
  }

  std::vector<char> visited(n, 0);
  std::vector<char> bond_used(v.bonds.size(), 0);
  std::vector<std::vector<Neighbor>> children(n);
  // Ring closures: (partner, bond). Openings are emitted on the earlier atom.
  std::vector<std::vector<Neighbor>> ring_open(n), ring_close(n);

  int start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (order_key[i] < order_key[static_cast<std::size_t>(start)]) start = static_cast<int>(i);
  }

  // Pass 1 (iterative DFS preserving neighbour order).
  struct Frame {
    int atom;
    std::size_t next;
  };
  std::vector<Frame> stack{{start, 0}};
  visited[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& list = sorted_adj[static_cast<std::size_t>(f.atom)];
    if (f.next >= list.size()) {
      stack.pop_back();
      continue;
    }
    const Neighbor nb = list[f.next++];
    if (bond_used[static_cast<std::size_t>(nb.bond)]) continue;
    bond_used[static_cast<std::size_t>(nb.bond)] = 1;
    if (visited[static_cast<std::size_t>(nb.atom)]) {
      ring_open[static_cast<std::size_t>(nb.atom)].push_back({f.atom, nb.bond});
      ring_close[static_cast<std::size_t>(f.atom)].push_back({nb.atom, nb.bond});
    } else {
      visited[static_cast<std::size_t>(nb.atom)] = 1;
      children[static_cast<std::size_t>(f.atom)].push_back(nb);
      stack.push_back({nb.atom, 0});
    }
  }

  // Pass 2.
  std::string out;
  out.reserve(n * 3);
  std::vector<int> label_of_bond(v.bonds.size(), -1);
  std::vector<char> label_busy(100, 0);
  auto take_label = [&]() {
    for (int l = 1; l < 100; ++l) {
      if (!label_busy[static_cast<std::size_t>(l)]) {
        label_busy[static_cast<std::size_t>(l)] = 1;
        return l;
      }
    }
    return 99;
  };

  struct Emit {
    int atom;
    int via_bond;  // -1 for the root
    bool open_paren;
    bool close_paren;
  };
  std::vector<Emit> work{{start, -1, false, false}};
  while (!work.empty()) {
    const Emit e = work.back();
    work.pop_back();
    if (e.close_paren) {
      out += ')';
      continue;
    }
    if (e.open_paren) out += '(';
    if (e.via_bond >= 0) append_bond(out, v, e.via_bond);
    append_atom(out, v, e.atom);
    const auto ai = static_cast<std::size_t>(e.atom);
    for (const auto& rc : ring_close[ai]) {
      const int label = label_of_bond[static_cast<std::size_t>(rc.bond)];
      append_ring_label(out, label);
      label_busy[static_cast<std::size_t>(label)] = 0;
    }
    for (const auto& ro : ring_open[ai]) {
      const int label = take_label();
      label_of_bond[static_cast<std::size_t>(ro.bond)] = label;
      append_bond(out, v, ro.bond);
      append_ring_label(out, label);
    }
    const auto& kids = children[ai];
    // Push in reverse so the first child is emitted first; all but the last
    // child go in parentheses.
    for (std::size_t k = kids.size(); k-- > 0;) {
      const bool branch = k + 1 < kids.size();
      if (branch) work.push_back({-1, -1, false, true});
      work.push_back({kids[k].atom, kids[k].bond, branch, false});
    }
  }
  return out;
}

int bond_code(const Bond& b) { return b.aromatic ? 4 : b.kekule_order; }

}  // namespace

std::vector<int> canonical_ranks(const MolecularGraph& m) {
  const std::size_t n = m.num_atoms();
  using Inv = std::tuple<int, int, int, int, int, int>;
  std::vector<Inv> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    inv[i] = {static_cast<int>(a.element), a.charge, m.degree(static_cast<int>(i)), a.hydrogens,
              a.aromatic ? 1 : 0, a.in_ring ? 1 : 0};
  }

  auto dense_ranks = [n](const auto& keys) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
      return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
    });
    std::vector<int> rank(n, 0);
    int r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && keys[static_cast<std::size_t>(idx[k - 1])] < keys[static_cast<std::size_t>(idx[k])]) ++r;
      rank[static_cast<std::size_t>(idx[k])] = r;
    }
    return std::pair{rank, r + 1};
  };

  auto [rank, classes] = dense_ranks(inv);

  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Key> keys(n);
  auto refine = [&]() {
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) {
        keys[i].first = rank[i];
        auto& nbs = keys[i].second;
        nbs.clear();
        for (const auto& nb : m.neighbors(static_cast<int>(i))) {
          nbs.emplace_back(rank[static_cast<std::size_t>(nb.atom)], bond_code(m.bond(nb.bond)));
        }
        std::sort(nbs.begin(), nbs.end());
      }
      auto [next, next_classes] = dense_ranks(keys);
      rank = std::move(next);
      if (next_classes == classes) break;
      classes = next_classes;
    }
  };

  refine();
  while (static_cast<std::size_t>(classes) < n) {
    // Break the lowest tied class at its lowest-index member.
    std::vector<int> count(static_cast<std::size_t>(classes), 0);
    for (int r : rank) ++count[static_cast<std::size_t>(r)];
    int tied = 0;
    while (count[static_cast<std::size_t>(tied)] < 2) ++tied;
    int chosen = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] == tied) {
        chosen = static_cast<int>(i);
        break;
      }
    }
    std::vector<int> split(n);
    for (std::size_t i = 0; i < n; ++i) {
      split[i] = rank[i] * 2 + ((rank[i] == tied && static_cast<int>(i) != chosen) ? 1 : 0);
    }
    auto [next, next_classes] = dense_ranks(split);
    rank = std::move(next);
    classes = next_classes;
    refine();
  }
  return rank;
}

std::string write_raw_smiles(std::span<const RawAtom> atoms, std::span<const RawBond> bonds) {
  View v = make_view(atoms, bonds);
  std::vector<int> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  return write_ordered(v, order);
}

std::string write_smiles(const MolecularGraph& m) {
  const auto atoms = m.raw_atoms();
  const auto bonds = m.raw_bonds();
  return write_raw_smiles(atoms, bonds);
}

std::string canonicalize(const MolecularGraph& m) {
  const auto atoms = m.raw_atoms();
  const auto bonds = m.raw_bonds();
  View v = make_view(atoms, bonds);
  return write_ordered(v, canonical_ranks(m));
}

}  // namespace leadopt::chemgraph
