// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "policy/edits.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"

namespace leadopt::policy {

using chemgraph::Element;
using chemgraph::MolecularGraph;
using chemgraph::RawAtom;
using chemgraph::RawBond;

namespace {

constexpr std::string_view kBuiltinFragments =
    "C methyl\n"
    "CC ethyl\n"
    "O hydroxyl\n"
    "N amino\n"
    "F fluoro\n"
    "Cl chloro\n"
    "Br bromo\n"
    "C#N cyano\n"
    "C(F)(F)F trifluoromethyl\n"
    "OC methoxy\n"
    "C(=O)O carboxyl\n"
    "C(=O)N carboxamide\n"
    "C=O formyl\n"
    "S thiol\n"
    "N(C)C dimethylamino\n"
    "c1ccccc1 phenyl\n"
    "c1ccncc1 pyridyl\n"
    "C1CC1 cyclopropyl\n"
    "C1CCCC1 cyclopentyl\n"
    "S(=O)(=O)N sulfonamide\n";

struct RawEdit {
  std::vector<RawAtom> atoms;
  std::vector<RawBond> bonds;
};

RawEdit raw_edit(const MolecularGraph& m, const EditAction& a, const FragmentLibrary& lib) {
  RawEdit e{m.raw_atoms(), m.raw_bonds()};
  const int n = static_cast<int>(m.num_atoms());
  if (a.kind != EditKind::kDone && (a.atom < 0 || a.atom >= n)) {
    fail(ErrorCode::kIllegalEdit, "edit atom index " + std::to_string(a.atom) + " out of range");
  }
  switch (a.kind) {
    case EditKind::kDone:
      break;
    case EditKind::kReplaceAtom: {
      auto& atom = e.atoms[static_cast<std::size_t>(a.atom)];
      const bool was_aromatic = atom.aromatic;
      const Element from = atom.element;
      atom.element = a.element;
      atom.chirality.clear();
      if (was_aromatic) {
        // c-H <-> n swaps keep the ring's pi count.
        if (from == Element::C && a.element == Element::N) {
          atom.hydrogens = std::max(0, atom.hydrogens - 1);
        } else if (from == Element::N && a.element == Element::C) {
          atom.hydrogens += 1;
        }
      } else {
        const int v = m.bond_valence(a.atom);
        int h = 0;
        for (int val : chemgraph::allowed_valences(a.element, atom.charge)) {
          if (val >= v) {
            h = val - v;
            break;
          }
        }
        atom.hydrogens = h;
      }
      break;
    }
    case EditKind::kDeleteTerminal: {
      if (n < 2) fail(ErrorCode::kIllegalEdit, "cannot delete the only atom");
      if (m.degree(a.atom) != 1) fail(ErrorCode::kIllegalEdit, "delete target is not terminal");
      const auto nb = m.neighbors(a.atom)[0];
      e.atoms[static_cast<std::size_t>(nb.atom)].hydrogens += m.bond(nb.bond).kekule_order;
      e.atoms[static_cast<std::size_t>(nb.atom)].chirality.clear();
      e.atoms.erase(e.atoms.begin() + a.atom);
      std::vector<RawBond> kept;
      for (auto b : e.bonds) {
        if (b.begin == a.atom || b.end == a.atom) continue;
        if (b.begin > a.atom) --b.begin;
        if (b.end > a.atom) --b.end;
        kept.push_back(b);
      }
      e.bonds = std::move(kept);
      break;
    }
    case EditKind::kAppendFragment: {
      if (a.fragment < 0 || static_cast<std::size_t>(a.fragment) >= lib.size()) {
        fail(ErrorCode::kIllegalEdit, "fragment index out of range");
      }
      const auto& frag = lib[static_cast<std::size_t>(a.fragment)].graph;
      auto& host = e.atoms[static_cast<std::size_t>(a.atom)];
      host.hydrogens = std::max(0, host.hydrogens - 1);
      host.chirality.clear();
      const int offset = n;
      auto fa = frag.raw_atoms();
      fa[0].hydrogens = std::max(0, fa[0].hydrogens - 1);
      for (auto& x : fa) e.atoms.push_back(std::move(x));
      for (auto b : frag.raw_bonds()) {
        b.begin += offset;
        b.end += offset;
        e.bonds.push_back(b);
      }
      e.bonds.push_back({a.atom, offset, 1, 0});
      break;
    }
  }
  return e;
}

bool replace_is_plausible(const MolecularGraph& m, int i, Element target) {
  const auto& atom = m.atom(i);
  if (atom.charge != 0 || atom.element == target || atom.element == Element::H) return false;
  if (chemgraph::is_halogen(target)) {
    if (m.degree(i) != 1 || atom.aromatic) return false;
    return m.bond(m.neighbors(i)[0].bond).kekule_order == 1;
  }
  if (atom.aromatic) {
    if (m.degree(i) != 2) return false;
    if (atom.element == Element::C && target == Element::N) return atom.hydrogens == 1;
    if (atom.element == Element::N && target == Element::C) return atom.hydrogens == 0;
    return false;
  }
  const int v = m.bond_valence(i);
  return chemgraph::max_valence(target, 0) >= v;
}

}  // namespace

const FragmentLibrary& FragmentLibrary::builtin() {
  static const FragmentLibrary lib = parse(kBuiltinFragments, "<builtin>");
  return lib;
}

FragmentLibrary FragmentLibrary::parse(std::string_view text, const std::string& origin) {
  FragmentLibrary lib;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    Fragment f;
    fields >> f.smiles;
    std::getline(fields >> std::ws, f.name);
    if (f.name.empty()) f.name = f.smiles;
    try {
      f.graph = chemgraph::parse_smiles(f.smiles);
    } catch (const Error& e) {
      fail(ErrorCode::kParseError, origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (f.graph.atom(0).hydrogens < 1) {
      fail(ErrorCode::kParseError,
           origin + ":" + std::to_string(line_no) + ": fragment attachment atom has no hydrogen");
    }
    lib.fragments_.push_back(std::move(f));
  }
  return lib;
}

FragmentLibrary FragmentLibrary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open fragment library '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string_view edit_kind_name(EditKind k) {
  switch (k) {
    case EditKind::kReplaceAtom: return "replace_atom";
    case EditKind::kDeleteTerminal: return "delete_terminal";
    case EditKind::kAppendFragment: return "append_fragment";
    case EditKind::kDone: return "done";
  }
  return "unknown";
}

int delete_group(Element e) {
  switch (e) {
    case Element::C: return 0;
    case Element::N: return 1;
    case Element::O: return 2;
    case Element::S: return 3;
    default: return 4;
  }
}

int num_action_classes(std::size_t num_fragments) {
  return static_cast<int>(kReplaceTargets.size()) + kDeleteGroups + static_cast<int>(num_fragments) + 1;
}

int action_class(const EditAction& a, const MolecularGraph& m, std::size_t num_fragments) {
  const int replace_base = 0;
  const int delete_base = static_cast<int>(kReplaceTargets.size());
  const int append_base = delete_base + kDeleteGroups;
  switch (a.kind) {
    case EditKind::kReplaceAtom: {
      const auto it = std::find(kReplaceTargets.begin(), kReplaceTargets.end(), a.element);
      return replace_base + static_cast<int>(it - kReplaceTargets.begin());
    }
    case EditKind::kDeleteTerminal:
      return delete_base + delete_group(m.atom(a.atom).element);
    case EditKind::kAppendFragment:
      return append_base + a.fragment;
    case EditKind::kDone:
      break;
  }
  return append_base + static_cast<int>(num_fragments);
}

std::vector<EditAction> enumerate_edits(const MolecularGraph& m, const FragmentLibrary& lib, std::size_t cap) {
  std::vector<EditAction> all;
  const int n = static_cast<int>(m.num_atoms());
  for (int i = 0; i < n; ++i) {
    for (Element target : kReplaceTargets) {
      if (replace_is_plausible(m, i, target)) all.push_back({EditKind::kReplaceAtom, i, -1, target});
    }
  }
  if (n >= 2) {
    for (int i = 0; i < n; ++i) {
      if (m.degree(i) == 1) all.push_back({EditKind::kDeleteTerminal, i, -1, Element::C});
    }
  }
  for (int i = 0; i < n; ++i) {
    if (m.atom(i).hydrogens < 1) continue;
    for (std::size_t f = 0; f < lib.size(); ++f) {
      all.push_back({EditKind::kAppendFragment, i, static_cast<int>(f), Element::C});
    }
  }
  const std::size_t room = cap > 0 ? cap - 1 : 0;
  std::vector<EditAction> out;
  if (all.size() <= room) {
    out = std::move(all);
  } else {
    out.reserve(room + 1);
    for (std::size_t k = 0; k < room; ++k) out.push_back(all[k * all.size() / room]);
  }
  out.push_back(EditAction{});
  return out;
}

MolecularGraph apply_edit(const MolecularGraph& m, const EditAction& a, const FragmentLibrary& lib) {
  if (a.kind == EditKind::kDone) return m;
  RawEdit e = raw_edit(m, a, lib);
  try {
    return MolecularGraph::build(std::move(e.atoms), std::move(e.bonds));
  } catch (const Error& err) {
    fail(ErrorCode::kIllegalEdit, std::string(edit_kind_name(a.kind)) + " produced an invalid molecule: " + err.what());
  }
}

std::string render_edit(const MolecularGraph& m, const EditAction& a, const FragmentLibrary& lib) {
  RawEdit e;
  try {
    e = raw_edit(m, a, lib);
  } catch (const Error&) {
    return "?";
  }
  try {
    return chemgraph::write_smiles(MolecularGraph::build(e.atoms, e.bonds));
  } catch (const Error&) {
    return chemgraph::write_raw_smiles(e.atoms, e.bonds);
  }
}

std::string describe_edit(const EditAction& a, const FragmentLibrary& lib) {
  switch (a.kind) {
    case EditKind::kReplaceAtom:
      return "replace atom " + std::to_string(a.atom) + " with " + std::string(chemgraph::element_symbol(a.element));
    case EditKind::kDeleteTerminal:
      return "delete terminal atom " + std::to_string(a.atom);
    case EditKind::kAppendFragment:
      return "append " + lib[static_cast<std::size_t>(a.fragment)].name + " at atom " + std::to_string(a.atom);
    case EditKind::kDone:
      return "stop";
  }
  return "";
}

}  // namespace leadopt::policy
