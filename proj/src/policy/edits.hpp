// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_POLICY_EDITS_HPP_
#define LEADOPT_POLICY_EDITS_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "chemgraph/graph.hpp"

namespace leadopt::policy {

// Attachment is always through the fragment's first atom.
struct Fragment {
  std::string smiles;
  std::string name;
  chemgraph::MolecularGraph graph;
};

class FragmentLibrary {
 public:
  // The shipped 20-fragment library.
  static const FragmentLibrary& builtin();
  // "SMILES [name]" per line; '#' comments. Throws ParseError.
  static FragmentLibrary parse(std::string_view text, const std::string& origin = "<memory>");
  static FragmentLibrary load(const std::string& path);

  std::size_t size() const { return fragments_.size(); }
  const Fragment& operator[](std::size_t i) const { return fragments_[i]; }
  const std::vector<Fragment>& fragments() const { return fragments_; }

 private:
  std::vector<Fragment> fragments_;
};

enum class EditKind { kReplaceAtom, kDeleteTerminal, kAppendFragment, kDone };

std::string_view edit_kind_name(EditKind k);

// Elements an atom may be replaced with, in class order.
inline constexpr std::array<chemgraph::Element, 7> kReplaceTargets{
    chemgraph::Element::C, chemgraph::Element::N,  chemgraph::Element::O, chemgraph::Element::S,
    chemgraph::Element::F, chemgraph::Element::Cl, chemgraph::Element::Br};

// Deleted-atom groups for class assignment: C, N, O, S, halogen or other.
inline constexpr int kDeleteGroups = 5;
int delete_group(chemgraph::Element e);

struct EditAction {
  EditKind kind = EditKind::kDone;
  int atom = -1;       // target atom (replace, delete) or attachment atom (append)
  int fragment = -1;   // fragment index (append)
  chemgraph::Element element = chemgraph::Element::C;  // replacement element
};

// Action classes share policy weights: one per replacement element, one per
// deleted-atom group, one per fragment, plus done.
int num_action_classes(std::size_t num_fragments);
int action_class(const EditAction& a, const chemgraph::MolecularGraph& m, std::size_t num_fragments);

inline constexpr std::size_t kMaxCandidates = 64;

// Legal edits in priority order (replace < delete < append, then atom index).
// Above `cap` the non-done edits are subsampled at an even stride; done is
// always last.
std::vector<EditAction> enumerate_edits(const chemgraph::MolecularGraph& m, const FragmentLibrary& lib,
                                        std::size_t cap = kMaxCandidates);

// Applies the edit. Throws IllegalEdit if the result violates valence rules
// or would be empty.
chemgraph::MolecularGraph apply_edit(const chemgraph::MolecularGraph& m, const EditAction& a,
                                     const FragmentLibrary& lib);

// The SMILES the edit produces; an illegal edit yields text that fails to
// parse for the same reason.
std::string render_edit(const chemgraph::MolecularGraph& m, const EditAction& a, const FragmentLibrary& lib);

std::string describe_edit(const EditAction& a, const FragmentLibrary& lib);

}  // namespace leadopt::policy

#endif  // LEADOPT_POLICY_EDITS_HPP_
