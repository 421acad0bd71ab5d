// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_CHEMGRAPH_SMILES_HPP_
#define LEADOPT_CHEMGRAPH_SMILES_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemgraph/graph.hpp"

namespace leadopt::chemgraph {

// Parses the supported SMILES subset: organic subset atoms, bracket atoms
// with charge and explicit H, branches, ring closures (including %nn),
// aromatic lowercase atoms. Stereo marks are kept as opaque annotations.
// Throws leadopt::Error on any syntactic or chemical violation.
MolecularGraph parse_smiles(std::string_view text);

// Writes the graph in atom-index order. Round-trips through parse_smiles to
// an isomorphic graph; stereo annotations are not written.
std::string write_smiles(const MolecularGraph& m);

// Canonical atom ranks (a permutation of 0..n-1), invariant under input atom
// reordering up to automorphism.
std::vector<int> canonical_ranks(const MolecularGraph& m);

// Canonical SMILES: the writer driven by canonical ranks.
std::string canonicalize(const MolecularGraph& m);

// Writes raw construction data without sanitizing it. Hydrogens must be
// explicit (>= 0); atoms whose count differs from what a parser would infer
// are bracketed, so parsing the output repeats the same validity checks.
std::string write_raw_smiles(std::span<const RawAtom> atoms,
                             std::span<const RawBond> bonds);

}  // namespace leadopt::chemgraph

#endif  // LEADOPT_CHEMGRAPH_SMILES_HPP_
