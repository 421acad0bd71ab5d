// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_CHEMGRAPH_FINGERPRINT_HPP_
#define LEADOPT_CHEMGRAPH_FINGERPRINT_HPP_

#include <cstdint>
#include <vector>

#include "chemgraph/graph.hpp"

namespace leadopt::chemgraph {

inline constexpr int kDefaultFingerprintBits = 2048;
inline constexpr int kDefaultFingerprintRadius = 2;

class Fingerprint {
 public:
  Fingerprint() = default;
  Fingerprint(int nbits, int radius);

  int nbits() const { return nbits_; }
  int radius() const { return radius_; }
  void set(std::uint64_t bit);
  bool test(std::uint64_t bit) const;
  int popcount() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }

 private:
  int nbits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

// Circular (Morgan-style) fingerprint: per-atom invariants are re-hashed with
// their sorted (bond, neighbour) environment `radius` times; every layer's
// identifiers are folded into nbits (a power of two).
Fingerprint morgan_fingerprint(const MolecularGraph& m,
                               int radius = kDefaultFingerprintRadius,
                               int nbits = kDefaultFingerprintBits);

// The unfolded identifiers behind morgan_fingerprint, one per (atom, layer).
std::vector<std::uint64_t> morgan_identifiers(const MolecularGraph& m, int radius);

// |a & b| / |a | b|; 1.0 when both are empty. Throws LengthMismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace leadopt::chemgraph

#endif  // LEADOPT_CHEMGRAPH_FINGERPRINT_HPP_
