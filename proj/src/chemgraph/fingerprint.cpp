// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "chemgraph/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace leadopt::chemgraph {

Fingerprint::Fingerprint(int nbits, int radius)
    : nbits_(nbits), radius_(radius), words_(static_cast<std::size_t>((nbits + 63) / 64), 0) {}

void Fingerprint::set(std::uint64_t bit) { words_[bit >> 6] |= (1ULL << (bit & 63)); }

bool Fingerprint::test(std::uint64_t bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1ULL; }

int Fingerprint::popcount() const {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::vector<std::uint64_t> morgan_identifiers(const MolecularGraph& m, int radius) {
  const std::size_t n = m.num_atoms();
  std::vector<std::uint64_t> ids;
  ids.reserve(n * static_cast<std::size_t>(radius + 1));
  std::vector<std::uint64_t> current(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = m.atom(static_cast<int>(i));
    std::uint64_t h = 0;  // seed
    h = hash_combine(h, static_cast<std::uint64_t>(a.element));
    h = hash_combine(h, static_cast<std::uint64_t>(m.degree(static_cast<int>(i))));
    h = hash_combine(h, static_cast<std::uint64_t>(a.hydrogens));
    h = hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(a.charge) + 16));
    h = hash_combine(h, a.in_ring ? 1u : 0u);
    h = hash_combine(h, a.aromatic ? 1u : 0u);
    current[i] = h;
    ids.push_back(h);
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int layer = 1; layer <= radius; ++layer) {
    for (std::size_t i = 0; i < n; ++i) {
      env.clear();
      for (const auto& nb : m.neighbors(static_cast<int>(i))) {
        const Bond& b = m.bond(nb.bond);
        const std::uint64_t code = b.aromatic ? 4u : static_cast<std::uint64_t>(b.kekule_order);
        env.emplace_back(code, current[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = hash_combine(static_cast<std::uint64_t>(layer), current[i]);
      for (const auto& [code, id] : env) {
        h = hash_combine(h, code);
        h = hash_combine(h, id);
      }
      next[i] = h;
      ids.push_back(h);
    }
    std::swap(current, next);
  }
  return ids;
}

Fingerprint morgan_fingerprint(const MolecularGraph& m, int radius, int nbits) {
  if (radius < 0) fail(ErrorCode::kInvalidArgument, "fingerprint radius must be >= 0");
  if (nbits <= 0 || (nbits & (nbits - 1)) != 0) {
    fail(ErrorCode::kInvalidArgument, "fingerprint length must be a power of two");
  }
  Fingerprint fp(nbits, radius);
  const std::uint64_t mask = static_cast<std::uint64_t>(nbits) - 1;
  for (auto id : morgan_identifiers(m, radius)) fp.set(id & mask);
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.nbits() != b.nbits()) {
    fail(ErrorCode::kLengthMismatch, "fingerprint lengths differ: " + std::to_string(a.nbits()) +
                                         " vs " + std::to_string(b.nbits()));
  }
  int both = 0;
  int either = 0;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    both += std::popcount(wa[i] & wb[i]);
    either += std::popcount(wa[i] | wb[i]);
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace leadopt::chemgraph
