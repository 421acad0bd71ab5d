// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_LEADS_HPP_
#define LEADOPT_BENCH_LEADS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "policy/edits.hpp"

namespace leadopt::bench {

struct LeadSpec {
  double logp_min = -1.0;  // logp_proxy band for generated leads
  double logp_max = 1.0;
  int min_heavy = 8;
  int max_heavy = 22;
  int max_edits = 4;  // random edits applied to a scaffold
};

struct LeadSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Distinct canonical leads grown from built-in polar scaffolds by random
// edits. Training and test leads come from one stream, so they never
// overlap.
LeadSplit generate_leads(const LeadSpec& spec, std::size_t train, std::size_t test, std::uint64_t seed,
                         const policy::FragmentLibrary& library);

// One SMILES per line; blank lines and '#' comments are skipped. Each line
// is validated.
std::vector<std::string> read_leads(const std::string& path);

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_LEADS_HPP_
