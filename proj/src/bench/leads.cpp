// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bench/leads.hpp"

#include <fstream>
#include <set>

#include "chemgraph/smiles.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "env/environment.hpp"
#include "oracle/properties.hpp"

namespace leadopt::bench {

namespace {

constexpr const char* kScaffolds[] = {
    "CC(=O)Nc1ccc(O)cc1",  "OC(=O)c1ccccc1O",   "NC(=O)c1cccnc1",     "OCC(O)CO",
    "CN1CCNCC1",           "OC1CCNCC1",         "OCCN1CCOCC1",        "NC(=O)CC(N)C(=O)O",
    "Nc1ncnc2nc[nH]c12",   "O=C1NC(=O)C=CN1",   "OC(=O)CNC(=O)c1ccccc1", "NS(=O)(=O)c1ccc(N)cc1",
    "CC(O)C(=O)O",         "OCc1ccc(CO)o1",     "NC(=O)N",            "O=C(O)CCC(=O)O",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "OC1COC(CO)C1O", "NCCc1ccc(O)c(O)c1", "OC(=O)c1ccncc1",
};

}  // namespace

LeadSplit generate_leads(const LeadSpec& spec, std::size_t train, std::size_t test, std::uint64_t seed,
                         const policy::FragmentLibrary& library) {
  if (spec.logp_min > spec.logp_max || spec.min_heavy > spec.max_heavy || spec.max_edits < 0) {
    fail(ErrorCode::kConfigError, "lead band is empty");
  }
  std::vector<chemgraph::MolecularGraph> scaffolds;
  for (const char* s : kScaffolds) scaffolds.push_back(chemgraph::parse_smiles(s));

  const std::size_t want = train + test;
  std::vector<std::string> leads;
  std::set<std::string> seen;
  Rng rng(derive_seed(seed, {0x6c656164ULL}));
  const std::size_t max_attempts = 2000 * (want + 1);
  for (std::size_t attempt = 0; leads.size() < want; ++attempt) {
    if (attempt >= max_attempts) {
      fail(ErrorCode::kConfigError, "could only generate " + std::to_string(leads.size()) + " of " +
                                        std::to_string(want) + " leads in the requested band");
    }
    chemgraph::MolecularGraph m = scaffolds[rng.below(scaffolds.size())];
    const auto edits = rng.below(static_cast<std::size_t>(spec.max_edits) + 1);
    for (std::size_t k = 0; k < edits; ++k) {
      auto options = policy::enumerate_edits(m, library);
      options.pop_back();
      if (options.empty()) break;
      try {
        m = policy::apply_edit(m, options[rng.below(options.size())], library);
      } catch (const Error&) {
      }
    }
    const int heavy = m.heavy_atom_count();
    if (heavy < spec.min_heavy || heavy > spec.max_heavy) continue;
    const double lp = oracle::logp_proxy(m);
    if (lp < spec.logp_min || lp > spec.logp_max) continue;
    if (env::structural_guard(m, 10)) continue;
    std::string canonical = chemgraph::canonicalize(m);
    if (!seen.insert(canonical).second) continue;
    leads.push_back(std::move(canonical));
  }
  LeadSplit out;
  out.train.assign(leads.begin(), leads.begin() + static_cast<std::ptrdiff_t>(train));
  out.test.assign(leads.begin() + static_cast<std::ptrdiff_t>(train), leads.end());
  return out;
}

std::vector<std::string> read_leads(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open leads file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string smiles = line.substr(first, last - first + 1);
    if (const auto ws = smiles.find_first_of(" \t"); ws != std::string::npos) smiles.resize(ws);
    try {
      chemgraph::parse_smiles(smiles);
    } catch (const Error& e) {
      fail(ErrorCode::kParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(smiles));
  }
  if (out.empty()) fail(ErrorCode::kParseError, "leads file '" + path + "' has no molecules");
  return out;
}

}  // namespace leadopt::bench
