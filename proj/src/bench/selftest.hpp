// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_BENCH_SELFTEST_HPP_
#define LEADOPT_BENCH_SELFTEST_HPP_

#include <functional>
#include <string>
#include <vector>

namespace leadopt::bench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant checks over every module, in a fixed order. Each result is
// passed to `on_check` as soon as it is known.
std::vector<CheckResult> run_selftest(const std::function<void(const CheckResult&)>& on_check = {});

}  // namespace leadopt::bench

#endif  // LEADOPT_BENCH_SELFTEST_HPP_
