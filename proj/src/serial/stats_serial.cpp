// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/error.hpp"
#include "rankfuse/serial.hpp"
#include "stats_detail.hpp"

namespace rankfuse::serial {

stats::PairedTestResult randomization_test(std::span<const double> diffs, std::size_t iterations,
                                           std::uint64_t seed) {
  if (diffs.empty()) throw ValidationError("paired test: no differences");
  if (iterations == 0) throw ValidationError("paired test: iterations must be positive");
  const double observed = detail::abs_mean(diffs);
  std::size_t exceed = 0;
  for (std::size_t t = 0; t < iterations; ++t) {
    std::mt19937_64 rng(stats::resample_seed(seed, t));
    if (detail::flipped_abs_mean(diffs, rng) >= observed - detail::kExceedanceSlack) ++exceed;
  }
  double sum = 0.0;
  for (double d : diffs) sum += d;

  stats::PairedTestResult r;
  r.observed_mean_diff = sum / static_cast<double>(diffs.size());
  r.p_value = static_cast<double>(exceed + 1) / static_cast<double>(iterations + 1);
  r.iterations = iterations;
  r.seed = seed;
  r.queries = diffs.size();
  return r;
}

}  // namespace rankfuse::serial
