// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "rankfuse/stats.hpp"

namespace rankfuse::detail {

// Resampled statistics within this distance of the observed one count as
// exceeding it; sign patterns with equal exact |mean| can round differently.
inline constexpr double kExceedanceSlack = 1e-12;

inline double abs_mean(std::span<const double> diffs) {
  double sum = 0.0;
  for (double d : diffs) sum += d;
  return std::fabs(sum / static_cast<double>(diffs.size()));
}

/// |mean| of the diffs with query i negated when bit i of its word is set.
inline double flipped_abs_mean(std::span<const double> diffs, std::mt19937_64& rng) {
  double sum = 0.0;
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (i % 64 == 0) word = rng();
    sum += ((word >> (i % 64)) & 1U) ? -diffs[i] : diffs[i];
  }
  return std::fabs(sum / static_cast<double>(diffs.size()));
}

}  // namespace rankfuse::detail
