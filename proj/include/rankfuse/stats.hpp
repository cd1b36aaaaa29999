// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankfuse/run.hpp"

namespace rankfuse::stats {

enum class Metric { ap, rr, rr_at_k };

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

struct PairedTestResult {
  double observed_mean_diff = 0.0;  // mean of (b - a)
  double p_value = 1.0;
  std::size_t iterations = 0;       // resamples, or 2^n in exact mode
  std::uint64_t seed = 0;
  Metric metric = Metric::ap;
  std::size_t queries = 0;
  bool exact = false;
};

/// Per-query differences metric(b) - metric(a) over the evaluable qrels
/// queries that both runs retrieved, in ascending query_id order.
struct PairedDifferences {
  std::vector<std::string> query_ids;
  std::vector<double> diffs;
};

PairedDifferences paired_differences(const RunList& run_a, const RunList& run_b, const Qrels& qrels,
                                     Metric metric, std::size_t cutoff = 10);

/// Seed of the generator used by resample `t`: splitmix64(seed + t). Each
/// resample draws one 64-bit word per 64 queries from a mt19937_64 seeded with
/// it; bit (i mod 64) of word i/64 flips query i.
std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t t);

/// Two-sided sign-flip test on |mean(d)|, add-one smoothed:
/// p = (#{resamples with stat >= observed} + 1) / (iterations + 1).
PairedTestResult randomization_test(std::span<const double> diffs, std::size_t iterations,
                                    std::uint64_t seed);

/// All 2^n sign patterns; p = #{patterns with stat >= observed} / 2^n.
/// Throws ValidationError for n > 20.
PairedTestResult exact_randomization_test(std::span<const double> diffs);

inline constexpr std::size_t kMaxExactQueries = 20;

PairedTestResult paired_randomization_test(const RunList& run_a, const RunList& run_b,
                                           const Qrels& qrels, Metric metric,
                                           std::size_t iterations = 10000, std::uint64_t seed = 0,
                                           std::size_t cutoff = 10);

PairedTestResult paired_exact_test(const RunList& run_a, const RunList& run_b, const Qrels& qrels,
                                   Metric metric, std::size_t cutoff = 10);

std::string to_text(const PairedTestResult& result);
std::string to_json(const PairedTestResult& result);

}  // namespace rankfuse::stats
