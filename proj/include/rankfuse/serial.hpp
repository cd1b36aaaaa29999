// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Single-threaded reference versions of the parallel kernels. They follow the
// same contracts (including the summation rule and the per-resample seeds) and
// must produce identical results; tests and the benchmark compare against them.

#include <cstdint>
#include <span>

#include "rankfuse/fusion.hpp"
#include "rankfuse/metrics.hpp"
#include "rankfuse/stats.hpp"

namespace rankfuse::serial {

RunList fuse(const std::vector<RunList>& runs, const FusionConfig& cfg,
             const PositionalRelevanceModel* model = nullptr, const SystemWeights* weights = nullptr);

MetricReport evaluate(const RunList& run, const Qrels& qrels, std::size_t cutoff = 10);

stats::PairedTestResult randomization_test(std::span<const double> diffs, std::size_t iterations,
                                           std::uint64_t seed);

}  // namespace rankfuse::serial
