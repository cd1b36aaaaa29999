// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "rankfuse/run.hpp"

namespace rankfuse {

using RelevantSet = std::set<std::string, std::less<>>;

/// Average precision with the trec_eval denominator: the number of judged
/// relevant documents, retrieved or not. Returns 0 for an empty ranking or an
/// empty relevant set.
double average_precision(std::span<const std::string> ranking, const RelevantSet& relevant);

/// 1/rank of the first relevant document, or 0 when there is none within
/// `cutoff` (unbounded when nullopt).
double reciprocal_rank(std::span<const std::string> ranking, const RelevantSet& relevant,
                       std::optional<std::size_t> cutoff = std::nullopt);

struct QueryMetrics {
  double ap = 0.0;
  double rr = 0.0;
  double rr_at_k = 0.0;

  bool operator==(const QueryMetrics&) const = default;
};

struct MetricReport {
  double map_score = 0.0;
  double mrr = 0.0;
  double mrr_at_k = 0.0;
  std::size_t cutoff = 10;
  std::map<std::string, QueryMetrics> per_query;
};

/// Evaluates a canonical run. Aggregates over qrels queries with at least one
/// relevant document; such queries missing from the run score 0. Throws
/// ValidationError when no query is evaluable.
MetricReport evaluate(const RunList& run, const Qrels& qrels, std::size_t cutoff = 10);

/// Per-query metrics for one list of entries.
QueryMetrics evaluate_query(const std::vector<RunEntry>* entries, const RelevantSet& relevant,
                            std::size_t cutoff);

}  // namespace rankfuse
