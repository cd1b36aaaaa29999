// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/metrics.hpp"

#include <vector>

#include "rankfuse/error.hpp"

namespace rankfuse {

double average_precision(std::span<const std::string> ranking, const RelevantSet& relevant) {
  if (ranking.empty() || relevant.empty()) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (relevant.contains(ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

double reciprocal_rank(std::span<const std::string> ranking, const RelevantSet& relevant,
                       std::optional<std::size_t> cutoff) {
  std::size_t limit = ranking.size();
  if (cutoff && *cutoff < limit) limit = *cutoff;
  for (std::size_t i = 0; i < limit; ++i) {
    if (relevant.contains(ranking[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

QueryMetrics evaluate_query(const std::vector<RunEntry>* entries, const RelevantSet& relevant,
                            std::size_t cutoff) {
  if (entries == nullptr) return {};
  std::vector<std::string> ranking;
  ranking.reserve(entries->size());
  for (const auto& e : *entries) ranking.push_back(e.doc_id);
  return {average_precision(ranking, relevant), reciprocal_rank(ranking, relevant),
          reciprocal_rank(ranking, relevant, cutoff)};
}

MetricReport evaluate(const RunList& run, const Qrels& qrels, std::size_t cutoff) {
  if (cutoff == 0) throw ValidationError("evaluate: cutoff must be positive");
  const std::vector<std::string> queries = qrels.evaluable_queries();
  if (queries.empty()) throw ValidationError("evaluate: qrels contain no query with a relevant document");

  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  std::vector<QueryMetrics> results(queries.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& qid = queries[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] = evaluate_query(run.find(qid), qrels.relevant(qid), cutoff);
  }

  MetricReport report;
  report.cutoff = cutoff;
  double ap = 0.0, rr = 0.0, rrk = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    ap += results[i].ap;
    rr += results[i].rr;
    rrk += results[i].rr_at_k;
    report.per_query.emplace(queries[i], results[i]);
  }
  const double count = static_cast<double>(queries.size());
  report.map_score = ap / count;
  report.mrr = rr / count;
  report.mrr_at_k = rrk / count;
  return report;
}

}  // namespace rankfuse
