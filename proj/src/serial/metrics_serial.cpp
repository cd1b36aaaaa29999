// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/error.hpp"
#include "rankfuse/serial.hpp"

namespace rankfuse::serial {

MetricReport evaluate(const RunList& run, const Qrels& qrels, std::size_t cutoff) {
  if (cutoff == 0) throw ValidationError("evaluate: cutoff must be positive");
  MetricReport report;
  report.cutoff = cutoff;
  double ap = 0.0, rr = 0.0, rrk = 0.0;
  for (const auto& qid : qrels.evaluable_queries()) {
    const auto m = evaluate_query(run.find(qid), qrels.relevant(qid), cutoff);
    ap += m.ap;
    rr += m.rr;
    rrk += m.rr_at_k;
    report.per_query.emplace(qid, m);
  }
  if (report.per_query.empty()) throw ValidationError("evaluate: qrels contain no query with a relevant document");
  const double n = static_cast<double>(report.per_query.size());
  report.map_score = ap / n;
  report.mrr = rr / n;
  report.mrr_at_k = rrk / n;
  return report;
}

}  // namespace rankfuse::serial
