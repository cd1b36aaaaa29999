// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/stats.hpp"

#include <cstdio>

#include "json.hpp"
#include "random.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/metrics.hpp"
#include "stats_detail.hpp"

namespace rankfuse::stats {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::ap: return "ap";
    case Metric::rr: return "rr";
    case Metric::rr_at_k: return "rr_at_k";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "ap") return Metric::ap;
  if (name == "rr") return Metric::rr;
  if (name == "rr_at_k") return Metric::rr_at_k;
  return std::nullopt;
}

namespace {

double pick(const QueryMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::ap: return m.ap;
    case Metric::rr: return m.rr;
    case Metric::rr_at_k: return m.rr_at_k;
  }
  return 0.0;
}

}  // namespace

PairedDifferences paired_differences(const RunList& run_a, const RunList& run_b, const Qrels& qrels,
                                     Metric metric, std::size_t cutoff) {
  PairedDifferences out;
  for (const auto& qid : qrels.evaluable_queries()) {
    const auto* a = run_a.find(qid);
    const auto* b = run_b.find(qid);
    if (a == nullptr || b == nullptr) continue;
    const auto relevant = qrels.relevant(qid);
    const double ma = pick(evaluate_query(a, relevant, cutoff), metric);
    const double mb = pick(evaluate_query(b, relevant, cutoff), metric);
    out.query_ids.push_back(qid);
    out.diffs.push_back(mb - ma);
  }
  if (out.diffs.empty()) throw ValidationError("paired test: the runs share no evaluable query");
  return out;
}

std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t t) { return detail::splitmix64(seed + t); }

PairedTestResult randomization_test(std::span<const double> diffs, std::size_t iterations,
                                    std::uint64_t seed) {
  if (diffs.empty()) throw ValidationError("paired test: no differences");
  if (iterations == 0) throw ValidationError("paired test: iterations must be positive");
  const double observed = detail::abs_mean(diffs);
  double sum = 0.0;
  for (double d : diffs) sum += d;

  long long exceed = 0;
  const auto n = static_cast<long long>(iterations);
#pragma omp parallel for schedule(static) reduction(+ : exceed)
  for (long long t = 0; t < n; ++t) {
    std::mt19937_64 rng(resample_seed(seed, static_cast<std::uint64_t>(t)));
    if (detail::flipped_abs_mean(diffs, rng) >= observed - detail::kExceedanceSlack) ++exceed;
  }

  PairedTestResult r;
  r.observed_mean_diff = sum / static_cast<double>(diffs.size());
  r.p_value = static_cast<double>(exceed + 1) / static_cast<double>(iterations + 1);
  r.iterations = iterations;
  r.seed = seed;
  r.queries = diffs.size();
  return r;
}

PairedTestResult exact_randomization_test(std::span<const double> diffs) {
  if (diffs.empty()) throw ValidationError("paired test: no differences");
  if (diffs.size() > kMaxExactQueries) {
    throw ValidationError("exact paired test supports at most " + std::to_string(kMaxExactQueries) +
                          " queries, got " + std::to_string(diffs.size()));
  }
  const double observed = detail::abs_mean(diffs);
  double sum = 0.0;
  for (double d : diffs) sum += d;

  const long long patterns = 1LL << diffs.size();
  long long exceed = 0;
#pragma omp parallel for schedule(static) reduction(+ : exceed)
  for (long long mask = 0; mask < patterns; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) s += ((mask >> i) & 1) ? -diffs[i] : diffs[i];
    if (std::fabs(s / static_cast<double>(diffs.size())) >= observed - detail::kExceedanceSlack) ++exceed;
  }

  PairedTestResult r;
  r.observed_mean_diff = sum / static_cast<double>(diffs.size());
  r.p_value = static_cast<double>(exceed) / static_cast<double>(patterns);
  r.iterations = static_cast<std::size_t>(patterns);
  r.queries = diffs.size();
  r.exact = true;
  return r;
}

PairedTestResult paired_randomization_test(const RunList& run_a, const RunList& run_b,
                                           const Qrels& qrels, Metric metric, std::size_t iterations,
                                           std::uint64_t seed, std::size_t cutoff) {
  const auto d = paired_differences(run_a, run_b, qrels, metric, cutoff);
  auto r = randomization_test(d.diffs, iterations, seed);
  r.metric = metric;
  return r;
}

PairedTestResult paired_exact_test(const RunList& run_a, const RunList& run_b, const Qrels& qrels,
                                   Metric metric, std::size_t cutoff) {
  const auto d = paired_differences(run_a, run_b, qrels, metric, cutoff);
  auto r = exact_randomization_test(d.diffs);
  r.metric = metric;
  return r;
}

std::string to_text(const PairedTestResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "metric=%s queries=%zu mean_diff=%.6f p=%.6g %s=%zu%s",
                std::string(to_string(r.metric)).c_str(), r.queries, r.observed_mean_diff, r.p_value,
                r.exact ? "patterns" : "iterations", r.iterations,
                r.exact ? "" : (" seed=" + std::to_string(r.seed)).c_str());
  return buf;
}

std::string to_json(const PairedTestResult& r) {
  nlohmann::ordered_json doc;
  doc["metric"] = std::string(to_string(r.metric));
  doc["queries"] = r.queries;
  doc["observed_mean_diff"] = r.observed_mean_diff;
  doc["p_value"] = r.p_value;
  doc["exact"] = r.exact;
  doc["iterations"] = r.iterations;
  doc["seed"] = r.seed;
  return doc.dump();
}

}  // namespace rankfuse::stats
