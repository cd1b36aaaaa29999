// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rankfuse/fusion.hpp"
#include "rankfuse/metrics.hpp"
#include "rankfuse/parallel.hpp"
#include "rankfuse/serial.hpp"
#include "rankfuse/stats.hpp"

namespace {

using namespace rankfuse;

std::string name(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04d", prefix, i);
  return buf;
}

struct Workload {
  std::vector<RunList> runs;
  Qrels qrels;
  PositionalRelevanceModel model;
  SystemWeights weights;
};

const Workload& workload(int queries) {
  static std::map<int, Workload> cache;
  auto [it, fresh] = cache.try_emplace(queries);
  if (!fresh) return it->second;
  Workload& w = it->second;
  std::mt19937_64 rng(17);
  for (int r = 0; r < 5; ++r) {
    RunList run;
    run.system_id = name("sys", r);
    for (int q = 0; q < queries; ++q) {
      const std::string qid = name("q", q);
      for (int d = 0; d < 100; ++d)
        run.queries[qid].push_back({qid, name("d", static_cast<int>(rng() % 400)), 1,
                                    static_cast<double>(rng() % 100000) / 1000.0, run.system_id});
      auto& list = run.queries[qid];
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
      list.erase(std::unique(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.doc_id == b.doc_id; }),
                 list.end());
    }
    w.runs.push_back(canonicalize(std::move(run)));
  }
  for (int q = 0; q < queries; ++q)
    for (int d = 0; d < 400; d += 1 + static_cast<int>(rng() % 20)) w.qrels.judgments[name("q", q)][name("d", d)] = 1;
  w.model = estimate_positional_relevance(w.runs, w.qrels);
  w.weights = compute_weights(w.runs, w.qrels);
  return w;
}

FusionConfig config(std::int64_t method) {
  FusionConfig cfg;
  cfg.method = static_cast<FusionMethod>(method);
  cfg.window = 5;
  return cfg;
}

void BM_FuseParallel(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(1)));
  const auto cfg = config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fuse(w.runs, cfg, &w.model, &w.weights));
}

void BM_FuseSerial(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(1)));
  const auto cfg = config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::fuse(w.runs, cfg, &w.model, &w.weights));
}

void fuse_args(benchmark::internal::Benchmark* b) {
  for (auto m : {FusionMethod::rrf, FusionMethod::mapslidefuse})
    for (int q : {50, 500}) b->Args({static_cast<std::int64_t>(m), q});
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(w.runs[0], w.qrels));
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto& w = workload(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate(w.runs[0], w.qrels));
}

std::vector<double> diffs(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.4);
  std::vector<double> d(n);
  for (auto& x : d) x = u(rng);
  return d;
}

void BM_RandomizationParallel(benchmark::State& state) {
  const auto d = diffs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stats::randomization_test(d, 10000, 1));
}

void BM_RandomizationSerial(benchmark::State& state) {
  const auto d = diffs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::randomization_test(d, 10000, 1));
}

}  // namespace

BENCHMARK(BM_FuseSerial)->Apply(fuse_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuseParallel)->Apply(fuse_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomizationSerial)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomizationParallel)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  rankfuse::set_thread_count(rankfuse::threads_from_env().value_or(0));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
