// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

// Regenerates the bundled synthetic data under <dir>:
//   toy/       separable learning-to-rank set (20 queries, one informative run)
//   scenario/  five noisy correlated runs with planted relevance
// Usage: rankfuse-gen-fixtures <data-dir>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "rankfuse/run.hpp"

namespace {

constexpr std::uint64_t kToySeed = 7;
constexpr std::uint64_t kScenarioSeed = 20261016;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller; portable across standard libraries unlike std::normal_distribution.
double normal(std::mt19937_64& rng, double sigma) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::string id(const char* prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, n);
  return buf;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Scores are quantized to the 6-decimal file precision before canonicalizing
// so that re-reading the file reproduces the same order.
double quantize(double x) { return std::round(x * 1e6) / 1e6; }

void make_toy(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(kToySeed);
  const char* tags[] = {"firststage", "ckpt1", "ckpt2", "ckpt3"};
  std::vector<rankfuse::RunList> runs(4);
  for (int r = 0; r < 4; ++r) runs[r].system_id = tags[r];
  std::string qrels;
  for (int q = 1; q <= 20; ++q) {
    const std::string qid = id("t", q, 2);
    const int relevant_count = q % 4 == 0 ? 2 : 1;
    for (int d = 0; d < 6; ++d) {
      const std::string doc = qid + "_" + id("d", d, 1);
      // Relevant docs sort last by doc_id, so score ties do not favor them.
      const bool rel = d >= 6 - relevant_count;
      qrels += qid + " 0 " + doc + " " + (rel ? "1" : "0") + "\n";
      // firststage, ckpt2 and ckpt3 are noise; ckpt1 is the label itself.
      const double scores[] = {quantize(uniform01(rng) * 10.0), rel ? 1.0 : 0.0, quantize(uniform01(rng)),
                               quantize(uniform01(rng))};
      for (int r = 0; r < 4; ++r) runs[r].queries[qid].push_back({qid, doc, 1, scores[r], tags[r]});
    }
  }
  for (int r = 0; r < 4; ++r) {
    write(dir / (std::string(tags[r]) + ".trec"), rankfuse::write_run(rankfuse::canonicalize(runs[r]), tags[r]));
  }
  write(dir / "qrels.txt", qrels);
}

void make_scenario(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(kScenarioSeed);
  constexpr int kQueries = 60, kDocs = 40, kRuns = 5;
  constexpr double kShared = 0.5;
  const double individual[kRuns] = {0.8, 0.9, 1.0, 1.1, 1.2};
  const char* tags[kRuns] = {"sysA", "sysB", "sysC", "sysD", "sysE"};

  std::vector<rankfuse::RunList> runs(kRuns);
  for (int r = 0; r < kRuns; ++r) runs[r].system_id = tags[r];
  std::string train_qrels, test_qrels;
  for (int q = 1; q <= kQueries; ++q) {
    const std::string qid = id("s", q, 3);
    const int relevant_count = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<rankfuse::RunEntry>> lists(kRuns);
    for (int d = 0; d < kDocs; ++d) {
      const std::string doc = qid + "_" + id("d", d, 2);
      const bool rel = d < relevant_count;
      (q <= kQueries / 2 ? train_qrels : test_qrels) += qid + " 0 " + doc + " " + (rel ? "1" : "0") + "\n";
      const double shared = normal(rng, kShared);
      for (int r = 0; r < kRuns; ++r) {
        const double score = quantize((rel ? 1.0 : 0.0) + shared + normal(rng, individual[r]));
        lists[r].push_back({qid, doc, 1, score, tags[r]});
      }
    }
    for (int r = 0; r < kRuns; ++r) runs[r].queries[qid] = std::move(lists[r]);
  }
  for (int r = 0; r < kRuns; ++r) {
    auto run = rankfuse::canonicalize(runs[r]);
    write(dir / (std::string(tags[r]) + ".trec"), rankfuse::write_run(run, tags[r]));
  }
  write(dir / "qrels_train.txt", train_qrels);
  write(dir / "qrels_test.txt", test_qrels);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2 || argv[1][0] == '-') {
    std::cerr << "usage: " << argv[0] << " <data-dir>\n";
    return 2;
  }
  const std::filesystem::path root(argv[1]);
  make_toy(root / "toy");
  make_scenario(root / "scenario");
  return 0;
}
