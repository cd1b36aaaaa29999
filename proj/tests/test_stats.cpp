// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "json.hpp"
#include "oracle/oracle.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/stats.hpp"

namespace rankfuse::stats {
namespace {

// Builds a run per query from a fixed doc list, putting the relevant doc "r"
// at the given 1-based rank.
RunList run_with_ranks(const std::string& system, const std::vector<int>& rel_rank) {
  RunList run;
  run.system_id = system;
  for (std::size_t q = 0; q < rel_rank.size(); ++q) {
    const std::string qid = "q" + std::to_string(q);
    for (int p = 1; p <= 10; ++p) {
      const std::string doc = p == rel_rank[q] ? "r" : "n" + std::to_string(p);
      run.queries[qid].push_back({qid, doc, p, 10.0 - p, system});
    }
  }
  return run;
}

Qrels qrels_for(std::size_t n) {
  Qrels q;
  for (std::size_t i = 0; i < n; ++i) q.judgments["q" + std::to_string(i)]["r"] = 1;
  return q;
}

TEST(PairedTest, IdenticalRunsGivePOne) {
  const auto a = run_with_ranks("a", {1, 3, 2, 5, 4});
  const auto r = paired_randomization_test(a, a, qrels_for(5), Metric::ap, 1000, 3);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.observed_mean_diff, 0.0);
  EXPECT_EQ(paired_exact_test(a, a, qrels_for(5), Metric::rr).p_value, 1.0);
}

TEST(PairedTest, PlantedImprovementIsSignificant) {
  // AP 0.2 (rank 5) against 0.1 (rank 10) on all 20 queries.
  const auto a = run_with_ranks("a", std::vector<int>(20, 10));
  const auto b = run_with_ranks("b", std::vector<int>(20, 5));
  const auto r = paired_randomization_test(a, b, qrels_for(20), Metric::ap, 10000, 1);
  EXPECT_LE(r.p_value, 0.001);
  EXPECT_NEAR(r.observed_mean_diff, 0.1, 1e-12);
  EXPECT_EQ(paired_exact_test(a, b, qrels_for(20), Metric::ap).p_value, 2.0 / 1048576.0);
}

TEST(PairedTest, SwapSymmetry) {
  const auto a = run_with_ranks("a", {1, 3, 2, 5, 4, 1, 2, 9});
  const auto b = run_with_ranks("b", {2, 1, 2, 1, 7, 1, 1, 3});
  const auto q = qrels_for(8);
  const auto ab = paired_randomization_test(a, b, q, Metric::ap, 2000, 5);
  const auto ba = paired_randomization_test(b, a, q, Metric::ap, 2000, 5);
  EXPECT_EQ(ab.p_value, ba.p_value);
  EXPECT_EQ(ab.observed_mean_diff, -ba.observed_mean_diff);
  EXPECT_EQ(paired_exact_test(a, b, q, Metric::rr).p_value, paired_exact_test(b, a, q, Metric::rr).p_value);
}

TEST(PairedTest, Reproducible) {
  std::vector<double> diffs{0.1, -0.2, 0.3, 0.05, 0.0, 0.4, -0.1};
  const auto x = randomization_test(diffs, 5000, 42);
  const auto y = randomization_test(diffs, 5000, 42);
  EXPECT_EQ(x.p_value, y.p_value);
  EXPECT_GT(x.p_value, 0.0);
  EXPECT_LE(x.p_value, 1.0);
}

TEST(PairedTest, MatchesIndependentResampler) {
  // Re-derives every resample from the documented seed scheme.
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-0.5, 0.7);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> d(3 + gen() % 70);
    for (auto& x : d) x = u(gen);
    const std::uint64_t seed = gen();
    const std::size_t iters = 500;
    double obs = 0;
    for (double x : d) obs += x;
    obs = std::fabs(obs / static_cast<double>(d.size()));
    std::size_t exceed = 0;
    for (std::size_t k = 0; k < iters; ++k) {
      std::mt19937_64 rng(splitmix(seed + k));
      std::uint64_t word = 0;
      double s = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (i % 64 == 0) word = rng();
        s += ((word >> (i % 64)) & 1) ? -d[i] : d[i];
      }
      if (std::fabs(s / static_cast<double>(d.size())) >= obs - 1e-12) ++exceed;
    }
    EXPECT_EQ(randomization_test(d, iters, seed).p_value,
              static_cast<double>(exceed + 1) / static_cast<double>(iters + 1));
    EXPECT_EQ(resample_seed(seed, 3), splitmix(seed + 3));
  }
}

TEST(ExactTest, MatchesEnumerationOracle) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 40; ++t) {
    std::vector<double> d(1 + gen() % 12);
    for (auto& x : d) x = static_cast<double>(static_cast<int>(gen() % 21) - 10) / 10.0;
    EXPECT_EQ(exact_randomization_test(d).p_value, oracle::exact_sign_flip_p(d));
  }
  EXPECT_EQ(exact_randomization_test(std::vector<double>{0.1, 0.2, -0.3}).iterations, 8u);
}

TEST(ExactTest, MonteCarloAgreesOnTwelveQueries) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-0.3, 0.5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> d(12);
    for (auto& x : d) x = u(gen);
    const double exact = exact_randomization_test(d).p_value;
    EXPECT_NEAR(randomization_test(d, 10000, gen()).p_value, exact, 0.02);
  }
}

TEST(ExactTest, ZeroDiffQueryDoesNotChangeP) {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> d(2 + gen() % 10);
    for (auto& x : d) x = static_cast<double>(static_cast<int>(gen() % 11) - 5) / 10.0;
    const double p = exact_randomization_test(d).p_value;
    d.push_back(0.0);
    EXPECT_EQ(exact_randomization_test(d).p_value, p);
  }
}

TEST(PairedTest, QueryOrderInvariance) {
  std::vector<double> d{0.1, -0.2, 0.3, 0.05, 0.0, 0.4, -0.1, 0.2};
  auto rev = d;
  std::reverse(rev.begin(), rev.end());
  EXPECT_EQ(exact_randomization_test(d).p_value, exact_randomization_test(rev).p_value);
}

TEST(PairedTest, Errors) {
  const auto a = run_with_ranks("a", {1});
  EXPECT_THROW(paired_randomization_test(a, a, qrels_for(0), Metric::ap), ValidationError);
  Qrels other;
  other.judgments["zz"]["r"] = 1;
  EXPECT_THROW(paired_randomization_test(a, a, other, Metric::ap), ValidationError);
  EXPECT_THROW(randomization_test(std::vector<double>{}, 10, 0), ValidationError);
  EXPECT_THROW(randomization_test(std::vector<double>{1.0}, 0, 0), ValidationError);
  EXPECT_THROW(exact_randomization_test(std::vector<double>(21, 0.1)), ValidationError);
}

TEST(PairedDifferences, CommonEvaluableQueries) {
  auto a = run_with_ranks("a", {1, 2, 4});
  auto b = run_with_ranks("b", {2, 2, 1});
  b.queries.erase("q1");
  auto q = qrels_for(3);
  q.judgments["q9"]["r"] = 1;
  const auto d = paired_differences(a, b, q, Metric::rr);
  EXPECT_EQ(d.query_ids, (std::vector<std::string>{"q0", "q2"}));
  EXPECT_DOUBLE_EQ(d.diffs[0], 0.5 - 1.0);
  EXPECT_DOUBLE_EQ(d.diffs[1], 1.0 - 0.25);
  const auto dk = paired_differences(a, b, q, Metric::rr_at_k, 3);
  EXPECT_DOUBLE_EQ(dk.diffs[1], 1.0);
}

TEST(PairedTest, Output) {
  const auto r = exact_randomization_test(std::vector<double>{0.5, 0.5});
  const auto doc = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(doc.at("p_value").get<double>(), 0.5);
  EXPECT_TRUE(doc.at("exact").get<bool>());
  EXPECT_NE(to_text(r).find("p=0.5"), std::string::npos);
  EXPECT_EQ(parse_metric("rr_at_k"), Metric::rr_at_k);
  EXPECT_FALSE(parse_metric("ndcg"));
}

}  // namespace
}  // namespace rankfuse::stats
