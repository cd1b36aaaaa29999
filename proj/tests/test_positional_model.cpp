// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracle/oracle.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/positional_model.hpp"

namespace rankfuse {
namespace {

RunList lists(const std::string& system, const std::map<std::string, std::vector<std::string>>& by_query) {
  RunList run;
  run.system_id = system;
  for (const auto& [q, docs] : by_query)
    for (std::size_t i = 0; i < docs.size(); ++i)
      run.queries[q].push_back({q, docs[i], static_cast<int>(i + 1), -static_cast<double>(i), system});
  return run;
}

TEST(PositionalModel, HalfAtTop) {
  const auto run = lists("A", {{"q1", {"r", "x"}}, {"q2", {"x", "r"}}, {"q3", {"r"}}, {"q4", {"y"}}});
  const auto qrels = parse_qrels("q1 0 r 1\nq2 0 r 1\nq3 0 z 1\nq4 0 z 1\n");
  const auto m = estimate_positional_relevance({run}, qrels);
  const auto& a = m.at("A");
  ASSERT_EQ(a.probs.size(), 2u);
  EXPECT_DOUBLE_EQ(a.probs[0], 0.25);
  EXPECT_EQ(a.support, (std::vector<std::size_t>{4, 2}));
  EXPECT_DOUBLE_EQ(a.probs[1], 0.5);

  const auto run2 = lists("A", {{"q1", {"r", "x"}}, {"q2", {"r", "x"}}, {"q3", {"y", "x"}}, {"q4", {"y", "x"}}});
  const auto qrels2 = parse_qrels("q1 0 r 1\nq2 0 r 1\nq3 0 z 1\nq4 0 z 1\n");
  EXPECT_DOUBLE_EQ(estimate_positional_relevance({run2}, qrels2).at("A").probs[0], 0.5);
}

TEST(PositionalModel, EmptySupportAndUpperBound) {
  const auto train = lists("A", {{"q1", {"r"}}, {"q2", {"s"}}});
  const auto deep = lists("A", {{"q1", {"r", "a", "b", "c", "d", "e"}}, {"q9", {"r"}}});
  const auto qrels = parse_qrels("q1 0 r 1\nq2 0 s 1\n");
  const auto m = estimate_positional_relevance({train}, qrels);
  EXPECT_DOUBLE_EQ(m.at("A").probs[0], 1.0);

  // q9 is not a training query, so positions past q1's depth stay unsupported.
  const auto m2 = estimate_positional_relevance({deep}, parse_qrels("q1 0 r 1\nq2 0 z 1\n"));
  EXPECT_EQ(m2.at("A").probs.size(), 6u);
  EXPECT_EQ(m2.at("A").support[5], 1u);
  const auto m3 = estimate_positional_relevance({lists("A", {{"q1", {"r"}}})}, parse_qrels("q1 0 r 1\n"));
  EXPECT_EQ(m3.at("A").probs.size(), 1u);
}

TEST(PositionalModel, Errors) {
  const auto run = lists("A", {{"q1", {"r"}}});
  EXPECT_THROW(estimate_positional_relevance({}, parse_qrels("q1 0 r 1\n")), ValidationError);
  EXPECT_THROW(estimate_positional_relevance({run}, Qrels{}), ValidationError);
  EXPECT_THROW(estimate_positional_relevance({run, run}, parse_qrels("q1 0 r 1\n")), ValidationError);
}

TEST(PositionalModel, MatchesRecount) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto inst = oracle::random_instance(seed);
    const auto m = estimate_positional_relevance(inst.training_runs, inst.training_qrels);
    for (const auto& r : inst.training_runs) {
      const auto want = oracle::positional(r, inst.training_qrels);
      const auto& got = m.at(r.system_id);
      EXPECT_EQ(got.probs, want.probs) << seed;
      EXPECT_EQ(got.support, want.support) << seed;
      for (std::size_t i = 0; i < got.probs.size(); ++i) {
        EXPECT_GE(got.probs[i], 0.0);
        EXPECT_LE(got.probs[i], 1.0);
        if (got.support[i] == 0) EXPECT_EQ(got.probs[i], 0.0);
      }
    }
  }
}

TEST(PositionalModel, WindowedMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = oracle::random_instance(seed);
    const auto m = estimate_positional_relevance(inst.training_runs, inst.training_qrels);
    for (const auto& r : inst.training_runs) {
      const auto o = oracle::positional(r, inst.training_qrels);
      const std::size_t n = o.probs.size() + 3;
      for (std::size_t w = 0; w < 5; ++w)
        for (std::size_t i = 0; i < n; ++i)
          EXPECT_EQ(windowed_probability(m, r.system_id, i, w, n),
                    oracle::windowed(o, static_cast<long>(i), static_cast<long>(w), static_cast<long>(n)));
    }
  }
}

TEST(PositionalModel, JsonRoundTrip) {
  const auto inst = oracle::random_instance(9);
  const auto m = estimate_positional_relevance(inst.training_runs, inst.training_qrels);
  const auto text = positional_model_to_json(m);
  const auto back = positional_model_from_json(text);
  EXPECT_EQ(back, m);
  EXPECT_EQ(positional_model_to_json(back), text);
}

TEST(PositionalModel, JsonRejectsBadDocuments) {
  EXPECT_THROW(positional_model_from_json("{"), ValidationError);
  EXPECT_THROW(positional_model_from_json(R"({"version":2,"systems":{}})"), ValidationError);
  EXPECT_THROW(positional_model_from_json(R"({"version":1,"systems":{"A":{"probs":[0.5],"support":[]}}})"),
               ValidationError);
  EXPECT_THROW(positional_model_from_json(R"({"version":1,"systems":{"A":{"probs":[1.5],"support":[1]}}})"),
               ValidationError);
  EXPECT_THROW(positional_model_from_json(R"({"version":1,"systems":{"A":{"probs":[0.5],"support":[0]}}})"),
               ValidationError);
  EXPECT_NO_THROW(positional_model_from_json(R"({"version":1,"systems":{"A":{"probs":[0.5,0],"support":[2,0]}}})"));
}

}  // namespace
}  // namespace rankfuse
