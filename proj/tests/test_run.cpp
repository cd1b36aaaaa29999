// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rankfuse/error.hpp"
#include "rankfuse/run.hpp"

namespace rankfuse {
namespace {

TEST(ParseRun, SingleLine) {
  const auto run = parse_run("q1 Q0 d7 1 12.5 tagA\n");
  ASSERT_EQ(run.queries.size(), 1u);
  const auto* q = run.find("q1");
  ASSERT_NE(q, nullptr);
  ASSERT_EQ(q->size(), 1u);
  EXPECT_EQ((*q)[0], (RunEntry{"q1", "d7", 1, 12.5, "tagA"}));
  EXPECT_EQ(run.system_id, "tagA");
}

TEST(ParseRun, EmptyStream) {
  EXPECT_TRUE(parse_run("").queries.empty());
  EXPECT_TRUE(parse_run("\n\n   \n").queries.empty());
}

TEST(ParseRun, BadScoreReportsLine) {
  try {
    parse_run("q1 Q0 d7 1 abc tagA");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_run("q1 Q0 d1 1 1.0 t\n\nq1 Q0 d7 2 nan t\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseRun, MalformedLines) {
  EXPECT_THROW(parse_run("q1 Q0 d7 1 1.0"), ParseError);
  EXPECT_THROW(parse_run("q1 Q0 d7 1 1.0 t extra"), ParseError);
  EXPECT_THROW(parse_run("q1 Q0 d7 x 1.0 t"), ParseError);
  EXPECT_THROW(parse_run("q1 Q0 d7 1.5 1.0 t"), ParseError);
  EXPECT_THROW(parse_run("q1 Q0 d7 1 inf t"), ParseError);
  EXPECT_THROW(parse_run("q1 Q0 d7 1 -inf t"), ParseError);
}

TEST(ParseRun, DuplicateDocIsValidationError) {
  EXPECT_THROW(parse_run("q1 Q0 d1 1 1.0 t\nq1 Q0 d1 2 0.5 t\n"), ValidationError);
  EXPECT_NO_THROW(parse_run("q1 Q0 d1 1 1.0 t\nq2 Q0 d1 1 0.5 t\n"));
}

TEST(ParseRun, OrdersByRankAndIgnoresQ0Column) {
  const auto run = parse_run("q1 X d2 2 0.5 t\nq1 Q0 d1 1 0.9 t\n");
  const auto& q = *run.find("q1");
  EXPECT_EQ(q[0].doc_id, "d1");
  EXPECT_EQ(q[1].doc_id, "d2");
  EXPECT_EQ(q[1].rank, 2);
}

TEST(ParseRun, TabsAndCrlf) {
  const auto run = parse_run("q1\tQ0\td1  1\t0.25 t\r\n");
  EXPECT_DOUBLE_EQ(run.find("q1")->at(0).score, 0.25);
  EXPECT_EQ(run.find("q1")->at(0).tag, "t");
}

TEST(Canonicalize, TieBreakByDocId) {
  RunList run;
  run.queries["q"] = {{"q", "d2", 1, 1.0, "t"}, {"q", "d1", 2, 1.0, "t"}};
  const auto c = canonicalize(run);
  EXPECT_EQ(c.queries.at("q")[0].doc_id, "d1");
  EXPECT_EQ(c.queries.at("q")[0].rank, 1);
  EXPECT_EQ(c.queries.at("q")[1].doc_id, "d2");
  EXPECT_EQ(c.queries.at("q")[1].rank, 2);
}

TEST(Canonicalize, SortsByScore) {
  RunList run;
  run.queries["q"] = {{"q", "d1", 1, 0.2, "t"}, {"q", "d2", 2, 0.9, "t"}};
  const auto c = canonicalize(run);
  EXPECT_EQ(c.queries.at("q")[0].doc_id, "d2");
  EXPECT_EQ(c.queries.at("q")[1].doc_id, "d1");
  EXPECT_EQ(c.queries.at("q")[1].rank, 2);
}

RunList random_run(std::mt19937_64& rng) {
  RunList run;
  run.system_id = "sys";
  const int nq = 1 + static_cast<int>(rng() % 4);
  for (int q = 0; q < nq; ++q) {
    const std::string qid = "q" + std::to_string(q);
    const int nd = 1 + static_cast<int>(rng() % 12);
    for (int d = 0; d < nd; ++d) {
      run.queries[qid].push_back(
          {qid, "d" + std::to_string(d), d + 1, static_cast<double>(rng() % 5) - 2.0, "sys"});
    }
    std::shuffle(run.queries[qid].begin(), run.queries[qid].end(), rng);
  }
  return run;
}

TEST(Canonicalize, IdempotentAndPreservesPairs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto raw = random_run(rng);
    const auto once = canonicalize(raw);
    EXPECT_EQ(canonicalize(once), once);
    for (const auto& [qid, entries] : raw.queries) {
      std::multiset<std::pair<std::string, double>> a, b;
      for (const auto& e : entries) a.insert({e.doc_id, e.score});
      for (const auto& e : once.queries.at(qid)) b.insert({e.doc_id, e.score});
      EXPECT_EQ(a, b);
      const auto& c = once.queries.at(qid);
      for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_EQ(c[k].rank, static_cast<int>(k + 1));
        if (k > 0) EXPECT_GE(c[k - 1].score, c[k].score);
      }
    }
  }
}

TEST(WriteRun, Format) {
  RunList run;
  run.queries["q1"] = {{"q1", "d7", 1, 0.5, "t"}};
  EXPECT_EQ(write_run(run, "t"), "q1 Q0 d7 1 0.500000 t\n");
  EXPECT_EQ(write_run(RunList{}, "t"), "");
}

TEST(WriteRun, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto x = canonicalize(random_run(rng));
    const auto text = write_run(x, "sys");
    const auto back = canonicalize(parse_run(text));
    EXPECT_EQ(back, x);
    EXPECT_EQ(write_run(back, "sys"), text);
  }
}

TEST(ParseQrels, Basic) {
  const auto q = parse_qrels("q1 0 d2 1");
  ASSERT_EQ(q.judgments.size(), 1u);
  EXPECT_EQ(q.judgments.at("q1").at("d2"), 1);
  EXPECT_TRUE(q.is_relevant("q1", "d2"));
  EXPECT_FALSE(q.is_relevant("q1", "d3"));
  EXPECT_TRUE(parse_qrels("").judgments.empty());
}

TEST(ParseQrels, Errors) {
  EXPECT_THROW(parse_qrels("q1 0 d2 1\nq1 0 d2 1"), ValidationError);
  try {
    parse_qrels("q1 0 d2 1\nq1 0 d3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_qrels("q1 0 d2 x"), ParseError);
  EXPECT_THROW(parse_qrels("q1 0 d2 -1"), ParseError);
}

TEST(Qrels, EvaluableQueries) {
  const auto q = parse_qrels("q1 0 d1 0\nq2 0 d1 2\nq2 0 d2 0\nq3 0 d9 1\n");
  EXPECT_EQ(q.evaluable_queries(), (std::vector<std::string>{"q2", "q3"}));
  EXPECT_EQ(q.relevant("q2").size(), 1u);
  EXPECT_TRUE(q.relevant("q1").empty());
  EXPECT_TRUE(q.relevant("nope").empty());
}

TEST(ValidateRunset, IdenticalRuns) {
  const auto run = parse_run("q1 Q0 a 1 3 t\nq1 Q0 b 2 2 t\nq1 Q0 c 3 1 t\n");
  const auto rep = validate_runset({run, run});
  ASSERT_EQ(rep.queries.size(), 1u);
  EXPECT_EQ(rep.queries.at("q1").doc_union.size(), 3u);
  EXPECT_FALSE(rep.queries.at("q1").partial);
  EXPECT_TRUE(rep.warnings.empty());
}

TEST(ValidateRunset, PartialCoverage) {
  const auto a = parse_run("q1 Q0 a 1 3 A\n");
  const auto b = parse_run("q2 Q0 a 1 3 B\n");
  const auto rep = validate_runset({a, b});
  EXPECT_TRUE(rep.queries.at("q1").partial);
  EXPECT_TRUE(rep.queries.at("q2").partial);
  EXPECT_EQ(rep.warnings.size(), 2u);
  EXPECT_EQ(rep.queries.at("q2").depths, (std::vector<std::size_t>{0, 1}));
}

TEST(ValidateRunset, DisjointUnion) {
  const auto a = parse_run("q1 Q0 a 1 3 A\nq1 Q0 b 2 2 A\nq1 Q0 c 3 1 A\n");
  const auto b = parse_run("q1 Q0 d 1 3 B\nq1 Q0 e 2 2 B\n");
  const auto rep = validate_runset({a, b});
  EXPECT_EQ(rep.queries.at("q1").doc_union.size(), 5u);
  EXPECT_EQ(rep.queries.at("q1").depths, (std::vector<std::size_t>{3, 2}));
}

TEST(ValidateRunset, NoRuns) { EXPECT_THROW(validate_runset({}), ValidationError); }

TEST(ReadFile, ErrorsNameTheFile) {
  try {
    read_run_file("/nonexistent/run.trec");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/run.trec"), std::string::npos);
  }
}

}  // namespace
}  // namespace rankfuse
