// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rankfuse {

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 1;  // 1-based
  double score = 0.0;
  std::string tag;

  bool operator==(const RunEntry&) const = default;
};

/// One system's ranked output. Queries are kept in ascending query_id order;
/// each query's entries are ordered by ascending rank with ranks 1..N.
struct RunList {
  std::string system_id;
  std::map<std::string, std::vector<RunEntry>, std::less<>> queries;

  /// Entries for `query_id`, or nullptr when the run did not retrieve it.
  const std::vector<RunEntry>* find(std::string_view query_id) const;
  std::size_t entry_count() const;

  bool operator==(const RunList&) const = default;
};

/// Relevance judgments, query_id -> doc_id -> grade (grade >= 0).
struct Qrels {
  std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>> judgments;

  /// Docs with grade > 0 for the query; empty when the query is unjudged.
  std::set<std::string, std::less<>> relevant(std::string_view query_id) const;
  bool is_relevant(std::string_view query_id, std::string_view doc_id) const;
  /// Queries with at least one relevant document, ascending.
  std::vector<std::string> evaluable_queries() const;
};

/// Parses a TREC run: `qid Q0 docid rank score tag` per line.
/// Throws ParseError (with line number) on malformed lines and
/// ValidationError on a duplicate (query, doc) pair. File ranks only order the
/// entries; they are rewritten to 1..N.
RunList parse_run(std::istream& in);
RunList parse_run(std::string_view text);

/// Re-sorts every query by score descending, doc_id ascending on ties, and
/// rewrites ranks 1..N.
RunList canonicalize(RunList run);

/// Parses TREC qrels: `qid iter docid grade`.
Qrels parse_qrels(std::istream& in);
Qrels parse_qrels(std::string_view text);

/// Emits the 6-field format with scores to 6 decimals. Every line carries
/// `tag`, regardless of the entries' own tags.
void write_run(std::ostream& out, const RunList& run, std::string_view tag);
std::string write_run(const RunList& run, std::string_view tag);

/// Reads a whole file; errors are rethrown with the path prefixed.
RunList read_run_file(const std::string& path);
Qrels read_qrels_file(const std::string& path);

struct QueryCoverage {
  std::set<std::string> doc_union;
  std::vector<std::size_t> depths;  // per run, 0 when absent
  bool partial = false;             // absent from at least one run
};

struct RunsetReport {
  std::map<std::string, QueryCoverage> queries;
  std::vector<std::string> warnings;
};

/// Per-query doc universe across a set of runs. Throws on an empty set.
RunsetReport validate_runset(const std::vector<RunList>& runs);

}  // namespace rankfuse
