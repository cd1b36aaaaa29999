// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "rankfuse/error.hpp"
#include "text_util.hpp"

namespace rankfuse {

const std::vector<RunEntry>* RunList::find(std::string_view query_id) const {
  auto it = queries.find(query_id);
  return it == queries.end() ? nullptr : &it->second;
}

std::size_t RunList::entry_count() const {
  std::size_t n = 0;
  for (const auto& [qid, entries] : queries) n += entries.size();
  return n;
}

RunList parse_run(std::istream& in) {
  RunList run;
  std::map<std::string, std::unordered_set<std::string>, std::less<>> seen;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    auto fields = detail::split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw ParseError(lineno, "expected 6 fields, found " + std::to_string(fields.size()));
    }
    auto rank = detail::parse_int(fields[3]);
    if (!rank || *rank < 0 || *rank > std::numeric_limits<int>::max()) {
      throw ParseError(lineno, "invalid rank '" + std::string(fields[3]) + "'");
    }
    auto score = detail::parse_finite(fields[4]);
    if (!score) throw ParseError(lineno, "invalid score '" + std::string(fields[4]) + "'");

    RunEntry e{std::string(fields[0]), std::string(fields[2]), static_cast<int>(*rank), *score,
               std::string(fields[5])};
    if (first) {
      run.system_id = e.tag;
      first = false;
    }
    if (!seen[e.query_id].insert(e.doc_id).second) {
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate document '" +
                            e.doc_id + "' for query '" + e.query_id + "'");
    }
    run.queries[e.query_id].push_back(std::move(e));
  }
  for (auto& [qid, entries] : run.queries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i + 1);
  }
  return run;
}

RunList parse_run(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_run(in);
}

RunList canonicalize(RunList run) {
  for (auto& [qid, entries] : run.queries) {
    std::sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i + 1);
  }
  return run;
}

void write_run(std::ostream& out, const RunList& run, std::string_view tag) {
  char buf[64];
  for (const auto& [qid, entries] : run.queries) {
    for (const auto& e : entries) {
      std::snprintf(buf, sizeof buf, "%.6f", e.score);
      out << e.query_id << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << buf << ' ' << tag << '\n';
    }
  }
}

std::string write_run(const RunList& run, std::string_view tag) {
  std::ostringstream out;
  write_run(out, run, tag);
  return out.str();
}

namespace {

template <typename Result, typename Parser>
Result read_file(const std::string& path, Parser parse) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

RunList read_run_file(const std::string& path) {
  return read_file<RunList>(path, [](std::istream& in) { return parse_run(in); });
}

Qrels read_qrels_file(const std::string& path) {
  return read_file<Qrels>(path, [](std::istream& in) { return parse_qrels(in); });
}

RunsetReport validate_runset(const std::vector<RunList>& runs) {
  if (runs.empty()) throw ValidationError("validate_runset: no runs given");
  RunsetReport report;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& [qid, entries] : runs[r].queries) {
      auto& cov = report.queries[qid];
      cov.depths.resize(runs.size(), 0);
      cov.depths[r] = entries.size();
      for (const auto& e : entries) cov.doc_union.insert(e.doc_id);
    }
  }
  for (auto& [qid, cov] : report.queries) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (runs[r].find(qid) == nullptr) cov.partial = true;
    }
    if (cov.partial) {
      report.warnings.push_back("query '" + qid + "' is missing from at least one run");
    }
  }
  return report;
}

}  // namespace rankfuse
