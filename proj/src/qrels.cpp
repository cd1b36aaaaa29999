// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "rankfuse/error.hpp"
#include "rankfuse/run.hpp"
#include "text_util.hpp"

namespace rankfuse {

std::set<std::string, std::less<>> Qrels::relevant(std::string_view query_id) const {
  std::set<std::string, std::less<>> out;
  auto it = judgments.find(query_id);
  if (it == judgments.end()) return out;
  for (const auto& [doc, grade] : it->second) {
    if (grade > 0) out.insert(doc);
  }
  return out;
}

bool Qrels::is_relevant(std::string_view query_id, std::string_view doc_id) const {
  auto q = judgments.find(query_id);
  if (q == judgments.end()) return false;
  auto d = q->second.find(doc_id);
  return d != q->second.end() && d->second > 0;
}

std::vector<std::string> Qrels::evaluable_queries() const {
  std::vector<std::string> out;
  for (const auto& [qid, docs] : judgments) {
    for (const auto& [doc, grade] : docs) {
      if (grade > 0) {
        out.push_back(qid);
        break;
      }
    }
  }
  return out;
}

Qrels parse_qrels(std::istream& in) {
  Qrels qrels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    auto fields = detail::split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw ParseError(lineno, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    auto grade = detail::parse_int(fields[3]);
    if (!grade || *grade < 0 || *grade > 1'000'000) {
      throw ParseError(lineno, "invalid relevance grade '" + std::string(fields[3]) + "'");
    }
    auto& docs = qrels.judgments[std::string(fields[0])];
    auto [it, inserted] = docs.emplace(std::string(fields[2]), static_cast<int>(*grade));
    if (!inserted) {
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate judgment for query '" +
                            std::string(fields[0]) + "', document '" + std::string(fields[2]) + "'");
    }
  }
  return qrels;
}

Qrels parse_qrels(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_qrels(in);
}

}  // namespace rankfuse
