// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <set>

#include "random.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/ltr.hpp"

namespace rankfuse::ltr {

FeatureVector FeatureVector::from_scores(double first_stage, std::vector<double> checkpoints) {
  FeatureVector fv;
  fv.first_stage = first_stage;
  fv.checkpoints = std::move(checkpoints);
  if (!fv.checkpoints.empty()) {
    const double n = static_cast<double>(fv.checkpoints.size());
    double sum = 0.0;
    for (double x : fv.checkpoints) sum += x;
    fv.mean = sum / n;
    double ss = 0.0;
    for (double x : fv.checkpoints) ss += (x - fv.mean) * (x - fv.mean);
    fv.stddev = std::sqrt(ss / n);
  }
  return fv;
}

std::vector<double> FeatureVector::values() const {
  std::vector<double> out;
  out.reserve(checkpoints.size() + 3);
  out.push_back(first_stage);
  out.insert(out.end(), checkpoints.begin(), checkpoints.end());
  out.push_back(mean);
  out.push_back(stddev);
  return out;
}

FeatureExtractor::FeatureExtractor(const std::vector<RunList>& runs, std::string_view first_stage_id) {
  const RunList* first = nullptr;
  std::vector<const RunList*> checkpoints;
  for (const auto& run : runs) {
    if (run.system_id == first_stage_id) {
      if (first != nullptr) {
        throw ValidationError("more than one run has first-stage id '" + std::string(first_stage_id) + "'");
      }
      first = &run;
    } else {
      checkpoints.push_back(&run);
    }
  }
  if (first == nullptr) throw ValidationError("no run has first-stage id '" + std::string(first_stage_id) + "'");
  if (checkpoints.empty()) throw ValidationError("learning to rank needs at least one checkpoint run");

  lists_.push_back(first);
  lists_.insert(lists_.end(), checkpoints.begin(), checkpoints.end());
  index_.resize(lists_.size());
  for (std::size_t r = 0; r < lists_.size(); ++r) {
    for (const auto& [qid, entries] : lists_[r]->queries) {
      QueryIndex qi;
      qi.min_score = entries.empty() ? 0.0 : entries.front().score;
      for (const auto& e : entries) {
        qi.scores.emplace(e.doc_id, e.score);
        qi.min_score = std::min(qi.min_score, e.score);
      }
      index_[r].emplace(qid, std::move(qi));
    }
  }
}

FeatureVector FeatureExtractor::build(std::string_view query_id, std::string_view doc_id) const {
  std::vector<double> scores(lists_.size(), 0.0);
  bool found = false;
  const std::string doc(doc_id);
  for (std::size_t r = 0; r < lists_.size(); ++r) {
    auto q = index_[r].find(query_id);
    if (q == index_[r].end()) continue;
    auto d = q->second.scores.find(doc);
    if (d != q->second.scores.end()) {
      scores[r] = d->second;
      found = true;
    } else {
      scores[r] = q->second.min_score;
    }
  }
  if (!found) {
    throw ValidationError("document '" + doc + "' is not retrieved by any run for query '" +
                          std::string(query_id) + "'");
  }
  return FeatureVector::from_scores(scores.front(), std::vector<double>(scores.begin() + 1, scores.end()));
}

std::vector<std::string> FeatureExtractor::candidates(std::string_view query_id) const {
  std::set<std::string> docs;
  for (const auto* run : lists_) {
    if (const auto* entries = run->find(query_id)) {
      for (const auto& e : *entries) docs.insert(e.doc_id);
    }
  }
  return {docs.begin(), docs.end()};
}

std::vector<std::string> FeatureExtractor::queries() const {
  std::set<std::string> ids;
  for (const auto* run : lists_) {
    for (const auto& [qid, entries] : run->queries) ids.insert(qid);
  }
  return {ids.begin(), ids.end()};
}

FeatureVector build_features(const std::vector<RunList>& runs, std::string_view first_stage_id,
                             std::string_view query_id, std::string_view doc_id) {
  return FeatureExtractor(runs, first_stage_id).build(query_id, doc_id);
}

SamplingResult sample_training_groups(const FeatureExtractor& extractor, const Qrels& qrels,
                                      std::size_t negatives, std::uint64_t seed) {
  if (negatives == 0) throw ValidationError("sampling: at least one negative per query is required");
  SamplingResult result;
  for (const auto& [qid, judged] : qrels.judgments) {
    const auto* entries = extractor.first_stage().find(qid);
    if (entries == nullptr) {
      result.skipped.push_back(qid);
      continue;
    }
    const RunEntry* positive = nullptr;
    std::vector<const RunEntry*> pool;
    for (const auto& e : *entries) {
      if (qrels.is_relevant(qid, e.doc_id)) {
        if (positive == nullptr) positive = &e;
      } else {
        pool.push_back(&e);
      }
    }
    if (positive == nullptr || pool.empty()) {
      result.skipped.push_back(qid);
      continue;
    }

    // Partial Fisher-Yates over the non-relevant pool.
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::fnv1a(qid)));
    const std::size_t take = std::min(negatives, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(detail::uniform_below(rng, pool.size() - i));
      std::swap(pool[i], pool[j]);
    }

    TrainingGroup group;
    group.query_id = qid;
    group.rows.push_back({positive->doc_id, extractor.build(qid, positive->doc_id).values(), 1});
    for (std::size_t i = 0; i < take; ++i) {
      group.rows.push_back({pool[i]->doc_id, extractor.build(qid, pool[i]->doc_id).values(), 0});
    }
    result.groups.push_back(std::move(group));
  }
  return result;
}

}  // namespace rankfuse::ltr
