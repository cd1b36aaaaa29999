// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "rankfuse/error.hpp"
#include "rankfuse/fusion.hpp"
#include "rankfuse/run.hpp"

namespace rankfuse::detail {

/// Sorts the parts ascending and sums left to right. Equal multisets give
/// bitwise-equal sums.
inline double ordered_sum(std::vector<double>& parts) {
  std::sort(parts.begin(), parts.end());
  double sum = 0.0;
  for (double p : parts) sum += p;
  return sum;
}

inline double rrf_term(double weight, double k, int rank) { return weight / (k + rank); }

/// (s - min) / (max - min) per list; a constant list maps to 1.0.
inline std::vector<double> minmax_scores(const std::vector<RunEntry>& entries) {
  std::vector<double> out(entries.size(), 1.0);
  if (entries.empty()) return out;
  double lo = entries.front().score, hi = entries.front().score;
  for (const auto& e : entries) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  if (hi > lo) {
    for (std::size_t i = 0; i < entries.size(); ++i) out[i] = (entries[i].score - lo) / (hi - lo);
  }
  return out;
}

/// Canonical order, truncation, ranks 1..N and tags.
inline std::vector<RunEntry> finish_query(std::vector<RunEntry> fused, std::size_t depth,
                                          const std::string& tag) {
  std::sort(fused.begin(), fused.end(), [](const RunEntry& a, const RunEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (fused.size() > depth) fused.resize(depth);
  for (std::size_t i = 0; i < fused.size(); ++i) {
    fused[i].rank = static_cast<int>(i + 1);
    fused[i].tag = tag;
  }
  return fused;
}

inline double weight_of(const SystemWeights& weights, const std::string& system_id) {
  auto it = weights.find(system_id);
  if (it == weights.end()) throw ValidationError("no weight for system '" + system_id + "'");
  if (!(it->second >= 0.0)) throw ValidationError("negative weight for system '" + system_id + "'");
  return it->second;
}

/// Per-run multiplier for the requested method; 1 for unweighted methods.
inline std::vector<double> run_weights(const std::vector<RunList>& runs, const FusionConfig& cfg,
                                       const SystemWeights* weights) {
  std::vector<double> out(runs.size(), 1.0);
  if (cfg.method == FusionMethod::mapfuse || cfg.method == FusionMethod::mapslidefuse) {
    if (weights == nullptr) throw ValidationError(std::string(to_string(cfg.method)) + " requires system weights");
    for (std::size_t r = 0; r < runs.size(); ++r) out[r] = weight_of(*weights, runs[r].system_id);
  }
  return out;
}

/// Per-run positional model, null for methods that do not use one.
inline std::vector<const SystemRelevance*> run_models(const std::vector<RunList>& runs,
                                                      const FusionConfig& cfg,
                                                      const PositionalRelevanceModel* model) {
  std::vector<const SystemRelevance*> out(runs.size(), nullptr);
  if (cfg.method == FusionMethod::slidefuse || cfg.method == FusionMethod::mapslidefuse) {
    if (model == nullptr) throw ValidationError(std::string(to_string(cfg.method)) + " requires a positional model");
    for (std::size_t r = 0; r < runs.size(); ++r) out[r] = &model->at(runs[r].system_id);
  }
  return out;
}

}  // namespace rankfuse::detail
