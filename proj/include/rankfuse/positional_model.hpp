// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rankfuse/run.hpp"

namespace rankfuse {

/// P(relevant | position) for one source system. Positions are 0-based
/// (position = rank - 1). support[i] counts the training queries whose list
/// reaches position i; probs[i] is 0 wherever support[i] is 0.
struct SystemRelevance {
  std::vector<double> probs;
  std::vector<std::size_t> support;

  bool operator==(const SystemRelevance&) const = default;
};

struct PositionalRelevanceModel {
  static constexpr int kVersion = 1;

  std::map<std::string, SystemRelevance, std::less<>> systems;

  /// Throws ValidationError when the system is unknown.
  const SystemRelevance& at(std::string_view system_id) const;

  bool operator==(const PositionalRelevanceModel&) const = default;
};

/// Estimates per-position relevance probabilities for every training run.
/// Training queries are the query ids present in `training_qrels`; a query's
/// list contributes to positions 0..depth-1. Throws on an empty training set
/// or two runs sharing a system_id.
PositionalRelevanceModel estimate_positional_relevance(const std::vector<RunList>& training_runs,
                                                       const Qrels& training_qrels);

/// Mean of probs over the window [max(i-w, 0), min(i+w, depth-1)].
/// Positions past the end of the model's arrays count as probability 0.
/// Throws when i >= depth or the system is unknown.
double windowed_probability(const PositionalRelevanceModel& model, std::string_view system_id,
                            std::size_t position, std::size_t window, std::size_t depth);
double windowed_probability(const SystemRelevance& system, std::size_t position, std::size_t window,
                            std::size_t depth);

/// {"version": 1, "systems": {id: {"probs": [...], "support": [...]}}}
std::string positional_model_to_json(const PositionalRelevanceModel& model);
PositionalRelevanceModel positional_model_from_json(std::string_view text);

}  // namespace rankfuse
