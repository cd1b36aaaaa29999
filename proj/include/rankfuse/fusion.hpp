// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankfuse/positional_model.hpp"
#include "rankfuse/run.hpp"

namespace rankfuse {

enum class FusionMethod { average, rrf, mapfuse, slidefuse, mapslidefuse };
enum class Normalization { none, minmax };

std::string_view to_string(FusionMethod method);
/// Accepts "avg"/"average", "rrf", "mapfuse", "slidefuse", "mapslidefuse".
std::optional<FusionMethod> parse_fusion_method(std::string_view name);

struct FusionConfig {
  FusionMethod method = FusionMethod::rrf;
  double k = 60.0;
  std::size_t window = 6;
  std::size_t output_depth = 1000;
  Normalization normalize = Normalization::none;  // fuse_average only

  /// Throws ValidationError unless k > 0 and output_depth >= 1.
  void validate() const;
};

/// system_id -> held-out MAP.
using SystemWeights = std::map<std::string, double, std::less<>>;

// Every fusion routine works per query over canonical input runs. A run that
// does not contain a document contributes nothing to it. Each document's
// contributions are summed in ascending order, so results do not depend on
// the order the runs are given in. Output is canonical, truncated to
// cfg.output_depth, and tagged with the method name.

/// Mean of the document's scores over the runs that contain it.
RunList fuse_average(const std::vector<RunList>& runs, const FusionConfig& cfg);
/// sum 1 / (k + rank)
RunList fuse_rrf(const std::vector<RunList>& runs, const FusionConfig& cfg);
/// sum MAP_r / (k + rank); runs with weight 0 are dropped.
RunList fuse_mapfuse(const std::vector<RunList>& runs, const SystemWeights& weights,
                     const FusionConfig& cfg);
/// sum of windowed positional relevance, window cfg.window, depth = the
/// containing run's list length for the query.
RunList fuse_slidefuse(const std::vector<RunList>& runs, const PositionalRelevanceModel& model,
                       const FusionConfig& cfg);
/// SlideFuse with each run's contribution multiplied by MAP_r.
RunList fuse_map_slidefuse(const std::vector<RunList>& runs, const PositionalRelevanceModel& model,
                           const SystemWeights& weights, const FusionConfig& cfg);

/// Dispatches on cfg.method. `model`/`weights` must be non-null for the
/// methods that need them.
RunList fuse(const std::vector<RunList>& runs, const FusionConfig& cfg,
             const PositionalRelevanceModel* model = nullptr, const SystemWeights* weights = nullptr);

/// MAP of each run on the held-out qrels, keyed by system_id.
SystemWeights compute_weights(const std::vector<RunList>& runs, const Qrels& heldout_qrels);

}  // namespace rankfuse
