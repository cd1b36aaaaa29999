// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rankfuse/run.hpp"

namespace rankfuse::ltr {

/// Meta-features for one (query, doc): the first-stage score, one score per
/// ensemble checkpoint, and the mean and population standard deviation of the
/// checkpoint scores.
struct FeatureVector {
  double first_stage = 0.0;
  std::vector<double> checkpoints;
  double mean = 0.0;
  double stddev = 0.0;

  static FeatureVector from_scores(double first_stage, std::vector<double> checkpoints);

  /// Dense layout [first_stage, checkpoint_1..checkpoint_N, mean, stddev].
  std::vector<double> values() const;
};

inline constexpr std::size_t feature_count_for(std::size_t checkpoints) { return checkpoints + 3; }

/// Indexes a first-stage run and its checkpoint runs for feature lookup. The
/// runs must outlive the extractor. A document missing from a run takes that
/// run's minimum score for the query (0 when the run lacks the query).
class FeatureExtractor {
 public:
  /// `runs` holds exactly one run whose system_id is `first_stage_id` and at
  /// least one checkpoint run; checkpoint order follows `runs`.
  FeatureExtractor(const std::vector<RunList>& runs, std::string_view first_stage_id);

  /// Throws ValidationError when the doc is absent from every run.
  FeatureVector build(std::string_view query_id, std::string_view doc_id) const;

  /// Union of the docs any run retrieved for the query, ascending.
  std::vector<std::string> candidates(std::string_view query_id) const;
  /// Union of the query ids over all runs, ascending.
  std::vector<std::string> queries() const;

  const RunList& first_stage() const { return *lists_.front(); }
  std::size_t checkpoint_count() const { return lists_.size() - 1; }
  std::size_t feature_count() const { return feature_count_for(checkpoint_count()); }

 private:
  struct QueryIndex {
    std::unordered_map<std::string, double> scores;
    double min_score = 0.0;
  };
  std::vector<const RunList*> lists_;  // first stage, then checkpoints
  std::vector<std::map<std::string, QueryIndex, std::less<>>> index_;
};

FeatureVector build_features(const std::vector<RunList>& runs, std::string_view first_stage_id,
                             std::string_view query_id, std::string_view doc_id);

struct TrainingRow {
  std::string doc_id;
  std::vector<double> features;
  int label = 0;  // binary
};

struct TrainingGroup {
  std::string query_id;
  std::vector<TrainingRow> rows;
};

struct SamplingResult {
  std::vector<TrainingGroup> groups;
  std::vector<std::string> skipped;  // qrels queries with no retrieved relevant doc
};

/// One group per qrels query: the highest-ranked relevant first-stage doc
/// (label 1) plus `negatives` non-relevant first-stage docs drawn uniformly
/// without replacement (label 0). Draws depend only on (seed, query_id).
SamplingResult sample_training_groups(const FeatureExtractor& extractor, const Qrels& qrels,
                                      std::size_t negatives = 2, std::uint64_t seed = 0);

struct LtrConfig {
  std::size_t rounds = 100;
  std::size_t max_depth = 6;
  double eta = 0.3;
  double min_child_weight = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Node of a regression tree. Internal nodes go left iff x[feature] < threshold.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
  bool operator==(const RegressionTree&) const = default;
};

struct LtrModel {
  static constexpr int kVersion = 1;

  std::size_t feature_count = 0;
  double base_score = 0.0;
  double eta = 0.3;
  std::vector<RegressionTree> trees;

  bool operator==(const LtrModel&) const = default;
};

/// Throws ValidationError for empty input, fewer than two rows, missing
/// positive or negative labels, non-binary labels or inconsistent widths.
void validate_groups(const std::vector<TrainingGroup>& groups);

/// LambdaMART with AP-delta weighted pairwise logistic lambdas, Newton leaf
/// values and shrinkage.
LtrModel train(const std::vector<TrainingGroup>& groups, const LtrConfig& cfg);

/// base_score + eta * sum of leaf values. Throws on a width mismatch.
double predict(const LtrModel& model, std::span<const double> features);
double predict(const LtrModel& model, const FeatureVector& features);

/// MAP of the groups' rows ranked by model score (ties by doc_id).
double training_map(const LtrModel& model, const std::vector<TrainingGroup>& groups);

/// Scores every candidate document of every query; canonical output tagged
/// "ltr". Throws when the model width does not match the runs.
RunList rerank(const LtrModel& model, const std::vector<RunList>& runs, std::string_view first_stage_id);

/// {"version", "feature_count", "base_score", "eta", "trees": [{"nodes": [...]}]}
std::string model_to_json(const LtrModel& model);
LtrModel model_from_json(std::string_view text);

// Building blocks of train(), exposed for testing.
namespace lambda {

/// AP(after swapping positions a and b) - AP(before), for a ranked binary
/// label list (1 = relevant). One of the two positions
/// must hold a relevant row and the other a non-relevant one.
double ap_swap_delta(std::span<const int> ranked_labels, std::size_t a, std::size_t b);

struct Gradients {
  std::vector<double> grad;
  std::vector<double> hess;
};

/// First- and second-order lambdas for one group. `tie_order` breaks score
/// ties when ranking (lower first).
Gradients group_gradients(std::span<const int> labels, std::span<const double> scores,
                          std::span<const std::size_t> tie_order, double sigma);

/// Depth-limited exact-greedy regression tree on row-major `features`
/// (rows x width) with Newton leaf values -G/H.
RegressionTree fit_tree(std::span<const double> features, std::size_t width,
                        std::span<const double> grad, std::span<const double> hess,
                        std::size_t max_depth, double min_child_weight);

}  // namespace lambda

}  // namespace rankfuse::ltr
