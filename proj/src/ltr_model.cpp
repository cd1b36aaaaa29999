// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/ltr.hpp"
#include "rankfuse/metrics.hpp"

namespace rankfuse::ltr {

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return nodes[i].leaf_value;
}

std::size_t RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
    const auto& n = nodes[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(static_cast<std::size_t>(n.left)), walk(static_cast<std::size_t>(n.right)));
  };
  return walk(0);
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double predict(const LtrModel& model, std::span<const double> features) {
  if (features.size() != model.feature_count) {
    throw ValidationError("ltr: model expects " + std::to_string(model.feature_count) + " features, got " +
                          std::to_string(features.size()));
  }
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree.predict(features);
  return model.base_score + model.eta * sum;
}

double predict(const LtrModel& model, const FeatureVector& features) {
  return predict(model, features.values());
}

double training_map(const LtrModel& model, const std::vector<TrainingGroup>& groups) {
  if (groups.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : groups) {
    std::vector<std::pair<double, const TrainingRow*>> scored;
    for (const auto& row : g.rows) scored.emplace_back(predict(model, row.features), &row);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second->doc_id < b.second->doc_id;
    });
    std::vector<std::string> ranking;
    RelevantSet relevant;
    for (const auto& [s, row] : scored) {
      ranking.push_back(row->doc_id);
      if (row->label == 1) relevant.insert(row->doc_id);
    }
    total += average_precision(ranking, relevant);
  }
  return total / static_cast<double>(groups.size());
}

RunList rerank(const LtrModel& model, const std::vector<RunList>& runs, std::string_view first_stage_id) {
  const FeatureExtractor extractor(runs, first_stage_id);
  if (extractor.feature_count() != model.feature_count) {
    throw ValidationError("ltr: model has " + std::to_string(model.feature_count) + " features but the runs give " +
                          std::to_string(extractor.feature_count()));
  }
  const auto queries = extractor.queries();
  std::vector<std::vector<RunEntry>> results(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const auto& qid = queries[static_cast<std::size_t>(q)];
    auto& out = results[static_cast<std::size_t>(q)];
    for (const auto& doc : extractor.candidates(qid)) {
      out.push_back(RunEntry{qid, doc, 0, predict(model, extractor.build(qid, doc)), "ltr"});
    }
  }
  RunList run;
  run.system_id = "ltr";
  for (std::size_t q = 0; q < queries.size(); ++q) run.queries.emplace(queries[q], std::move(results[q]));
  return canonicalize(std::move(run));
}

std::string model_to_json(const LtrModel& model) {
  nlohmann::ordered_json doc;
  doc["version"] = LtrModel::kVersion;
  doc["feature_count"] = model.feature_count;
  doc["base_score"] = model.base_score;
  doc["eta"] = model.eta;
  doc["trees"] = nlohmann::ordered_json::array();
  for (const auto& tree : model.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& n = tree.nodes[i];
      nlohmann::ordered_json node;
      node["index"] = i;
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
      node["leaf_value"] = n.leaf_value;
      nodes.push_back(std::move(node));
    }
    doc["trees"].push_back({{"nodes", std::move(nodes)}});
  }
  return doc.dump(1) + "\n";
}

LtrModel model_from_json(std::string_view text) {
  LtrModel model;
  try {
    const auto doc = nlohmann::json::parse(text);
    const int version = doc.at("version").get<int>();
    if (version != LtrModel::kVersion) throw ValidationError("ltr model: unsupported version " + std::to_string(version));
    model.feature_count = doc.at("feature_count").get<std::size_t>();
    model.base_score = doc.at("base_score").get<double>();
    model.eta = doc.at("eta").get<double>();
    if (model.feature_count == 0) throw ValidationError("ltr model: feature_count must be positive");
    for (const auto& t : doc.at("trees")) {
      RegressionTree tree;
      const auto& nodes = t.at("nodes");
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& jn = nodes[i];
        if (jn.at("index").get<std::size_t>() != i) throw ValidationError("ltr model: node indices out of order");
        TreeNode n;
        n.feature = jn.at("feature").get<int>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<int>();
        n.right = jn.at("right").get<int>();
        n.leaf_value = jn.at("leaf_value").get<double>();
        const auto count = static_cast<int>(nodes.size());
        if (!n.is_leaf()) {
          if (static_cast<std::size_t>(n.feature) >= model.feature_count) {
            throw ValidationError("ltr model: node feature index out of range");
          }
          // Children come after their parent, which rules out cycles.
          if (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) || n.left >= count || n.right >= count) {
            throw ValidationError("ltr model: invalid child index");
          }
        }
        if (!std::isfinite(n.leaf_value) || !std::isfinite(n.threshold)) {
          throw ValidationError("ltr model: non-finite node value");
        }
        tree.nodes.push_back(n);
      }
      model.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("ltr model: ") + e.what());
  }
  return model;
}

}  // namespace rankfuse::ltr
