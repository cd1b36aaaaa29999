// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/positional_model.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "rankfuse/error.hpp"

namespace rankfuse {

const SystemRelevance& PositionalRelevanceModel::at(std::string_view system_id) const {
  auto it = systems.find(system_id);
  if (it == systems.end()) {
    throw ValidationError("positional model has no entry for system '" + std::string(system_id) + "'");
  }
  return it->second;
}

PositionalRelevanceModel estimate_positional_relevance(const std::vector<RunList>& training_runs,
                                                       const Qrels& training_qrels) {
  if (training_runs.empty()) throw ValidationError("positional relevance: no training runs");
  if (training_qrels.judgments.empty()) throw ValidationError("positional relevance: empty training qrels");

  PositionalRelevanceModel model;
  for (const auto& run : training_runs) {
    if (model.systems.contains(run.system_id)) {
      throw ValidationError("positional relevance: duplicate system '" + run.system_id + "'");
    }
    std::size_t max_depth = 0;
    for (const auto& [qid, docs] : training_qrels.judgments) {
      if (const auto* entries = run.find(qid)) max_depth = std::max(max_depth, entries->size());
    }
    std::vector<std::size_t> hits(max_depth, 0);
    SystemRelevance sys;
    sys.support.assign(max_depth, 0);
    for (const auto& [qid, docs] : training_qrels.judgments) {
      const auto* entries = run.find(qid);
      if (entries == nullptr) continue;
      for (std::size_t i = 0; i < entries->size(); ++i) {
        ++sys.support[i];
        if (training_qrels.is_relevant(qid, (*entries)[i].doc_id)) ++hits[i];
      }
    }
    sys.probs.assign(max_depth, 0.0);
    for (std::size_t i = 0; i < max_depth; ++i) {
      if (sys.support[i] > 0) {
        sys.probs[i] = static_cast<double>(hits[i]) / static_cast<double>(sys.support[i]);
      }
    }
    model.systems.emplace(run.system_id, std::move(sys));
  }
  return model;
}

double windowed_probability(const SystemRelevance& system, std::size_t position, std::size_t window,
                            std::size_t depth) {
  if (position >= depth) {
    throw ValidationError("windowed probability: position " + std::to_string(position) +
                          " outside list of depth " + std::to_string(depth));
  }
  const std::size_t lo = position >= window ? position - window : 0;
  const std::size_t hi = std::min(position + window, depth - 1);
  double sum = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j < system.probs.size()) sum += system.probs[j];
  }
  return sum / static_cast<double>(hi - lo + 1);
}

double windowed_probability(const PositionalRelevanceModel& model, std::string_view system_id,
                            std::size_t position, std::size_t window, std::size_t depth) {
  return windowed_probability(model.at(system_id), position, window, depth);
}

std::string positional_model_to_json(const PositionalRelevanceModel& model) {
  nlohmann::ordered_json doc;
  doc["version"] = PositionalRelevanceModel::kVersion;
  doc["systems"] = nlohmann::ordered_json::object();
  for (const auto& [id, sys] : model.systems) {
    doc["systems"][id] = {{"probs", sys.probs}, {"support", sys.support}};
  }
  return doc.dump(2) + "\n";
}

PositionalRelevanceModel positional_model_from_json(std::string_view text) {
  PositionalRelevanceModel model;
  try {
    const auto doc = nlohmann::json::parse(text);
    const int version = doc.at("version").get<int>();
    if (version != PositionalRelevanceModel::kVersion) {
      throw ValidationError("positional model: unsupported version " + std::to_string(version));
    }
    for (const auto& [id, sys] : doc.at("systems").items()) {
      SystemRelevance rel;
      rel.probs = sys.at("probs").get<std::vector<double>>();
      rel.support = sys.at("support").get<std::vector<std::size_t>>();
      if (rel.probs.size() != rel.support.size()) {
        throw ValidationError("positional model: probs/support length mismatch for '" + id + "'");
      }
      for (std::size_t i = 0; i < rel.probs.size(); ++i) {
        const double p = rel.probs[i];
        if (!(p >= 0.0 && p <= 1.0) || (rel.support[i] == 0 && p != 0.0)) {
          throw ValidationError("positional model: invalid probability for '" + id + "'");
        }
      }
      model.systems.emplace(id, std::move(rel));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("positional model: ") + e.what());
  }
  return model;
}

}  // namespace rankfuse
