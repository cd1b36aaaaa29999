// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <map>

#include "fusion_detail.hpp"
#include "rankfuse/serial.hpp"

namespace rankfuse::serial {

RunList fuse(const std::vector<RunList>& runs, const FusionConfig& cfg, const PositionalRelevanceModel* model,
             const SystemWeights* weights) {
  if (runs.empty()) throw ValidationError("fusion: no input runs");
  cfg.validate();
  const auto run_weights = detail::run_weights(runs, cfg, weights);
  const auto models = detail::run_models(runs, cfg, model);

  // query -> doc -> contributions, filled run by run.
  std::map<std::string, std::map<std::string, std::vector<double>>> parts;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (run_weights[r] == 0.0) continue;
    for (const auto& [qid, entries] : runs[r].queries) {
      auto& docs = parts[qid];
      const std::size_t depth = entries.size();
      std::vector<double> normalized;
      if (cfg.method == FusionMethod::average && cfg.normalize == Normalization::minmax) {
        normalized = detail::minmax_scores(entries);
      }
      for (std::size_t i = 0; i < depth; ++i) {
        const auto& e = entries[i];
        double value = 0.0;
        switch (cfg.method) {
          case FusionMethod::average:
            value = normalized.empty() ? e.score : normalized[i];
            break;
          case FusionMethod::rrf:
          case FusionMethod::mapfuse:
            value = detail::rrf_term(run_weights[r], cfg.k, e.rank);
            break;
          case FusionMethod::slidefuse:
            value = windowed_probability(*models[r], i, cfg.window, depth);
            break;
          case FusionMethod::mapslidefuse:
            value = windowed_probability(*models[r], i, cfg.window, depth) * run_weights[r];
            break;
        }
        docs[e.doc_id].push_back(value);
      }
    }
  }

  const std::string tag(to_string(cfg.method));
  RunList out;
  out.system_id = tag;
  for (auto& [qid, docs] : parts) {
    std::vector<RunEntry> fused;
    for (auto& [doc, values] : docs) {
      const double count = static_cast<double>(values.size());
      double score = detail::ordered_sum(values);
      if (cfg.method == FusionMethod::average) score /= count;
      fused.push_back(RunEntry{qid, doc, 0, score, {}});
    }
    if (!fused.empty()) out.queries.emplace(qid, detail::finish_query(std::move(fused), cfg.output_depth, tag));
  }
  return out;
}

}  // namespace rankfuse::serial
