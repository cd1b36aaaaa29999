// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/fusion.hpp"

#include <set>
#include <string_view>
#include <unordered_map>

#include "fusion_detail.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/metrics.hpp"

namespace rankfuse {

std::string_view to_string(FusionMethod method) {
  switch (method) {
    case FusionMethod::average: return "average";
    case FusionMethod::rrf: return "rrf";
    case FusionMethod::mapfuse: return "mapfuse";
    case FusionMethod::slidefuse: return "slidefuse";
    case FusionMethod::mapslidefuse: return "mapslidefuse";
  }
  return "unknown";
}

std::optional<FusionMethod> parse_fusion_method(std::string_view name) {
  if (name == "avg" || name == "average") return FusionMethod::average;
  if (name == "rrf") return FusionMethod::rrf;
  if (name == "mapfuse") return FusionMethod::mapfuse;
  if (name == "slidefuse") return FusionMethod::slidefuse;
  if (name == "mapslidefuse") return FusionMethod::mapslidefuse;
  return std::nullopt;
}

void FusionConfig::validate() const {
  if (!(k > 0.0)) throw ValidationError("fusion: k must be positive");
  if (output_depth == 0) throw ValidationError("fusion: output depth must be at least 1");
}

namespace {

// Fuses one query. `runs` entries are indexed by run; null when absent.
std::vector<RunEntry> fuse_query(const std::string& qid,
                                 const std::vector<const std::vector<RunEntry>*>& lists,
                                 const FusionConfig& cfg, const std::vector<double>& weights,
                                 const std::vector<const SystemRelevance*>& models,
                                 const std::string& tag) {
  // string_view keys point into the input runs, which outlive this call.
  std::unordered_map<std::string_view, std::vector<double>> parts;
  for (std::size_t r = 0; r < lists.size(); ++r) {
    const auto* entries = lists[r];
    if (entries == nullptr || weights[r] == 0.0) continue;
    const std::size_t depth = entries->size();
    switch (cfg.method) {
      case FusionMethod::average: {
        if (cfg.normalize == Normalization::minmax) {
          auto norm = detail::minmax_scores(*entries);
          for (std::size_t i = 0; i < depth; ++i) parts[(*entries)[i].doc_id].push_back(norm[i]);
        } else {
          for (const auto& e : *entries) parts[e.doc_id].push_back(e.score);
        }
        break;
      }
      case FusionMethod::rrf:
      case FusionMethod::mapfuse:
        for (const auto& e : *entries) {
          parts[e.doc_id].push_back(detail::rrf_term(weights[r], cfg.k, e.rank));
        }
        break;
      case FusionMethod::slidefuse:
      case FusionMethod::mapslidefuse:
        for (std::size_t i = 0; i < depth; ++i) {
          double p = windowed_probability(*models[r], i, cfg.window, depth);
          if (cfg.method == FusionMethod::mapslidefuse) p *= weights[r];
          parts[(*entries)[i].doc_id].push_back(p);
        }
        break;
    }
  }

  std::vector<RunEntry> fused;
  fused.reserve(parts.size());
  for (auto& [doc, values] : parts) {
    const double count = static_cast<double>(values.size());
    double score = detail::ordered_sum(values);
    if (cfg.method == FusionMethod::average) score /= count;
    fused.push_back(RunEntry{qid, std::string(doc), 0, score, {}});
  }
  return detail::finish_query(std::move(fused), cfg.output_depth, tag);
}

RunList fuse_impl(const std::vector<RunList>& runs, const FusionConfig& cfg,
                  const PositionalRelevanceModel* model, const SystemWeights* weights) {
  if (runs.empty()) throw ValidationError("fusion: no input runs");
  cfg.validate();
  const auto run_weights = detail::run_weights(runs, cfg, weights);
  const auto models = detail::run_models(runs, cfg, model);

  std::set<std::string> query_set;
  for (const auto& run : runs) {
    for (const auto& [qid, entries] : run.queries) query_set.insert(qid);
  }
  const std::vector<std::string> queries(query_set.begin(), query_set.end());
  const std::string tag(to_string(cfg.method));

  std::vector<std::vector<RunEntry>> results(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const auto& qid = queries[static_cast<std::size_t>(q)];
    std::vector<const std::vector<RunEntry>*> lists(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) lists[r] = runs[r].find(qid);
    results[static_cast<std::size_t>(q)] = fuse_query(qid, lists, cfg, run_weights, models, tag);
  }

  RunList out;
  out.system_id = tag;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (!results[q].empty()) out.queries.emplace(queries[q], std::move(results[q]));
  }
  return out;
}

FusionConfig with_method(FusionConfig cfg, FusionMethod method) {
  cfg.method = method;
  return cfg;
}

}  // namespace

RunList fuse(const std::vector<RunList>& runs, const FusionConfig& cfg,
             const PositionalRelevanceModel* model, const SystemWeights* weights) {
  return fuse_impl(runs, cfg, model, weights);
}

RunList fuse_average(const std::vector<RunList>& runs, const FusionConfig& cfg) {
  return fuse_impl(runs, with_method(cfg, FusionMethod::average), nullptr, nullptr);
}

RunList fuse_rrf(const std::vector<RunList>& runs, const FusionConfig& cfg) {
  return fuse_impl(runs, with_method(cfg, FusionMethod::rrf), nullptr, nullptr);
}

RunList fuse_mapfuse(const std::vector<RunList>& runs, const SystemWeights& weights,
                     const FusionConfig& cfg) {
  return fuse_impl(runs, with_method(cfg, FusionMethod::mapfuse), nullptr, &weights);
}

RunList fuse_slidefuse(const std::vector<RunList>& runs, const PositionalRelevanceModel& model,
                       const FusionConfig& cfg) {
  return fuse_impl(runs, with_method(cfg, FusionMethod::slidefuse), &model, nullptr);
}

RunList fuse_map_slidefuse(const std::vector<RunList>& runs, const PositionalRelevanceModel& model,
                           const SystemWeights& weights, const FusionConfig& cfg) {
  return fuse_impl(runs, with_method(cfg, FusionMethod::mapslidefuse), &model, &weights);
}

SystemWeights compute_weights(const std::vector<RunList>& runs, const Qrels& heldout_qrels) {
  SystemWeights weights;
  for (const auto& run : runs) {
    weights[run.system_id] = evaluate(run, heldout_qrels).map_score;
  }
  return weights;
}

}  // namespace rankfuse
