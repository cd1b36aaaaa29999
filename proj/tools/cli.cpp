// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/fge.hpp"
#include "rankfuse/fusion.hpp"
#include "rankfuse/ltr.hpp"
#include "rankfuse/metrics.hpp"
#include "rankfuse/parallel.hpp"
#include "rankfuse/run.hpp"
#include "rankfuse/stats.hpp"

namespace rankfuse::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes `content` to `path` through a temporary file and rename, or to
/// `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError(path + ": cannot write output");
    f << content;
    f.flush();
    if (!f) throw ValidationError(path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError(path + ": " + ec.message());
  }
}

std::vector<RunList> read_runs(const std::vector<std::string>& paths, bool canonical = true) {
  std::vector<RunList> runs;
  runs.reserve(paths.size());
  for (const auto& p : paths) {
    RunList run = read_run_file(p);
    runs.push_back(canonical ? canonicalize(std::move(run)) : std::move(run));
  }
  return runs;
}

void require_unique_systems(const std::vector<RunList>& runs) {
  std::set<std::string> seen;
  for (const auto& r : runs) {
    if (!seen.insert(r.system_id).second) {
      throw ValidationError("two input runs share the system tag '" + r.system_id +
                            "'; per-system weights and models need distinct tags");
    }
  }
}

struct FuseOptions {
  std::string method;
  std::vector<std::string> runs;
  std::string weights_qrels;
  std::vector<std::string> weights_runs;
  std::string weights_json;
  std::string train_qrels;
  std::vector<std::string> train_runs;
  std::string positional_model;
  std::string save_positional_model;
  double k = 60.0;
  std::size_t window = 6;
  std::size_t depth = 1000;
  std::string normalize = "none";
  std::string tag;
  std::string output;
};

int cmd_fuse(const FuseOptions& o, std::ostream& out, std::ostream& err) {
  const auto method = parse_fusion_method(o.method);
  if (!method) throw UsageError("unknown fusion method '" + o.method + "'");
  const bool weighted = *method == FusionMethod::mapfuse || *method == FusionMethod::mapslidefuse;
  const bool positional = *method == FusionMethod::slidefuse || *method == FusionMethod::mapslidefuse;
  if (weighted && o.weights_qrels.empty() && o.weights_json.empty()) {
    throw UsageError(std::string(to_string(*method)) + " needs --weights-qrels (with --weights-runs) or --weights-json");
  }
  if (positional && o.train_qrels.empty() && o.positional_model.empty()) {
    throw UsageError(std::string(to_string(*method)) + " needs --train-qrels (with --train-runs) or --positional-model");
  }
  if (o.k <= 0.0) throw UsageError("--k must be positive");
  if (o.depth == 0) throw UsageError("--depth must be at least 1");

  FusionConfig cfg;
  cfg.method = *method;
  cfg.k = o.k;
  cfg.window = o.window;
  cfg.output_depth = o.depth;
  cfg.normalize = o.normalize == "minmax" ? Normalization::minmax : Normalization::none;

  const auto runs = read_runs(o.runs);
  if (weighted || positional) require_unique_systems(runs);

  SystemWeights weights;
  if (weighted) {
    if (!o.weights_json.empty()) {
      try {
        const auto doc = nlohmann::json::parse(read_text(o.weights_json));
        for (const auto& [id, w] : doc.items()) weights[id] = w.get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(o.weights_json + ": " + e.what());
      }
    } else {
      const auto heldout = read_qrels_file(o.weights_qrels);
      weights = compute_weights(o.weights_runs.empty() ? runs : read_runs(o.weights_runs), heldout);
    }
    for (const auto& [id, w] : weights) err << "weight " << id << ' ' << std::fixed << std::setprecision(6) << w << '\n';
  }

  PositionalRelevanceModel model;
  if (positional) {
    if (!o.positional_model.empty()) {
      model = positional_model_from_json(read_text(o.positional_model));
    } else {
      const auto training_runs = o.train_runs.empty() ? runs : read_runs(o.train_runs);
      model = estimate_positional_relevance(training_runs, read_qrels_file(o.train_qrels));
    }
    if (!o.save_positional_model.empty()) emit(o.save_positional_model, positional_model_to_json(model), out);
  }

  const RunList fused = fuse(runs, cfg, positional ? &model : nullptr, weighted ? &weights : nullptr);
  emit(o.output, write_run(fused, o.tag.empty() ? std::string(to_string(*method)) : o.tag), out);
  return kExitOk;
}

struct EvalOptions {
  std::string run;
  std::string qrels;
  std::size_t cutoff = 10;
  bool per_query = false;
  bool json = false;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  if (o.cutoff == 0) throw UsageError("--cutoff must be positive");
  const RunList run = canonicalize(read_run_file(o.run));
  const Qrels qrels = read_qrels_file(o.qrels);
  const MetricReport report = evaluate(run, qrels, o.cutoff);
  const std::string at_k = "MRR@" + std::to_string(o.cutoff);

  if (o.json) {
    nlohmann::ordered_json doc;
    doc["map"] = report.map_score;
    doc["mrr"] = report.mrr;
    doc["mrr_at_k"] = report.mrr_at_k;
    doc["cutoff"] = report.cutoff;
    doc["queries"] = report.per_query.size();
    if (o.per_query) {
      doc["per_query"] = nlohmann::ordered_json::object();
      for (const auto& [qid, m] : report.per_query) {
        doc["per_query"][qid] = {{"ap", m.ap}, {"rr", m.rr}, {"rr_at_k", m.rr_at_k}};
      }
    }
    out << doc.dump() << '\n';
    return kExitOk;
  }

  char line[256];
  if (o.per_query) {
    for (const auto& [qid, m] : report.per_query) {
      std::snprintf(line, sizeof line, "%-12s AP %.4f  RR %.4f  %s %.4f\n", qid.c_str(), m.ap, m.rr, at_k.c_str(),
                    m.rr_at_k);
      out << line;
    }
  }
  std::snprintf(line, sizeof line, "%-8s %.4f\n%-8s %.4f\n%-8s %.4f\n", "MAP", report.map_score, "MRR", report.mrr,
                at_k.c_str(), report.mrr_at_k);
  out << line;
  return kExitOk;
}

struct LtrTrainOptions {
  std::vector<std::string> runs;
  std::string first_stage;
  std::string qrels;
  std::string model;
  std::size_t rounds = 100;
  std::size_t max_depth = 6;
  double eta = 0.3;
  double min_child_weight = 1.0;
  double sigma = 1.0;
  std::size_t negatives = 2;
};

int cmd_ltr_train(const LtrTrainOptions& o, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  ltr::LtrConfig cfg;
  cfg.rounds = o.rounds;
  cfg.max_depth = o.max_depth;
  cfg.eta = o.eta;
  cfg.min_child_weight = o.min_child_weight;
  cfg.sigma = o.sigma;
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  if (o.negatives == 0) throw UsageError("--negatives must be at least 1");

  const auto runs = read_runs(o.runs);
  const Qrels qrels = read_qrels_file(o.qrels);
  const ltr::FeatureExtractor extractor(runs, o.first_stage);
  const auto sampled = ltr::sample_training_groups(extractor, qrels, o.negatives, seed);
  if (sampled.groups.empty()) throw ValidationError("no training query has a retrieved relevant document");
  const auto model = ltr::train(sampled.groups, cfg);

  err << "groups " << sampled.groups.size() << " skipped " << sampled.skipped.size() << " trees "
      << model.trees.size() << " training_map " << std::fixed << std::setprecision(4)
      << ltr::training_map(model, sampled.groups) << '\n';
  emit(o.model, ltr::model_to_json(model), out);
  return kExitOk;
}

struct LtrRerankOptions {
  std::string model;
  std::vector<std::string> runs;
  std::string first_stage;
  std::string output;
};

int cmd_ltr_rerank(const LtrRerankOptions& o, std::ostream& out) {
  const auto model = ltr::model_from_json(read_text(o.model));
  const auto runs = read_runs(o.runs);
  emit(o.output, write_run(ltr::rerank(model, runs, o.first_stage), "ltr"), out);
  return kExitOk;
}

struct ScheduleOptions {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  long long cycle_iters = 0;
  long long total_iters = 0;
  long long iters_per_epoch = 1;
  std::string format = "json";
  std::string output;
};

int cmd_schedule(const ScheduleOptions& o, std::ostream& out) {
  if (o.iters_per_epoch < 1) throw UsageError("--iters-per-epoch must be at least 1");
  fge::ScheduleConfig cfg{o.alpha1, o.alpha2, o.cycle_iters * o.iters_per_epoch, o.total_iters * o.iters_per_epoch};
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  const auto schedule = fge::build_schedule(cfg);
  emit(o.output, o.format == "csv" ? fge::schedule_to_csv(schedule) : fge::schedule_to_json(schedule), out);
  return kExitOk;
}

struct CompareOptions {
  std::string run_a;
  std::string run_b;
  std::string qrels;
  std::string metric;
  std::size_t iters = 10000;
  std::size_t cutoff = 10;
  bool exact = false;
  bool json = false;
};

int cmd_compare(const CompareOptions& o, std::uint64_t seed, std::ostream& out) {
  const auto metric = stats::parse_metric(o.metric);
  if (!metric) throw UsageError("unknown metric '" + o.metric + "'");
  if (o.iters == 0) throw UsageError("--iters must be positive");
  if (o.cutoff == 0) throw UsageError("--cutoff must be positive");
  const RunList a = canonicalize(read_run_file(o.run_a));
  const RunList b = canonicalize(read_run_file(o.run_b));
  const Qrels qrels = read_qrels_file(o.qrels);
  const auto result = o.exact ? stats::paired_exact_test(a, b, qrels, *metric, o.cutoff)
                              : stats::paired_randomization_test(a, b, qrels, *metric, o.iters, seed, o.cutoff);
  out << (o.json ? stats::to_json(result) : stats::to_text(result)) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rankfuse: rank fusion, learning-to-rank meta-combination and IR evaluation"};
  app.name(args.empty() ? "rankfuse" : args.front());
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = -1;
  app.add_option("--seed", seed, "Seed for sampling and resampling");
  app.add_option("--threads", threads, "Worker threads, 0 = auto (env RANKFUSE_THREADS)")->check(CLI::NonNegativeNumber);

  FuseOptions fo;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse several runs into one ranking");
  fuse_cmd->add_option("--method", fo.method, "avg, rrf, mapfuse, slidefuse or mapslidefuse")
      ->required()
      ->check(CLI::IsMember({"avg", "average", "rrf", "mapfuse", "slidefuse", "mapslidefuse"}));
  fuse_cmd->add_option("--runs", fo.runs, "Input TREC runs")->required();
  fuse_cmd->add_option("--weights-qrels", fo.weights_qrels, "Held-out qrels for MAP weights");
  fuse_cmd->add_option("--weights-runs", fo.weights_runs, "Runs scored on the held-out qrels (default: --runs)");
  fuse_cmd->add_option("--weights-json", fo.weights_json, "Precomputed {system: weight} JSON");
  fuse_cmd->add_option("--train-qrels", fo.train_qrels, "Training qrels for positional relevance");
  fuse_cmd->add_option("--train-runs", fo.train_runs, "Training runs (default: --runs)");
  fuse_cmd->add_option("--positional-model", fo.positional_model, "Load a positional relevance model JSON");
  fuse_cmd->add_option("--save-positional-model", fo.save_positional_model, "Write the estimated positional model");
  fuse_cmd->add_option("--k", fo.k, "RRF smoothing constant")->capture_default_str();
  fuse_cmd->add_option("--window", fo.window, "SlideFuse half-window")->capture_default_str();
  fuse_cmd->add_option("--depth", fo.depth, "Output depth per query")->capture_default_str();
  fuse_cmd->add_option("--normalize", fo.normalize, "Score normalization for avg")
      ->check(CLI::IsMember({"none", "minmax"}))
      ->capture_default_str();
  fuse_cmd->add_option("--tag", fo.tag, "Run tag written to the output (default: method)");
  fuse_cmd->add_option("-o,--output", fo.output, "Output run file (default: stdout)");

  EvalOptions eo;
  auto* eval_cmd = app.add_subcommand("eval", "Compute MAP, MRR and MRR@k");
  eval_cmd->add_option("--run", eo.run, "TREC run")->required();
  eval_cmd->add_option("--qrels", eo.qrels, "TREC qrels")->required();
  eval_cmd->add_option("--cutoff", eo.cutoff, "k for MRR@k")->capture_default_str();
  eval_cmd->add_flag("--per-query", eo.per_query, "Also print per-query values");
  eval_cmd->add_flag("--json", eo.json, "Print JSON");

  auto* ltr_cmd = app.add_subcommand("ltr", "Learning-to-rank meta-combiner");
  ltr_cmd->require_subcommand(1);
  LtrTrainOptions to;
  auto* train_cmd = ltr_cmd->add_subcommand("train", "Sample training groups and fit a model");
  train_cmd->add_option("--runs", to.runs, "First-stage and checkpoint runs")->required();
  train_cmd->add_option("--first-stage", to.first_stage, "System tag of the first-stage run")->required();
  train_cmd->add_option("--qrels", to.qrels, "Training qrels")->required();
  train_cmd->add_option("--model", to.model, "Output model JSON")->required();
  train_cmd->add_option("--rounds", to.rounds)->capture_default_str();
  train_cmd->add_option("--max-depth", to.max_depth)->capture_default_str();
  train_cmd->add_option("--eta", to.eta)->capture_default_str();
  train_cmd->add_option("--min-child-weight", to.min_child_weight)->capture_default_str();
  train_cmd->add_option("--sigma", to.sigma)->capture_default_str();
  train_cmd->add_option("--negatives", to.negatives, "Negatives per query")->capture_default_str();
  LtrRerankOptions ro;
  auto* rerank_cmd = ltr_cmd->add_subcommand("rerank", "Score runs with a trained model");
  rerank_cmd->add_option("--model", ro.model, "Model JSON")->required();
  rerank_cmd->add_option("--runs", ro.runs, "First-stage and checkpoint runs")->required();
  rerank_cmd->add_option("--first-stage", ro.first_stage, "System tag of the first-stage run")->required();
  rerank_cmd->add_option("-o,--output", ro.output, "Output run file (default: stdout)");

  ScheduleOptions so;
  auto* schedule_cmd = app.add_subcommand("schedule", "Emit an FGE cyclical learning-rate schedule");
  schedule_cmd->add_option("--alpha1", so.alpha1, "Rate at cycle ends")->required();
  schedule_cmd->add_option("--alpha2", so.alpha2, "Rate at mid-cycle")->required();
  schedule_cmd->add_option("--cycle-iters", so.cycle_iters, "Cycle length (even)")->required();
  schedule_cmd->add_option("--total-iters", so.total_iters, "Schedule length")->required();
  schedule_cmd->add_option("--iters-per-epoch", so.iters_per_epoch, "Multiplier for epoch-denominated lengths")
      ->capture_default_str();
  schedule_cmd->add_option("--format", so.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  schedule_cmd->add_option("-o,--output", so.output, "Output file (default: stdout)");

  CompareOptions co;
  auto* compare_cmd = app.add_subcommand("compare", "Paired randomization test between two runs");
  compare_cmd->add_option("--run-a", co.run_a)->required();
  compare_cmd->add_option("--run-b", co.run_b)->required();
  compare_cmd->add_option("--qrels", co.qrels)->required();
  compare_cmd->add_option("--metric", co.metric, "ap, rr or rr_at_k")
      ->required()
      ->check(CLI::IsMember({"ap", "rr", "rr_at_k"}));
  compare_cmd->add_option("--iters", co.iters)->capture_default_str();
  compare_cmd->add_option("--cutoff", co.cutoff)->capture_default_str();
  compare_cmd->add_flag("--exact", co.exact, "Enumerate all sign patterns (at most 20 queries)");
  compare_cmd->add_flag("--json", co.json, "Print JSON");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("rankfuse");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  int workers = threads >= 0 ? threads : threads_from_env().value_or(0);
  set_thread_count(workers);

  try {
    if (fuse_cmd->parsed()) return cmd_fuse(fo, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eo, out);
    if (train_cmd->parsed()) return cmd_ltr_train(to, seed, out, err);
    if (rerank_cmd->parsed()) return cmd_ltr_rerank(ro, out);
    if (schedule_cmd->parsed()) return cmd_schedule(so, out);
    if (compare_cmd->parsed()) return cmd_compare(co, seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace rankfuse::cli
