// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "random.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/ltr.hpp"

namespace rankfuse::ltr {

void LtrConfig::validate() const {
  if (max_depth == 0) throw ValidationError("ltr: max_depth must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("ltr: eta must be in (0, 1]");
  if (!(min_child_weight >= 0.0)) throw ValidationError("ltr: min_child_weight must be non-negative");
  if (!(sigma > 0.0)) throw ValidationError("ltr: sigma must be positive");
}

void validate_groups(const std::vector<TrainingGroup>& groups) {
  if (groups.empty()) throw ValidationError("ltr: no training groups");
  const std::size_t width = groups.front().rows.empty() ? 0 : groups.front().rows.front().features.size();
  if (width == 0) throw ValidationError("ltr: training rows have no features");
  for (const auto& g : groups) {
    if (g.rows.size() < 2) throw ValidationError("ltr: group '" + g.query_id + "' has fewer than two rows");
    bool pos = false, neg = false;
    for (const auto& row : g.rows) {
      if (row.label != 0 && row.label != 1) {
        throw ValidationError("ltr: group '" + g.query_id + "' has a non-binary label");
      }
      if (row.features.size() != width) {
        throw ValidationError("ltr: group '" + g.query_id + "' has inconsistent feature width");
      }
      for (double x : row.features) {
        if (!std::isfinite(x)) throw ValidationError("ltr: group '" + g.query_id + "' has a non-finite feature");
      }
      (row.label == 1 ? pos : neg) = true;
    }
    if (!pos || !neg) {
      throw ValidationError("ltr: group '" + g.query_id + "' needs both a relevant and a non-relevant row");
    }
  }
}

namespace lambda {
namespace {

// Prefix tables over a ranked label list: hits[p] relevant rows in [0, p],
// harmonic[p] = sum over relevant q <= p of 1 / (q + 1).
struct ApDeltaTable {
  std::vector<double> hits;
  std::vector<double> harmonic;
  double relevant = 0.0;

  explicit ApDeltaTable(std::span<const int> ranked) : hits(ranked.size()), harmonic(ranked.size()) {
    double h = 0.0, c = 0.0;
    for (std::size_t p = 0; p < ranked.size(); ++p) {
      if (ranked[p] != 0) {
        c += 1.0;
        h += 1.0 / static_cast<double>(p + 1);
      }
      hits[p] = c;
      harmonic[p] = h;
    }
    relevant = c;
  }

  // `rel` holds a relevant row, `non` a non-relevant one.
  double delta(std::size_t rel, std::size_t non) const {
    const auto at = [](std::size_t p) { return static_cast<double>(p + 1); };
    double change;
    if (rel < non) {
      change = hits[non] / at(non) - hits[rel] / at(rel) - (harmonic[non - 1] - harmonic[rel]);
    } else {
      change = (hits[non] + 1.0) / at(non) - hits[rel] / at(rel) + (harmonic[rel - 1] - harmonic[non]);
    }
    return change / relevant;
  }
};

}  // namespace

double ap_swap_delta(std::span<const int> ranked_labels, std::size_t a, std::size_t b) {
  if (a >= ranked_labels.size() || b >= ranked_labels.size()) throw ValidationError("ap delta: position out of range");
  const bool a_rel = ranked_labels[a] != 0, b_rel = ranked_labels[b] != 0;
  if (a_rel == b_rel) return 0.0;
  ApDeltaTable table(ranked_labels);
  return a_rel ? table.delta(a, b) : table.delta(b, a);
}

Gradients group_gradients(std::span<const int> labels, std::span<const double> scores,
                          std::span<const std::size_t> tie_order, double sigma) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return tie_order[a] < tie_order[b];
  });
  std::vector<int> ranked(n);
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) {
    ranked[p] = labels[order[p]];
    position[order[p]] = p;
  }
  const ApDeltaTable table(ranked);

  Gradients g{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] != 0) continue;
      const double delta = std::fabs(table.delta(position[i], position[j]));
      if (delta == 0.0) continue;
      const double rho = 1.0 / (1.0 + std::exp(sigma * (scores[i] - scores[j])));
      const double lam = sigma * rho * delta;
      const double h = sigma * sigma * rho * (1.0 - rho) * delta;
      g.grad[i] -= lam;
      g.grad[j] += lam;
      g.hess[i] += h;
      g.hess[j] += h;
    }
  }
  return g;
}

namespace {

// Splits must improve the objective by more than this.
constexpr double kMinSplitGain = 1e-12;

double leaf_weight(double g, double h) {
  if (!(h > 0.0)) return 0.0;
  const double w = -g / h;
  return std::isfinite(w) ? w : 0.0;
}

double structure_score(double g, double h) { return h > 0.0 ? g * g / h : 0.0; }

class TreeBuilder {
 public:
  TreeBuilder(std::span<const double> features, std::size_t width, std::span<const double> grad,
              std::span<const double> hess, std::size_t max_depth, double min_child_weight)
      : x_(features), width_(width), grad_(grad), hess_(hess), max_depth_(max_depth), mcw_(min_child_weight) {}

  RegressionTree build() {
    std::vector<std::size_t> rows(grad_.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow(rows, 0);
    return RegressionTree{std::move(nodes_)};
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = kMinSplitGain;
  };

  double at(std::size_t row, std::size_t f) const { return x_[row * width_ + f]; }

  Split best_split(const std::vector<std::size_t>& rows, double g, double h) const {
    Split best;
    const double parent = structure_score(g, h);
    std::vector<std::size_t> sorted = rows;
    for (std::size_t f = 0; f < width_; ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return at(a, f) < at(b, f); });
      double gl = 0.0, hl = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        gl += grad_[sorted[k]];
        hl += hess_[sorted[k]];
        const double lo = at(sorted[k], f), hi = at(sorted[k + 1], f);
        if (!(lo < hi)) continue;
        const double gr = g - gl, hr = h - hl;
        if (hl < mcw_ || hr < mcw_ || !(hl > 0.0) || !(hr > 0.0)) continue;
        const double gain = structure_score(gl, hl) + structure_score(gr, hr) - parent;
        if (gain > best.gain) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(lo < threshold && threshold <= hi)) threshold = hi;
          best = {static_cast<int>(f), threshold, gain};
        }
      }
    }
    return best;
  }

  int grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    double g = 0.0, h = 0.0;
    for (std::size_t r : rows) {
      g += grad_[r];
      h += hess_[r];
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{-1, 0.0, -1, -1, leaf_weight(g, h)});
    if (depth >= max_depth_ || rows.size() < 2) return id;

    const Split split = best_split(rows, g, h);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (at(r, static_cast<std::size_t>(split.feature)) < split.threshold ? left : right).push_back(r);
    }
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[static_cast<std::size_t>(id)] = TreeNode{split.feature, split.threshold, l, r, 0.0};
    return id;
  }

  std::span<const double> x_;
  std::size_t width_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::size_t max_depth_;
  double mcw_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree fit_tree(std::span<const double> features, std::size_t width, std::span<const double> grad,
                        std::span<const double> hess, std::size_t max_depth, double min_child_weight) {
  if (width == 0 || features.size() != grad.size() * width || grad.size() != hess.size()) {
    throw ValidationError("fit_tree: inconsistent input sizes");
  }
  return TreeBuilder(features, width, grad, hess, max_depth, min_child_weight).build();
}

}  // namespace lambda

LtrModel train(const std::vector<TrainingGroup>& groups, const LtrConfig& cfg) {
  cfg.validate();
  validate_groups(groups);
  const std::size_t width = groups.front().rows.front().features.size();

  std::vector<double> features;
  std::vector<int> labels;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> tie_order;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    for (const auto& row : g.rows) {
      features.insert(features.end(), row.features.begin(), row.features.end());
      labels.push_back(row.label);
    }
    offsets.push_back(labels.size());

    // Fixed seeded permutation that orders rows with equal model scores.
    std::vector<std::size_t> perm(g.rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ detail::fnv1a(g.query_id)));
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[detail::uniform_below(rng, i)]);
    }
    std::vector<std::size_t> rank(perm.size());
    for (std::size_t p = 0; p < perm.size(); ++p) rank[perm[p]] = p;
    tie_order.insert(tie_order.end(), rank.begin(), rank.end());
  }

  const std::size_t rows = labels.size();
  LtrModel model;
  model.feature_count = width;
  model.base_score = 0.0;
  model.eta = cfg.eta;

  std::vector<double> scores(rows, model.base_score);
  std::vector<double> grad(rows), hess(rows);
  const auto group_count = static_cast<std::ptrdiff_t>(groups.size());
  const auto row_count = static_cast<std::ptrdiff_t>(rows);

  for (std::size_t round = 0; round < cfg.rounds; ++round) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t gi = 0; gi < group_count; ++gi) {
      const std::size_t lo = offsets[static_cast<std::size_t>(gi)];
      const std::size_t hi = offsets[static_cast<std::size_t>(gi) + 1];
      const auto lg = lambda::group_gradients(
          std::span<const int>(labels).subspan(lo, hi - lo), std::span<const double>(scores).subspan(lo, hi - lo),
          std::span<const std::size_t>(tie_order).subspan(lo, hi - lo), cfg.sigma);
      std::copy(lg.grad.begin(), lg.grad.end(), grad.begin() + static_cast<std::ptrdiff_t>(lo));
      std::copy(lg.hess.begin(), lg.hess.end(), hess.begin() + static_cast<std::ptrdiff_t>(lo));
    }

    RegressionTree tree = lambda::fit_tree(features, width, grad, hess, cfg.max_depth, cfg.min_child_weight);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < row_count; ++r) {
      const auto row = std::span<const double>(features).subspan(static_cast<std::size_t>(r) * width, width);
      scores[static_cast<std::size_t>(r)] += cfg.eta * tree.predict(row);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace rankfuse::ltr
