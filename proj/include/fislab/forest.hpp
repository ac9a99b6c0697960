#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "fislab/dataset.hpp"

namespace fislab {

struct ForestHyperparams {
  int n_trees = 100;
  /// 0 resolves to ceil(sqrt(n_features)); otherwise clamped to [1, n_features].
  int max_features = 0;
  int min_samples_leaf = 1;
  int max_depth = 0;  // 0 = unlimited
  std::uint64_t seed = 0;

  int resolved_max_features(std::size_t n_features) const;
  void validate() const;

  bool operator==(const ForestHyperparams&) const = default;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double impurity_decrease = 0.0;  // Gini decrease weighted by node share
  std::int32_t sample_count = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t pos_count = 0;
  std::int32_t neg_count = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<std::uint32_t> oob_rows;  // training rows absent from the bootstrap

  bool operator==(const Tree&) const = default;
};

struct ForestModel {
  std::vector<Tree> trees;
  std::size_t n_features = 0;
  ForestHyperparams hyperparams;

  double total_impurity_decrease() const;
  bool operator==(const ForestModel&) const = default;
};

/// Trains one CART tree per bootstrap resample; at each node a uniform random
/// subset of max_features candidates is scanned over midpoint thresholds and
/// the split with the largest weighted Gini decrease wins (ties: lower feature
/// index, then lower threshold). Per-tree seeds derive from (seed, tree index)
/// so results are identical for any worker count.
ForestModel fit(const Dataset& d, const ForestHyperparams& h, int threads = 1);

/// Mean over trees of the leaf positive-class fraction.
std::vector<double> predict_proba(const ForestModel& m, const double* rows,
                                  std::size_t n_rows, std::size_t n_cols);
std::vector<double> predict_proba(const ForestModel& m, const Dataset& d);

/// Normalized mean-decrease-impurity: per-feature sums of weighted Gini
/// decreases over all splits, scaled to sum 1. A splitless forest falls back
/// to the uniform vector (total_impurity_decrease() == 0 flags that case).
std::vector<double> gini_importance(const ForestModel& m);

/// Debug dump of the node arrays.
nlohmann::ordered_json model_to_json(const ForestModel& m);

}  // namespace fislab
