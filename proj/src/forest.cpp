#include "fislab/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fislab/error.hpp"
#include "fislab/parallel.hpp"
#include "fislab/random.hpp"

namespace fislab {

int ForestHyperparams::resolved_max_features(std::size_t n_features) const {
  const int f = static_cast<int>(n_features);
  if (max_features <= 0) {
    return std::min(f, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(f)))));
  }
  return std::clamp(max_features, 1, f);
}

void ForestHyperparams::validate() const {
  if (n_trees < 1) {
    throw Error(ErrorKind::invalid_argument, "forest: n_trees must be >= 1");
  }
  if (min_samples_leaf < 1) {
    throw Error(ErrorKind::invalid_argument, "forest: min_samples_leaf must be >= 1");
  }
  if (max_depth < 0 || max_features < 0) {
    throw Error(ErrorKind::invalid_argument, "forest: negative hyperparameter");
  }
}

double ForestModel::total_impurity_decrease() const {
  double total = 0.0;
  for (const auto& tree : trees) {
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf()) total += node.impurity_decrease;
    }
  }
  return total;
}

namespace {

struct SplitCandidate {
  double decrease = 0.0;
  std::int32_t feature = -1;
  double threshold = 0.0;
};

// Scratch buffers reused across nodes of one tree.
struct TreeScratch {
  std::vector<std::uint32_t> samples;        // bootstrap rows, partitioned in place
  std::vector<std::uint32_t> feature_pool;   // candidate-draw pool
  std::vector<std::pair<double, int>> cell;  // (value, label) sorted per candidate
};

struct NodeTask {
  std::size_t begin = 0;
  std::size_t end = 0;
  int depth = 0;
  std::int32_t node_index = 0;
};

Tree build_tree(const Dataset& d, const ForestHyperparams& h, std::uint64_t tree_seed) {
  const std::size_t n = d.n_samples();
  const std::size_t f = d.n_features();
  const int mtry = h.resolved_max_features(f);
  const double n_total = static_cast<double>(n);

  Rng rng(tree_seed);
  TreeScratch scratch;
  scratch.samples.resize(n);
  std::vector<std::uint8_t> drawn(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = rng.below(n);
    scratch.samples[i] = static_cast<std::uint32_t>(r);
    drawn[r] = 1;
  }
  Tree tree;
  for (std::size_t i = 0; i < n; ++i) {
    if (!drawn[i]) tree.oob_rows.push_back(static_cast<std::uint32_t>(i));
  }

  scratch.feature_pool.resize(f);
  std::iota(scratch.feature_pool.begin(), scratch.feature_pool.end(), 0u);

  tree.nodes.push_back(TreeNode{});
  std::vector<NodeTask> stack;
  stack.push_back({0, n, 0, 0});
  std::vector<std::uint32_t> candidates;
  candidates.reserve(static_cast<std::size_t>(mtry));

  while (!stack.empty()) {
    const NodeTask task = stack.back();
    stack.pop_back();
    const std::size_t count = task.end - task.begin;

    std::int32_t pos = 0;
    for (std::size_t s = task.begin; s < task.end; ++s) {
      pos += d.labels[scratch.samples[s]];
    }
    const std::int32_t neg = static_cast<std::int32_t>(count) - pos;
    TreeNode& node_init = tree.nodes[static_cast<std::size_t>(task.node_index)];
    node_init.sample_count = static_cast<std::int32_t>(count);
    node_init.pos_count = pos;
    node_init.neg_count = neg;

    const bool pure = pos == 0 || neg == 0;
    const bool too_small = count < 2 * static_cast<std::size_t>(h.min_samples_leaf);
    const bool at_depth = h.max_depth > 0 && task.depth >= h.max_depth;
    if (pure || too_small || at_depth) continue;  // leaf

    // Uniform subset of mtry candidate features, scanned in index order so
    // equal decreases resolve to the lower feature index.
    candidates.clear();
    for (int i = 0; i < mtry; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) + rng.below(f - static_cast<std::size_t>(i));
      std::swap(scratch.feature_pool[static_cast<std::size_t>(i)],
                scratch.feature_pool[j]);
      candidates.push_back(scratch.feature_pool[static_cast<std::size_t>(i)]);
    }
    std::sort(candidates.begin(), candidates.end());

    const double dcount = static_cast<double>(count);
    const double dpos = static_cast<double>(pos);
    const double dneg = static_cast<double>(neg);
    const double node_gini = 2.0 * (dpos / dcount) * (dneg / dcount);
    const double node_weighted = dcount / n_total * node_gini;

    SplitCandidate best;
    for (std::uint32_t feat : candidates) {
      auto& cell = scratch.cell;
      cell.clear();
      for (std::size_t s = task.begin; s < task.end; ++s) {
        const std::uint32_t row = scratch.samples[s];
        cell.emplace_back(d.at(row, feat), d.labels[row]);
      }
      std::sort(cell.begin(), cell.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      double left_n = 0.0;
      double left_pos = 0.0;
      for (std::size_t s = 0; s + 1 < cell.size(); ++s) {
        left_n += 1.0;
        left_pos += cell[s].second;
        if (cell[s + 1].first == cell[s].first) continue;  // not a boundary
        const double right_n = dcount - left_n;
        if (left_n < h.min_samples_leaf || right_n < h.min_samples_leaf) continue;
        const double right_pos = dpos - left_pos;
        const double gl = 2.0 * (left_pos / left_n) * ((left_n - left_pos) / left_n);
        const double gr = 2.0 * (right_pos / right_n) * ((right_n - right_pos) / right_n);
        const double weighted_children = (left_n * gl + right_n * gr) / n_total;
        const double decrease = node_weighted - weighted_children;
        if (decrease > best.decrease) {
          best.decrease = decrease;
          best.feature = static_cast<std::int32_t>(feat);
          best.threshold = 0.5 * (cell[s].first + cell[s + 1].first);
        }
      }
    }
    if (best.feature < 0 || !(best.decrease > 0.0)) continue;  // no useful split

    const auto mid_it = std::partition(
        scratch.samples.begin() + static_cast<std::ptrdiff_t>(task.begin),
        scratch.samples.begin() + static_cast<std::ptrdiff_t>(task.end),
        [&](std::uint32_t row) {
          return d.at(row, static_cast<std::size_t>(best.feature)) <= best.threshold;
        });
    const std::size_t mid = static_cast<std::size_t>(
        mid_it - scratch.samples.begin());

    const std::int32_t left_index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes.push_back(TreeNode{});
    TreeNode& node = tree.nodes[static_cast<std::size_t>(task.node_index)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.impurity_decrease = best.decrease;
    node.left = left_index;
    node.right = left_index + 1;
    stack.push_back({task.begin, mid, task.depth + 1, left_index});
    stack.push_back({mid, task.end, task.depth + 1, left_index + 1});
  }
  return tree;
}

}  // namespace

ForestModel fit(const Dataset& d, const ForestHyperparams& h, int threads) {
  h.validate();
  if (d.n_samples() < 2) {
    throw Error(ErrorKind::domain, "fit requires at least 2 samples");
  }
  if (d.n_features() == 0) {
    throw Error(ErrorKind::domain, "fit requires at least 1 feature");
  }
  const std::size_t n_pos = d.positive_count();
  if (n_pos == 0 || n_pos == d.n_samples()) {
    throw Error(ErrorKind::class_exhaustion, "fit requires both classes present");
  }

  ForestModel model;
  model.n_features = d.n_features();
  model.hyperparams = h;
  model.trees.resize(static_cast<std::size_t>(h.n_trees));
  parallel_for(static_cast<std::size_t>(h.n_trees), threads, [&](std::size_t t) {
    model.trees[t] = build_tree(d, h, derive_seed(h.seed, SeedStream::tree, t));
  });
  return model;
}

namespace {

double tree_score(const Tree& tree, const double* row) {
  std::int32_t idx = 0;
  while (!tree.nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
    idx = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(idx)];
  return static_cast<double>(leaf.pos_count) /
         static_cast<double>(leaf.pos_count + leaf.neg_count);
}

}  // namespace

std::vector<double> predict_proba(const ForestModel& m, const double* rows,
                                  std::size_t n_rows, std::size_t n_cols) {
  if (n_cols != m.n_features) {
    throw Error(ErrorKind::invalid_argument,
                "predict_proba: expected " + std::to_string(m.n_features) +
                    " features, got " + std::to_string(n_cols));
  }
  std::vector<double> scores(n_rows, 0.0);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double* row = rows + i * n_cols;
    double sum = 0.0;
    for (const auto& tree : m.trees) sum += tree_score(tree, row);
    scores[i] = sum / static_cast<double>(m.trees.size());
  }
  return scores;
}

std::vector<double> predict_proba(const ForestModel& m, const Dataset& d) {
  return predict_proba(m, d.features.data(), d.n_samples(), d.n_features());
}

std::vector<double> gini_importance(const ForestModel& m) {
  std::vector<double> importance(m.n_features, 0.0);
  double total = 0.0;
  for (const auto& tree : m.trees) {
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      importance[static_cast<std::size_t>(node.feature)] += node.impurity_decrease;
      total += node.impurity_decrease;
    }
  }
  if (total <= 0.0) {
    // No split anywhere (e.g. all-constant features): uniform fallback.
    std::fill(importance.begin(), importance.end(),
              1.0 / static_cast<double>(m.n_features));
    return importance;
  }
  for (double& v : importance) v /= total;
  return importance;
}

nlohmann::ordered_json model_to_json(const ForestModel& m) {
  nlohmann::ordered_json j;
  j["n_features"] = m.n_features;
  j["n_trees"] = m.trees.size();
  j["hyperparams"] = {{"n_trees", m.hyperparams.n_trees},
                      {"max_features", m.hyperparams.max_features},
                      {"min_samples_leaf", m.hyperparams.min_samples_leaf},
                      {"max_depth", m.hyperparams.max_depth},
                      {"seed", m.hyperparams.seed}};
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const auto& tree : m.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& node : tree.nodes) {
      nodes.push_back({{"feature", node.feature},
                       {"threshold", node.threshold},
                       {"impurity_decrease", node.impurity_decrease},
                       {"sample_count", node.sample_count},
                       {"left", node.left},
                       {"right", node.right},
                       {"pos", node.pos_count},
                       {"neg", node.neg_count}});
    }
    trees.push_back({{"nodes", std::move(nodes)},
                     {"oob_rows", tree.oob_rows}});
  }
  j["trees"] = std::move(trees);
  return j;
}

}  // namespace fislab
