#include <doctest.h>

#include <cmath>

#include "fislab/error.hpp"
#include "fislab/forest.hpp"
#include "fislab/metrics.hpp"
#include "fislab/random.hpp"

using namespace fislab;

namespace {

Dataset make(std::vector<double> features, std::vector<int> labels,
             std::vector<std::string> names) {
  Dataset d;
  d.features = std::move(features);
  d.labels = std::move(labels);
  d.feature_names = std::move(names);
  d.provenance = "test";
  d.validate();
  return d;
}

// 25 jittered points per XOR quadrant.
Dataset xor_dataset(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> feats;
  std::vector<int> labels;
  for (int qx = 0; qx < 2; ++qx) {
    for (int qy = 0; qy < 2; ++qy) {
      for (int i = 0; i < 25; ++i) {
        feats.push_back(0.5 * qx + 0.05 + 0.4 * rng.uniform());
        feats.push_back(0.5 * qy + 0.05 + 0.4 * rng.uniform());
        labels.push_back(qx ^ qy);
      }
    }
  }
  return make(std::move(feats), std::move(labels), {"x1", "x2"});
}

double training_accuracy(const ForestModel& m, const Dataset& d) {
  const std::vector<double> scores = predict_proba(m, d);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.n_samples(); ++i) {
    correct += (scores[i] > 0.5 ? 1 : 0) == d.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(d.n_samples());
}

}  // namespace

TEST_CASE("perfectly separable single feature") {
  Rng rng(42);
  std::vector<double> feats;
  std::vector<int> labels;
  for (int i = 0; i < 80; ++i) {
    const double x = rng.uniform();
    feats.push_back(x);
    labels.push_back(x < 0.5 ? 0 : 1);
  }
  const Dataset d = make(feats, labels, {"x"});
  ForestHyperparams h;
  h.n_trees = 10;
  h.seed = 1;
  const ForestModel m = fit(d, h);
  for (const auto& tree : m.trees) {
    REQUIRE_FALSE(tree.nodes.empty());
    CHECK(tree.nodes[0].feature == 0);  // every root splits on the only feature
  }
  CHECK(training_accuracy(m, d) == doctest::Approx(1.0));
  CHECK(gini_importance(m) == std::vector<double>{1.0});
}

TEST_CASE("constant features produce single-leaf trees and prior scores") {
  std::vector<double> feats;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    feats.push_back(3.5);
    labels.push_back(i < 10 ? 1 : 0);
  }
  const Dataset d = make(feats, labels, {"c"});
  ForestHyperparams h;
  h.n_trees = 200;
  h.seed = 2;
  const ForestModel m = fit(d, h);
  for (const auto& tree : m.trees) CHECK(tree.nodes.size() == 1);
  CHECK(m.total_impurity_decrease() == 0.0);
  const std::vector<double> scores = predict_proba(m, d);
  for (double s : scores) {
    CHECK(s == doctest::Approx(0.25).epsilon(0.25));  // close to the class prior
  }
  // uniform fallback importance
  CHECK(gini_importance(m) == std::vector<double>{1.0});
}

TEST_CASE("xor needs depth 2 and reaches training accuracy 1") {
  const Dataset d = xor_dataset(7);
  ForestHyperparams h;
  h.n_trees = 60;
  h.seed = 3;
  const ForestModel m = fit(d, h);
  int deep_trees = 0;
  for (const auto& tree : m.trees) {
    if (tree.nodes.size() >= 7) ++deep_trees;  // at least two split levels
  }
  CHECK(deep_trees > 40);
  CHECK(training_accuracy(m, d) == doctest::Approx(1.0));
}

TEST_CASE("fit errors") {
  const Dataset single_class = make({1, 2, 3}, {1, 1, 1}, {"x"});
  CHECK_THROWS_AS(fit(single_class, ForestHyperparams{}), Error);
  const Dataset one_row = make({1}, {1}, {"x"});
  CHECK_THROWS_AS(fit(one_row, ForestHyperparams{}), Error);
}

TEST_CASE("predict_proba column mismatch is rejected") {
  const Dataset d = make({0, 1, 1, 0}, {0, 1}, {"a", "b"});
  ForestHyperparams h;
  h.n_trees = 3;
  const ForestModel m = fit(d, h);
  const std::vector<double> one_col = {0.5, 0.5};
  CHECK_THROWS_AS(predict_proba(m, one_col.data(), 2, 1), Error);
}

TEST_CASE("two fits with identical seed are bit-identical; threads do not matter") {
  SyntheticSpec spec;
  spec.n_features = 8;
  spec.n_samples = 300;
  spec.positive_fraction = 0.5;
  spec.seed = 5;
  const Dataset d = generate_synthetic(spec);
  ForestHyperparams h;
  h.n_trees = 24;
  h.seed = 11;
  const ForestModel a = fit(d, h, 1);
  const ForestModel b = fit(d, h, 1);
  const ForestModel c = fit(d, h, 4);
  CHECK(a == b);
  CHECK(a == c);
  ForestHyperparams h2 = h;
  h2.seed = 12;
  CHECK_FALSE(fit(d, h2) == a);
}

TEST_CASE("appending a constant feature changes nothing but its zero importance") {
  SyntheticSpec spec;
  spec.n_features = 5;
  spec.n_samples = 250;
  spec.positive_fraction = 0.45;
  spec.seed = 6;
  const Dataset d = generate_synthetic(spec);

  Dataset augmented = d;
  augmented.feature_names.push_back("const");
  std::vector<double> feats;
  for (std::size_t i = 0; i < d.n_samples(); ++i) {
    const double* row = d.row(i);
    feats.insert(feats.end(), row, row + d.n_features());
    feats.push_back(0.77);
  }
  augmented.features = std::move(feats);
  augmented.validate();

  ForestHyperparams h;
  h.n_trees = 30;
  h.seed = 21;
  h.max_features = 6;  // fixed candidate count on both datasets
  const ForestModel base = fit(d, h);

  ForestHyperparams h6 = h;
  const ForestModel aug = fit(augmented, h6);
  const std::vector<double> imp = gini_importance(aug);
  CHECK(imp[5] == 0.0);

  // scores agree row by row: a constant column is never split on, and with
  // max_features = all the candidate subsets coincide
  const std::vector<double> s1 = predict_proba(base, d);
  const std::vector<double> s2 = predict_proba(aug, augmented);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-12));
  }
}

TEST_CASE("leaf sample counts sum to the bootstrap total") {
  SyntheticSpec spec;
  spec.n_features = 4;
  spec.n_samples = 120;
  spec.positive_fraction = 0.5;
  spec.seed = 9;
  const Dataset d = generate_synthetic(spec);
  ForestHyperparams h;
  h.n_trees = 12;
  h.seed = 30;
  const ForestModel m = fit(d, h);
  for (const auto& tree : m.trees) {
    std::int64_t leaf_total = 0;
    for (const auto& node : tree.nodes) {
      CHECK(node.impurity_decrease >= 0.0);
      if (node.is_leaf()) leaf_total += node.sample_count;
      else CHECK(node.feature < static_cast<std::int32_t>(d.n_features()));
    }
    CHECK(leaf_total == static_cast<std::int64_t>(d.n_samples()));
    // oob rows: sorted, distinct, not too many
    CHECK(tree.oob_rows.size() < d.n_samples());
    for (std::size_t i = 1; i < tree.oob_rows.size(); ++i) {
      CHECK(tree.oob_rows[i] > tree.oob_rows[i - 1]);
    }
  }
}

TEST_CASE("importance aligns with the synthetic coefficient order") {
  SyntheticSpec spec;
  spec.n_features = 10;
  spec.n_samples = 2500;
  spec.positive_fraction = 0.5;
  spec.seed = 14;
  const Dataset d = generate_synthetic(spec);
  // mean importance over a few seeds, then rank-correlate with the true order
  std::vector<double> mean_importance(d.n_features(), 0.0);
  const int reps = 8;
  for (int rep = 0; rep < reps; ++rep) {
    ForestHyperparams h;
    h.n_trees = 40;
    h.seed = derive_seed(100, SeedStream::forest_model, static_cast<std::uint64_t>(rep));
    const std::vector<double> imp = gini_importance(fit(d, h, 4));
    for (std::size_t j = 0; j < imp.size(); ++j) mean_importance[j] += imp[j];
  }
  const RankVector got = rank_from_importance(mean_importance, d.feature_names);
  const RankVector truth =
      rank_from_importance(SyntheticSpec::default_coefficients(10), d.feature_names);
  const double srcc = stability_indexes(truth, got).srcc;
  CHECK(srcc >= 0.85);
  // the strongest coefficient lands at or next to the top
  CHECK(got.ranks[9] <= 2);
}

TEST_CASE("gini importance is normalized and nonnegative") {
  const Dataset d = xor_dataset(77);
  ForestHyperparams h;
  h.n_trees = 15;
  h.seed = 44;
  const ForestModel m = fit(d, h);
  const std::vector<double> imp = gini_importance(m);
  double total = 0.0;
  for (double v : imp) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("model JSON dump has the node arrays") {
  const Dataset d = xor_dataset(3);
  ForestHyperparams h;
  h.n_trees = 2;
  h.seed = 1;
  const ForestModel m = fit(d, h);
  const auto j = model_to_json(m);
  CHECK(j["n_trees"] == 2);
  CHECK(j["trees"].size() == 2);
  CHECK(j["trees"][0]["nodes"].size() == m.trees[0].nodes.size());
}

TEST_CASE("max depth and min samples leaf are honored") {
  const Dataset d = xor_dataset(15);
  ForestHyperparams h;
  h.n_trees = 8;
  h.seed = 2;
  h.max_depth = 1;
  const ForestModel stumps = fit(d, h);
  for (const auto& tree : stumps.trees) CHECK(tree.nodes.size() <= 3);

  ForestHyperparams h2;
  h2.n_trees = 8;
  h2.seed = 2;
  h2.min_samples_leaf = 20;
  const ForestModel chunky = fit(d, h2);
  for (const auto& tree : chunky.trees) {
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) CHECK(node.sample_count >= 20);
    }
  }
}
