#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fislab {

/// Tabular binary-classification dataset: row-major numeric feature matrix
/// plus {0,1} labels.
struct Dataset {
  std::vector<double> features;  // n_samples x n_features, row major
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::string provenance;

  std::size_t n_samples() const { return labels.size(); }
  std::size_t n_features() const { return feature_names.size(); }

  double at(std::size_t row, std::size_t col) const {
    return features[row * n_features() + col];
  }
  const double* row(std::size_t r) const { return features.data() + r * n_features(); }

  std::size_t positive_count() const;
  std::size_t feature_index(const std::string& name) const;  // throws on unknown

  /// Checks the structural invariants (shape, unique names, binary labels,
  /// finite values); throws Error on violation.
  void validate() const;
};

/// Recipe for the linear-combination synthetic generator: features uniform on
/// [0,1], label 1 iff coefficients . x > threshold.
struct SyntheticSpec {
  std::size_t n_features = 20;
  std::size_t n_samples = 10000;
  double positive_fraction = 0.5;
  std::uint64_t seed = 0;
  /// Empty -> coefficients proportional to (1..N), normalized to sum 1.
  std::vector<double> coefficients;
  /// Unset -> calibrated so the realized positive fraction matches
  /// positive_fraction (empirical quantile over a seeded 1e6-draw run).
  std::optional<double> threshold;

  static std::vector<double> default_coefficients(std::size_t n_features);
  std::vector<double> resolved_coefficients() const;
  void validate() const;
};

void to_json(nlohmann::ordered_json& j, const SyntheticSpec& spec);
void from_json(const nlohmann::json& j, SyntheticSpec& spec);

struct CsvOptions {
  std::string label_column;
  enum class Categorical { reject, ordinal, one_hot };
  enum class Missing { reject, impute_median };
  Categorical categorical = Categorical::reject;
  Missing missing = Missing::reject;
};

struct PruneEntry {
  std::string kept;
  std::string removed;
  double correlation = 0.0;  // |r| that triggered the removal
};

struct PruneLog {
  double cut_standard = 1.0;
  std::vector<PruneEntry> entries;
  bool too_few_features = false;  // pruning drove the dataset to a single feature
};

/// Quantile-calibrated decision threshold for the synthetic model; the
/// calibration draw is seeded independently of the data draw.
double calibrate_threshold(const std::vector<double>& coefficients,
                           double positive_fraction, std::uint64_t seed);

Dataset generate_synthetic(const SyntheticSpec& spec);

Dataset load_csv(const std::string& path, const CsvOptions& options);
void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_column = "label");

/// Row indices of a stratified without-replacement draw of size k, sorted
/// ascending. Class proportions preserved within one sample per class (each
/// class keeps at least one row). Deterministic per seed.
std::vector<std::size_t> stratified_indices(const Dataset& d, std::size_t k,
                                            std::uint64_t seed);

/// Materialized stratified_indices draw.
Dataset stratified_subsample(const Dataset& d, std::size_t k, std::uint64_t seed);

Dataset drop_features(const Dataset& d, const std::vector<std::string>& names);

/// Pearson correlation matrix, n_features x n_features row major.
/// Symmetric, unit diagonal; errors on a constant feature.
std::vector<double> correlation_matrix(const Dataset& d);

/// Greedy pruning: repeatedly remove the lower-importance member of the
/// surviving pair with the largest |r| while that |r| exceeds cut_standard.
std::pair<Dataset, PruneLog> prune_correlated(const Dataset& d,
                                              const std::vector<double>& importance,
                                              double cut_standard);

}  // namespace fislab
