#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fislab {

enum class CutAlgorithm { data_cut, feature_cut };

const char* cut_algorithm_name(CutAlgorithm a);

/// Feature ranking: rank 1 is the most important feature.
struct RankVector {
  std::vector<std::string> names;
  std::vector<int> ranks;  // permutation of 1..n, aligned with names
  std::string source;

  std::size_t size() const { return names.size(); }
  int rank_of(const std::string& name) const;  // throws on unknown name
  void validate() const;
};

/// The four ranking-stability measures against a reference. srcc is oriented
/// higher-is-stable; the three distances are lower-is-stable.
struct StabilityIndexes {
  double rank_difference = 0.0;
  double srcc = 1.0;
  double canberra = 0.0;
  double bray_curtis = 0.0;
};

inline constexpr std::array<const char*, 4> kStabilityIndexNames = {
    "rank_difference", "srcc", "canberra", "bray_curtis"};

/// True when larger values of index `idx` mean a more stable ranking.
inline constexpr std::array<bool, 4> kStabilityHigherIsStable = {false, true,
                                                                 false, false};

double stability_value(const StabilityIndexes& s, std::size_t idx);

/// ROC-AUC by the tie-adjusted Mann-Whitney statistic: the probability a
/// random positive outscores a random negative, ties counted one half.
double auc(const std::vector<int>& labels, const std::vector<double>& scores);

/// Rank 1 to the largest importance; ties broken by the lower feature index.
RankVector rank_from_importance(const std::vector<double>& importance,
                                const std::vector<std::string>& names,
                                std::string source = {});

/// Restricts ref to the surviving names and re-compresses ranks to
/// 1..|surviving| preserving relative order.
RankVector project_reference_rank(const RankVector& ref,
                                  const std::vector<std::string>& surviving);

StabilityIndexes stability_indexes(const RankVector& ref, const RankVector& next);

}  // namespace fislab
