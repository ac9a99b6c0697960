#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fislab/metrics.hpp"

namespace fislab {

enum class TestMethod { shapiro_wilk, paired_t, wilcoxon_rank_sum };

const char* test_method_name(TestMethod m);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::paired_t;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct RegressionResult {
  std::vector<double> coefficients;  // intercept first
  std::vector<double> standard_errors;
  std::vector<double> t_statistics;
  std::vector<double> p_values;
  double r_squared = 0.0;
  std::size_t n = 0;
};

struct AdjacencyPair {
  std::size_t rank = 0;  // compares rank and rank+1 (1-based)
  TestResult test;
  bool significant = false;
};

struct AdjacencyReport {
  std::vector<AdjacencyPair> pairs;
  double significant_ratio = 0.0;
  double alpha = 0.05;
};

/// Shapiro-Wilk normality test, Royston's AS R94 approximation (3 <= n <= 5000).
TestResult shapiro_wilk(const std::vector<double>& x);

/// Two-sided paired t-test. All-zero differences give t=0, p=1; a nonzero
/// constant difference vector is a degenerate pairing and errors.
TestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sided two-sample Wilcoxon rank-sum (Mann-Whitney U). Exact enumeration
/// for n1+n2 <= 20 without ties, otherwise normal approximation with tie and
/// continuity corrections.
TestResult wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b);

/// OLS via Householder QR. X is row-major n x p and must already contain the
/// intercept column; classical standard errors and two-sided t-test p-values.
RegressionResult ols(const std::vector<double>& X, std::size_t n_predictors,
                     const std::vector<double>& y);

struct ComparisonPoint {
  double auc = 0.0;
  double stability_value = 0.0;
  CutAlgorithm algorithm = CutAlgorithm::data_cut;
};

/// Stability-vs-AUC regression with an algorithm indicator (data_cut = 0,
/// feature_cut = 1). Coefficients ordered (intercept, auc, indicator).
RegressionResult algorithm_comparison(const std::vector<ComparisonPoint>& points);

/// Univariate OLS of the indicator coefficient on the correlation cut
/// standard; points are (cut_standard, indicator_coefficient).
RegressionResult correlation_effect(const std::vector<std::pair<double, double>>& points);

/// Per adjacent rank pair of a B x n importance matrix (columns pre-sorted by
/// the experiment's mean-importance rank): paired t when both columns pass
/// Shapiro-Wilk at 0.05, Wilcoxon rank-sum otherwise; significance at `alpha`.
AdjacencyReport adjacent_rank_significance(const std::vector<double>& importance_matrix,
                                           std::size_t n_bootstraps,
                                           std::size_t n_features, double alpha);

}  // namespace fislab
