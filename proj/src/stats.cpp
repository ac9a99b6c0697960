#include "fislab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fislab/error.hpp"
#include "fislab/specfun.hpp"

namespace fislab {

const char* test_method_name(TestMethod m) {
  switch (m) {
    case TestMethod::shapiro_wilk: return "shapiro_wilk";
    case TestMethod::paired_t: return "paired_t";
    case TestMethod::wilcoxon_rank_sum: return "wilcoxon_rank_sum";
  }
  return "unknown";
}

namespace {

double poly(const double* c, int order, double x) {
  // c[0] + c[1] x + ... + c[order-1] x^(order-1)
  double v = c[order - 1];
  for (int i = order - 2; i >= 0; --i) v = v * x + c[i];
  return v;
}

}  // namespace

TestResult shapiro_wilk(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3 || n > 5000) {
    throw Error(ErrorKind::invalid_argument,
                "shapiro_wilk requires 3 <= n <= 5000, got " + std::to_string(n));
  }
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) {
    throw Error(ErrorKind::domain, "shapiro_wilk: constant sample");
  }

  // Royston (1995), AS R94. Weights are antisymmetric; only the lower-half
  // magnitudes are materialized.
  const std::size_t n2 = n / 2;
  std::vector<double> a(n2);  // magnitude of weight for order statistic i
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    static const double c1[6] = {0.0,       0.221157,  -0.147981,
                                 -2.071190, 4.434685,  -2.706056};
    static const double c2[6] = {0.0,       0.042981,  -0.293762,
                                 -1.752461, 5.682633,  -3.582633};
    const double an = static_cast<double>(n);
    std::vector<double> m(n2);
    for (std::size_t i = 0; i < n2; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    }
    double summ2 = 0.0;
    for (double v : m) summ2 += v * v;
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;

    std::size_t i1;
    double fac;
    if (n > 5) {
      i1 = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      i1 = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = i1; i < n2; ++i) a[i] = -m[i] / fac;
  }

  // W = (sum of weighted spreads)^2 / centered sum of squares.
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);
  double sse = 0.0;
  for (double v : s) sse += (v - mean) * (v - mean);
  double num = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    num += a[i] * (s[n - 1 - i] - s[i]);
  }
  double w = num * num / sse;
  if (w > 1.0) w = 1.0;

  // Normalizing transformation for the p-value.
  double pw;
  const double an = static_cast<double>(n);
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6/pi
    constexpr double stqr = 1.04719755119660;  // asin(sqrt(3/4))
    pw = pi6 * (std::asin(std::sqrt(w)) - stqr);
    pw = std::clamp(pw, 0.0, 1.0);
  } else {
    static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
    static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
    static const double g[2] = {-2.273, 0.459};
    double y = std::log1p(-w);
    double mu;
    double sigma;
    if (n <= 11) {
      const double gamma = poly(g, 2, an);
      if (y >= gamma) {
        pw = 1e-99;
        TestResult r{w, pw, TestMethod::shapiro_wilk, n, 0};
        return r;
      }
      y = -std::log(gamma - y);
      mu = poly(c3, 4, an);
      sigma = std::exp(poly(c4, 4, an));
    } else {
      const double log_n = std::log(an);
      mu = poly(c5, 4, log_n);
      sigma = std::exp(poly(c6, 3, log_n));
    }
    pw = 1.0 - normal_cdf((y - mu) / sigma);  // upper tail
  }
  return TestResult{w, pw, TestMethod::shapiro_wilk, n, 0};
}

TestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_argument, "paired_t_test: unequal lengths");
  }
  const std::size_t n = a.size();
  if (n < 2) {
    throw Error(ErrorKind::invalid_argument, "paired_t_test requires n >= 2");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  if (ss == 0.0) {
    if (mean == 0.0) {
      return TestResult{0.0, 1.0, TestMethod::paired_t, n, n};
    }
    throw Error(ErrorKind::domain, "degenerate pairing: constant nonzero differences");
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double p = student_t_two_sided_p(t, static_cast<double>(n - 1));
  return TestResult{t, p, TestMethod::paired_t, n, n};
}

namespace {

// Exact null distribution of the Mann-Whitney U via the standard recurrence
// f(n1, n2, u) = f(n1-1, n2, u-n2) + f(n1, n2-1, u).
std::vector<double> exact_u_distribution(std::size_t n1, std::size_t n2) {
  const std::size_t max_u = n1 * n2;
  std::vector<std::vector<double>> f(n1 + 1, std::vector<double>(max_u + 1, 0.0));
  for (std::size_t i = 0; i <= n1; ++i) f[i][0] = 1.0;  // n2 = 0 base column
  for (std::size_t j = 1; j <= n2; ++j) {
    std::vector<std::vector<double>> g(n1 + 1, std::vector<double>(max_u + 1, 0.0));
    g[0][0] = 1.0;
    for (std::size_t i = 1; i <= n1; ++i) {
      for (std::size_t u = 0; u <= i * j; ++u) {
        double v = u >= j ? g[i - 1][u - j] : 0.0;
        v += f[i][u];  // f holds counts for (i, j-1)
        g[i][u] = v;
      }
    }
    f = std::move(g);
  }
  double total = 0.0;
  for (double v : f[n1]) total += v;
  for (double& v : f[n1]) v /= total;
  return f[n1];
}

}  // namespace

TestResult wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::invalid_argument, "wilcoxon_rank_sum: empty sample");
  }
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;

  std::vector<std::pair<double, int>> pooled;  // (value, group)
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool has_ties = false;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second == 0) rank_sum_a += avg_rank;
    }
    i = j;
  }
  const double u1 = rank_sum_a -
                    static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;

  double p;
  if (n <= 20 && !has_ties) {
    const std::vector<double> dist = exact_u_distribution(n1, n2);
    const std::size_t u_obs = static_cast<std::size_t>(std::llround(u1));
    double cdf = 0.0;
    double sf = 0.0;
    for (std::size_t u = 0; u < dist.size(); ++u) {
      if (u <= u_obs) cdf += dist[u];
      if (u >= u_obs) sf += dist[u];
    }
    p = std::min(1.0, 2.0 * std::min(cdf, sf));
  } else {
    const double nn1 = static_cast<double>(n1);
    const double nn2 = static_cast<double>(n2);
    const double nn = static_cast<double>(n);
    const double mu = nn1 * nn2 / 2.0;
    const double var =
        nn1 * nn2 / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (var <= 0.0) {
      p = 1.0;
    } else {
      double num = u1 - mu;
      if (num > 0.0) {
        num -= 0.5;  // continuity correction toward the mean
      } else if (num < 0.0) {
        num += 0.5;
      }
      const double z = num / std::sqrt(var);
      p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::fabs(z))));
    }
  }
  return TestResult{u1, p, TestMethod::wilcoxon_rank_sum, n1, n2};
}

RegressionResult ols(const std::vector<double>& X, std::size_t n_predictors,
                     const std::vector<double>& y) {
  const std::size_t p = n_predictors;
  const std::size_t n = y.size();
  if (p == 0 || X.size() != n * p) {
    throw Error(ErrorKind::invalid_argument, "ols: design matrix shape mismatch");
  }
  if (n <= p) {
    throw Error(ErrorKind::invalid_argument,
                "ols: need more observations than predictors (n=" +
                    std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }

  // Householder QR of the n x p design; qty accumulates Q^T y.
  std::vector<double> a = X;  // row-major working copy
  std::vector<double> qty = y;
  std::vector<double> r(p * p, 0.0);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += a[i * p + k] * a[i * p + k];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorKind::domain, "ols: rank-deficient design matrix");
    }
    const double akk = a[k * p + k];
    const double alpha = akk >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i] = a[i * p + k];
      if (i == k) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 > 0.0) {
      for (std::size_t j = k; j < p; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i] * a[i * p + j];
        const double scale = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < n; ++i) a[i * p + j] -= scale * v[i];
      }
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * qty[i];
      const double scale = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) qty[i] -= scale * v[i];
    }
    for (std::size_t j = k; j < p; ++j) r[k * p + j] = a[k * p + j];
  }

  double max_diag = 0.0;
  for (std::size_t k = 0; k < p; ++k) max_diag = std::max(max_diag, std::fabs(r[k * p + k]));
  for (std::size_t k = 0; k < p; ++k) {
    if (std::fabs(r[k * p + k]) <= 1e-12 * std::max(1.0, max_diag)) {
      throw Error(ErrorKind::domain, "ols: rank-deficient design matrix");
    }
  }

  // Back-substitution for the coefficients.
  std::vector<double> beta(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qty[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= r[k * p + j] * beta[j];
    beta[k] = s / (r[k * p + k]);
  }

  // Residuals against the original inputs.
  double rss = 0.0;
  double y_mean = 0.0;
  for (double yi : y) y_mean += yi;
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < p; ++j) fit += X[i * p + j] * beta[j];
    const double res = y[i] - fit;
    rss += res * res;
    tss += (y[i] - y_mean) * (y[i] - y_mean);
  }

  // (X'X)^{-1} = R^{-1} R^{-T}; invert R by back-substitution on columns of I.
  std::vector<double> rinv(p * p, 0.0);
  for (std::size_t col = 0; col < p; ++col) {
    for (std::size_t k = p; k-- > 0;) {
      double s = k == col ? 1.0 : 0.0;
      for (std::size_t j = k + 1; j < p; ++j) s -= r[k * p + j] * rinv[j * p + col];
      rinv[k * p + col] = s / r[k * p + k];
    }
  }
  const double sigma2 = rss / static_cast<double>(n - p);

  RegressionResult out;
  out.n = n;
  out.coefficients = beta;
  out.standard_errors.resize(p);
  out.t_statistics.resize(p);
  out.p_values.resize(p);
  const double df = static_cast<double>(n - p);
  for (std::size_t j = 0; j < p; ++j) {
    double xtx_inv_jj = 0.0;
    for (std::size_t k = 0; k < p; ++k) xtx_inv_jj += rinv[j * p + k] * rinv[j * p + k];
    const double se = std::sqrt(sigma2 * xtx_inv_jj);
    out.standard_errors[j] = se;
    if (se == 0.0) {
      out.t_statistics[j] = 0.0;
      out.p_values[j] = beta[j] == 0.0 ? 1.0 : 0.0;
    } else {
      out.t_statistics[j] = beta[j] / se;
      out.p_values[j] = student_t_two_sided_p(out.t_statistics[j], df);
    }
  }
  out.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0)
                            : (rss <= 0.0 ? 1.0 : 0.0);
  return out;
}

RegressionResult algorithm_comparison(const std::vector<ComparisonPoint>& points) {
  std::size_t n_data = 0;
  std::size_t n_feature = 0;
  for (const auto& pt : points) {
    (pt.algorithm == CutAlgorithm::data_cut ? n_data : n_feature) += 1;
  }
  if (n_data < 3 || n_feature < 3) {
    throw Error(ErrorKind::domain,
                "algorithm_comparison needs at least 3 points per algorithm (got " +
                    std::to_string(n_data) + " data_cut, " + std::to_string(n_feature) +
                    " feature_cut)");
  }
  const std::size_t n = points.size();
  std::vector<double> X(n * 3);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i * 3 + 0] = 1.0;
    X[i * 3 + 1] = points[i].auc;
    X[i * 3 + 2] = points[i].algorithm == CutAlgorithm::feature_cut ? 1.0 : 0.0;
    y[i] = points[i].stability_value;
  }
  return ols(X, 3, y);
}

RegressionResult correlation_effect(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> standards;
  for (const auto& pt : points) {
    if (std::find(standards.begin(), standards.end(), pt.first) == standards.end()) {
      standards.push_back(pt.first);
    }
  }
  if (standards.size() < 3) {
    throw Error(ErrorKind::domain,
                "correlation_effect needs at least 3 distinct cut standards");
  }
  const std::size_t n = points.size();
  std::vector<double> X(n * 2);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i * 2 + 0] = 1.0;
    X[i * 2 + 1] = points[i].first;
    y[i] = points[i].second;
  }
  return ols(X, 2, y);
}

AdjacencyReport adjacent_rank_significance(const std::vector<double>& importance_matrix,
                                           std::size_t n_bootstraps,
                                           std::size_t n_features, double alpha) {
  if (n_bootstraps < 3) {
    throw Error(ErrorKind::invalid_argument,
                "adjacent_rank_significance requires at least 3 bootstraps");
  }
  if (n_features < 2) {
    throw Error(ErrorKind::invalid_argument,
                "adjacent_rank_significance requires at least 2 features");
  }
  if (importance_matrix.size() != n_bootstraps * n_features) {
    throw Error(ErrorKind::invalid_argument, "importance matrix shape mismatch");
  }

  auto column = [&](std::size_t j) {
    std::vector<double> col(n_bootstraps);
    for (std::size_t b = 0; b < n_bootstraps; ++b) {
      col[b] = importance_matrix[b * n_features + j];
    }
    return col;
  };
  auto is_constant = [](const std::vector<double>& v) {
    return *std::min_element(v.begin(), v.end()) ==
           *std::max_element(v.begin(), v.end());
  };

  AdjacencyReport report;
  report.alpha = alpha;
  std::size_t significant = 0;
  for (std::size_t j = 0; j + 1 < n_features; ++j) {
    const std::vector<double> lhs = column(j);
    const std::vector<double> rhs = column(j + 1);
    bool both_normal = false;
    if (!is_constant(lhs) && !is_constant(rhs)) {
      both_normal = shapiro_wilk(lhs).p_value > 0.05 &&
                    shapiro_wilk(rhs).p_value > 0.05;
    }
    TestResult test;
    if (both_normal) {
      try {
        test = paired_t_test(lhs, rhs);
      } catch (const Error&) {
        test = wilcoxon_rank_sum(lhs, rhs);  // degenerate pairing
      }
    } else {
      test = wilcoxon_rank_sum(lhs, rhs);
    }
    AdjacencyPair pair;
    pair.rank = j + 1;
    pair.test = test;
    pair.significant = test.p_value < alpha;
    significant += static_cast<std::size_t>(pair.significant);
    report.pairs.push_back(pair);
  }
  report.significant_ratio =
      static_cast<double>(significant) / static_cast<double>(report.pairs.size());
  return report;
}

}  // namespace fislab
