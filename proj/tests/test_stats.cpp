#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fislab/error.hpp"
#include "fislab/random.hpp"
#include "fislab/specfun.hpp"
#include "fislab/stats.hpp"

using namespace fislab;

namespace {

std::vector<double> normal_draw(std::size_t n, Rng& rng) {
  // Box-Muller from the portable uniform stream.
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; i += 2) {
    const double u1 = std::max(rng.uniform(), 1e-300);
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[i] = r * std::cos(2.0 * M_PI * u2);
    if (i + 1 < n) out[i + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  return out;
}

}  // namespace

TEST_CASE("shapiro_wilk matches reference implementation values") {
  // reference W/p computed with scipy.stats.shapiro
  const std::vector<double> sw20 = {
      -1.423825, 1.263728, -0.870662, -0.259173, -0.075343, -0.740885, -1.367793,
      0.648893,  0.361058, -1.952863, 2.34741,   0.968497,  -0.759387, 0.902198,
      -0.466953, -0.06069, 0.788844,  -1.256668, 0.575858,  1.398979};
  const TestResult r20 = shapiro_wilk(sw20);
  CHECK(r20.statistic == doctest::Approx(0.979657750518).epsilon(1e-6));
  CHECK(r20.p_value == doctest::Approx(0.929605292526).epsilon(1e-4));

  const std::vector<double> sw12 = {0.081595, 0.159896, 0.3401,   0.465193,
                                    0.266421, 0.815776, 0.193294, 0.129469,
                                    0.091665, 0.598568, 0.854742, 0.601621};
  const TestResult r12 = shapiro_wilk(sw12);
  CHECK(r12.statistic == doctest::Approx(0.892132284245).epsilon(1e-6));
  CHECK(r12.p_value == doctest::Approx(0.12554321627).epsilon(1e-3));

  const std::vector<double> sw5 = {1.0, 2.0, 3.5, 3.9, 7.0};
  const TestResult r5 = shapiro_wilk(sw5);
  CHECK(r5.statistic == doctest::Approx(0.945602021444).epsilon(1e-6));
  CHECK(r5.p_value == doctest::Approx(0.705764232987).epsilon(1e-3));

  const std::vector<double> sw50 = {
      2.371805, 3.19287,  1.281325, 1.671801, 1.088224, 2.146748, 0.702618,
      0.088847, 0.43398,  2.399746, 1.087537, 3.260049, 0.579917, 0.502018,
      0.508296, 0.402321, 0.009372, 0.786646, 0.117334, 0.065405, 1.038062,
      0.054279, 0.912369, 1.039891, 0.458251, 1.19488,  4.125331, 2.134233,
      0.386032, 0.086451, 1.348715, 0.754572, 1.200541, 0.150635, 1.354366,
      0.555525, 0.159277, 0.169183, 1.174806, 0.291176, 1.43149,  0.587044,
      0.308978, 4.469679, 0.100007, 0.180713, 0.828289, 0.973081, 1.044074,
      0.265799};
  const TestResult r50 = shapiro_wilk(sw50);
  CHECK(r50.statistic == doctest::Approx(0.815570809764).epsilon(1e-6));
  CHECK(r50.p_value < 1e-5);
}

TEST_CASE("shapiro_wilk contract cases") {
  CHECK_THROWS_AS(shapiro_wilk({1.0, 1.0, 1.0, 1.0}), Error);  // constant
  CHECK_THROWS_AS(shapiro_wilk({1.0, 2.0}), Error);            // n < 3

  // strongly bimodal sample is decisively non-normal
  std::vector<double> bimodal(100, 0.0);
  std::fill(bimodal.begin() + 50, bimodal.end(), 1.0);
  CHECK(shapiro_wilk(bimodal).p_value < 1e-3);

  // near-exact n=3 case has W ~ 1, p ~ 1
  const TestResult r3 = shapiro_wilk({1.0, 2.0, 3.0});
  CHECK(r3.statistic == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r3.p_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("shapiro_wilk accepts normal draws at its nominal size") {
  // On seeded standard-normal samples (n = 5000 boundary), p > 0.01 should
  // hold for ~99% of seeds.
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(seed, SeedStream::monte_carlo));
    const std::vector<double> x = normal_draw(5000, rng);
    if (shapiro_wilk(x).p_value > 0.01) ++pass;
  }
  CHECK(pass >= 97);
}

TEST_CASE("paired_t_test") {
  SUBCASE("equal vectors give t=0, p=1") {
    const TestResult r = paired_t_test({1, 2, 3}, {1, 2, 3});
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
  }
  SUBCASE("constant nonzero differences are degenerate") {
    CHECK_THROWS_WITH_AS(paired_t_test({2, 3, 4}, {1, 2, 3}),
                         doctest::Contains("degenerate"), Error);
  }
  SUBCASE("scipy reference value for the stated inputs") {
    const TestResult r = paired_t_test({1, 2, 3, 4}, {0, 0, 1, 1});
    CHECK(r.statistic == doctest::Approx(4.898979485566356).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.016276603459429).epsilon(1e-10));
  }
  SUBCASE("d=(1,3,4,4) gives the 4.2426/0.0240 hand value") {
    const TestResult r = paired_t_test({2, 5, 7, 8}, {1, 2, 3, 4});
    CHECK(r.statistic == doctest::Approx(4.242640687119285).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.0240).epsilon(1e-3));
  }
  CHECK_THROWS_AS(paired_t_test({1.0}, {2.0}), Error);
  CHECK_THROWS_AS(paired_t_test({1, 2}, {1, 2, 3}), Error);
}

TEST_CASE("wilcoxon_rank_sum exact and asymptotic") {
  SUBCASE("exact enumeration for a=(1,2), b=(3,4)") {
    const TestResult r = wilcoxon_rank_sum({1, 2}, {3, 4});
    CHECK(r.p_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("identical multisets are indistinguishable") {
    const TestResult r = wilcoxon_rank_sum({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5});
    CHECK(r.p_value >= 0.9);
  }
  SUBCASE("disjoint samples at n=10 are decisive (exact path)") {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
      a.push_back(i);
      b.push_back(i + 100);
    }
    const TestResult r = wilcoxon_rank_sum(a, b);
    CHECK(r.p_value < 1e-3);
    // exact: 2 / C(20,10), matches scipy method='exact'
    CHECK(r.p_value == doctest::Approx(1.082508822446903e-05).epsilon(1e-9));
  }
  SUBCASE("disjoint samples at n=12 use the normal approximation") {
    std::vector<double> a, b;
    for (int i = 0; i < 12; ++i) {
      a.push_back(i);
      b.push_back(i + 100);
    }
    const TestResult r = wilcoxon_rank_sum(a, b);
    // scipy method='asymptotic' (continuity corrected)
    CHECK(r.p_value == doctest::Approx(3.6584553538971e-05).epsilon(1e-9));
  }
  SUBCASE("symmetry in the arguments") {
    const std::vector<double> a = {0.3, 1.2, 0.8, 2.2};
    const std::vector<double> b = {0.9, 1.4, 2.5};
    CHECK(wilcoxon_rank_sum(a, b).p_value ==
          doctest::Approx(wilcoxon_rank_sum(b, a).p_value).epsilon(1e-12));
  }
  SUBCASE("exact path matches brute-force enumeration") {
    // all C(6,3) label assignments of 6 distinct values
    const std::vector<double> pool = {0.1, 0.5, 0.9, 1.7, 2.3, 3.1};
    const std::vector<double> a = {pool[0], pool[3], pool[4]};
    const std::vector<double> b = {pool[1], pool[2], pool[5]};
    const TestResult r = wilcoxon_rank_sum(a, b);
    // brute force: U of observed = #(a>b) pairs
    auto u_stat = [](const std::vector<double>& x, const std::vector<double>& y) {
      int u = 0;
      for (double xv : x) {
        for (double yv : y) u += xv > yv ? 1 : 0;
      }
      return u;
    };
    const int u_obs = u_stat(a, b);
    int le = 0, ge = 0, total = 0;
    std::vector<int> mask = {1, 1, 1, 0, 0, 0};
    std::sort(mask.begin(), mask.end());
    do {
      std::vector<double> xa, xb;
      for (int i = 0; i < 6; ++i) (mask[i] ? xa : xb).push_back(pool[i]);
      const int u = u_stat(xa, xb);
      le += u <= u_obs;
      ge += u >= u_obs;
      ++total;
    } while (std::next_permutation(mask.begin(), mask.end()));
    const double expected =
        std::min(1.0, 2.0 * std::min(le, ge) / static_cast<double>(total));
    CHECK(r.p_value == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(wilcoxon_rank_sum({}, {1.0}), Error);
}

TEST_CASE("ols exact fits and reference example") {
  SUBCASE("y = 2x exactly") {
    const std::vector<double> X = {1, 1, 1, 2, 1, 3, 1, 4};
    const std::vector<double> y = {2, 4, 6, 8};
    const RegressionResult r = ols(X, 2, y);
    CHECK(r.coefficients[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.coefficients[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("constant y") {
    const std::vector<double> X = {1, 1, 1, 2, 1, 3, 1, 4};
    const std::vector<double> y = {5, 5, 5, 5};
    const RegressionResult r = ols(X, 2, y);
    CHECK(r.coefficients[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.p_values[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("hand normal equations") {
    const std::vector<double> X = {1, 1, 1, 2, 1, 3, 1, 4};
    const std::vector<double> y = {1.1, 1.9, 3.2, 3.8};
    const RegressionResult r = ols(X, 2, y);
    CHECK(r.coefficients[1] == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(r.coefficients[0] == doctest::Approx(0.15).epsilon(1e-10));
    CHECK(r.r_squared == doctest::Approx(0.9817777777777775).epsilon(1e-10));
    CHECK(r.p_values[1] == doctest::Approx(0.009152999813907934).epsilon(1e-8));
  }
  SUBCASE("rank deficiency errors") {
    const std::vector<double> X = {1, 2, 1, 2, 1, 2, 1, 2};  // duplicate column
    const std::vector<double> y = {1, 2, 3, 4};
    CHECK_THROWS_AS(ols(X, 2, y), Error);
  }
  SUBCASE("n <= p errors") {
    const std::vector<double> X = {1, 2, 1, 3};
    const std::vector<double> y = {1, 2};
    CHECK_THROWS_AS(ols(X, 2, y), Error);
  }
}

TEST_CASE("ols reproduces exactly-linear data in three predictors") {
  Rng rng(31);
  const std::size_t n = 40;
  std::vector<double> X(n * 3);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i * 3 + 0] = 1.0;
    X[i * 3 + 1] = rng.uniform();
    X[i * 3 + 2] = rng.uniform();
    y[i] = 0.7 - 1.3 * X[i * 3 + 1] + 2.9 * X[i * 3 + 2];
  }
  const RegressionResult r = ols(X, 3, y);
  CHECK(r.coefficients[0] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(r.coefficients[1] == doctest::Approx(-1.3).epsilon(1e-10));
  CHECK(r.coefficients[2] == doctest::Approx(2.9).epsilon(1e-10));
}

TEST_CASE("algorithm_comparison indicator semantics") {
  SUBCASE("identical point sets give a zero indicator") {
    std::vector<ComparisonPoint> pts;
    for (int i = 0; i < 5; ++i) {
      const double auc_v = 0.6 + 0.05 * i;
      const double stab = 1.0 - 0.1 * i;
      pts.push_back({auc_v, stab, CutAlgorithm::data_cut});
      pts.push_back({auc_v, stab, CutAlgorithm::feature_cut});
    }
    const RegressionResult r = algorithm_comparison(pts);
    CHECK(r.coefficients[2] == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("constructed +0.2 offset is recovered") {
    std::vector<ComparisonPoint> pts;
    for (int i = 0; i < 6; ++i) {
      const double auc_v = 0.55 + 0.06 * i;
      const double stab = 0.4 + 0.07 * i;
      pts.push_back({auc_v, stab, CutAlgorithm::data_cut});
      pts.push_back({auc_v, stab + 0.2, CutAlgorithm::feature_cut});
    }
    const RegressionResult r = algorithm_comparison(pts);
    CHECK(r.coefficients[2] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(r.p_values[2] < 1e-6);
  }
  SUBCASE("needs three points per algorithm") {
    std::vector<ComparisonPoint> pts = {{0.6, 0.5, CutAlgorithm::data_cut},
                                        {0.7, 0.6, CutAlgorithm::data_cut},
                                        {0.8, 0.7, CutAlgorithm::data_cut},
                                        {0.6, 0.9, CutAlgorithm::feature_cut},
                                        {0.7, 0.9, CutAlgorithm::feature_cut}};
    CHECK_THROWS_AS(algorithm_comparison(pts), Error);
  }
}

TEST_CASE("correlation_effect") {
  SUBCASE("constant coefficients give slope 0") {
    const RegressionResult r =
        correlation_effect({{0.9, 0.2}, {0.6, 0.2}, {0.3, 0.2}});
    CHECK(r.coefficients[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("hand slope -1/3") {
    const RegressionResult r =
        correlation_effect({{0.9, 0.1}, {0.6, 0.2}, {0.3, 0.3}});
    CHECK(r.coefficients[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(correlation_effect({{0.9, 0.1}, {0.6, 0.2}}), Error);
}

TEST_CASE("adjacent_rank_significance") {
  SUBCASE("identical columns give ratio 0") {
    const std::size_t B = 10, n = 4;
    std::vector<double> m(B * n);
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t j = 0; j < n; ++j) m[b * n + j] = 0.25;
    }
    const AdjacencyReport rep = adjacent_rank_significance(m, B, n, 0.05);
    CHECK(rep.significant_ratio == doctest::Approx(0.0));
  }
  SUBCASE("disjoint ranges give ratio 1") {
    const std::size_t B = 12, n = 5;
    std::vector<double> m(B * n);
    Rng rng(4);
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t j = 0; j < n; ++j) {
        m[b * n + j] = (10.0 - static_cast<double>(j)) + 0.01 * rng.uniform();
      }
    }
    const AdjacencyReport rep = adjacent_rank_significance(m, B, n, 0.05);
    CHECK(rep.significant_ratio == doctest::Approx(1.0));
    CHECK(rep.pairs.size() == n - 1);
  }
  SUBCASE("ratio is monotone when alpha shrinks") {
    const std::size_t B = 20, n = 8;
    std::vector<double> m(B * n);
    Rng rng(9);
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t j = 0; j < n; ++j) {
        m[b * n + j] = (8.0 - static_cast<double>(j)) * 0.02 + 0.05 * rng.uniform();
      }
    }
    double last = 1.0;
    for (double alpha : {0.2, 0.05, 0.01, 0.001}) {
      const double ratio = adjacent_rank_significance(m, B, n, alpha).significant_ratio;
      CHECK(ratio <= last + 1e-12);
      last = ratio;
    }
  }
  CHECK_THROWS_AS(adjacent_rank_significance({1, 2, 3, 4}, 2, 2, 0.05), Error);
}

TEST_CASE("type-I error calibration under the null") {
  // quick version of the acceptance calibration: 300 seeded repetitions
  int t_rejects = 0;
  int w_rejects = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(777, SeedStream::monte_carlo, static_cast<std::uint64_t>(rep)));
    const std::vector<double> a = normal_draw(30, rng);
    const std::vector<double> b = normal_draw(30, rng);
    if (paired_t_test(a, b).p_value < 0.05) ++t_rejects;
    if (wilcoxon_rank_sum(a, b).p_value < 0.05) ++w_rejects;
  }
  const double t_rate = static_cast<double>(t_rejects) / reps;
  const double w_rate = static_cast<double>(w_rejects) / reps;
  CHECK(t_rate > 0.01);
  CHECK(t_rate < 0.10);
  CHECK(w_rate > 0.01);
  CHECK(w_rate < 0.10);
}
