#include <doctest.h>

#include <cmath>
#include <vector>

#include "fislab/error.hpp"
#include "fislab/specfun.hpp"
#include "fislab/theory.hpp"

using namespace fislab;

namespace {

// Enumeration oracle for the pattern probability: over all 4^d joint
// (x_i, x_j) assignments, count those containing both (1,0) and (0,1).
double enumerate_pattern_pair(std::uint64_t d) {
  const std::uint64_t total = 1ULL << (2 * d);
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool saw10 = false;
    bool saw01 = false;
    for (std::uint64_t s = 0; s < d; ++s) {
      const std::uint64_t pattern = (mask >> (2 * s)) & 3u;
      saw10 = saw10 || pattern == 2;
      saw01 = saw01 || pattern == 1;
    }
    hits += saw10 && saw01;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Exact essential-sample probability for tiny cases by enumerating every
// size-k subset of M rows and every pattern assignment of the window rows.
double enumerate_essential(std::size_t m, std::size_t k, std::size_t w) {
  std::vector<std::size_t> subset(k);
  double prob_sum = 0.0;
  std::size_t n_subsets = 0;
  // iterate subsets via combination stepping
  for (std::size_t i = 0; i < k; ++i) subset[i] = i;
  for (;;) {
    std::size_t in_window = 0;
    for (std::size_t v : subset) in_window += v < w ? 1 : 0;
    prob_sum += enumerate_pattern_pair(in_window);
    ++n_subsets;
    // next combination
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (subset[pos] != m - k + pos) break;
      if (pos == 0) return prob_sum / static_cast<double>(n_subsets);
    }
    if (subset[pos] == m - k + pos) return prob_sum / static_cast<double>(n_subsets);
    ++subset[pos];
    for (std::size_t q = pos + 1; q < k; ++q) subset[q] = subset[q - 1] + 1;
  }
}

}  // namespace

TEST_CASE("pattern pair probability matches enumeration exactly") {
  CHECK(pattern_pair_probability(0) == doctest::Approx(0.0));
  CHECK(pattern_pair_probability(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pattern_pair_probability(2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(pattern_pair_probability(3) == doctest::Approx(18.0 / 64.0).epsilon(1e-15));
  for (std::uint64_t d = 1; d <= 8; ++d) {
    CHECK(pattern_pair_probability(d) ==
          doctest::Approx(enumerate_pattern_pair(d)).epsilon(1e-12));
  }
}

TEST_CASE("pattern pair probability is monotone and tends to 1") {
  double last = 0.0;
  for (std::uint64_t d = 0; d <= 60; ++d) {
    const double g = pattern_pair_probability(d);
    CHECK(g >= last - 1e-15);
    last = g;
  }
  CHECK(pattern_pair_probability(200) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("essential probability: trivial zero cases") {
  CHECK(essential_sample_probability(1000, 100, 0) == 0.0);  // gap 0
  CHECK(essential_sample_probability(1000, 1, 500) == 0.0);  // k = 1
  CHECK_THROWS_AS(essential_sample_probability(100, 10, 101), Error);  // W > M
}

TEST_CASE("essential probability matches full enumeration on tiny cases") {
  CHECK(essential_sample_probability(6, 3, 3) ==
        doctest::Approx(enumerate_essential(6, 3, 3)).epsilon(1e-12));
  CHECK(essential_sample_probability(8, 4, 2) ==
        doctest::Approx(enumerate_essential(8, 4, 2)).epsilon(1e-12));
  CHECK(essential_sample_probability(7, 5, 6) ==
        doctest::Approx(enumerate_essential(7, 5, 6)).epsilon(1e-12));
  CHECK(essential_sample_probability(9, 9, 4) ==
        doctest::Approx(enumerate_essential(9, 9, 4)).epsilon(1e-12));
}

TEST_CASE("capped sum equals the uncapped form whenever W >= k") {
  // with W >= k the cap min(W,k) = k; computing with the cap removed changes
  // nothing because C(W,d) vanishes for d > W anyway
  for (std::size_t m : {50u, 200u}) {
    for (std::size_t k : {5u, 12u}) {
      for (std::size_t w : {12u, 30u, 49u}) {
        if (w < k) continue;
        const double capped = essential_sample_probability(m, k, w);
        std::vector<double> terms;
        const double log_total = log_choose(static_cast<double>(m),
                                            static_cast<double>(k));
        for (std::size_t d = 2; d <= k; ++d) {
          const double g = pattern_pair_probability(d);
          if (g <= 0.0) continue;
          const double lt =
              std::log(g) +
              log_choose(static_cast<double>(m - w), static_cast<double>(k - d)) +
              log_choose(static_cast<double>(w), static_cast<double>(d)) - log_total;
          if (std::isfinite(lt)) terms.push_back(lt);
        }
        const double uncapped = terms.empty() ? 0.0 : std::exp(log_sum_exp(terms));
        CHECK(capped == doctest::Approx(uncapped).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("log-space evaluation survives extreme sizes") {
  const double p = essential_sample_probability(1000000, 10000, 20000);
  CHECK(std::isfinite(p));
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(p > 0.9);  // huge window and budget: essentially certain
}

TEST_CASE("probability surface is monotone in both axes") {
  const std::vector<std::size_t> ks = {10, 20, 50, 100, 200, 500, 1000};
  const std::vector<double> gaps = {0.005, 0.01, 0.02, 0.03, 0.05, 0.07, 0.09};
  const std::vector<double> grid = probability_surface(1000, ks, gaps);
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    for (std::size_t ki = 0; ki + 1 < ks.size(); ++ki) {
      CHECK(grid[gi * ks.size() + ki] <= grid[gi * ks.size() + ki + 1] + 1e-12);
    }
  }
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (std::size_t gi = 0; gi + 1 < gaps.size(); ++gi) {
      CHECK(grid[gi * ks.size() + ki] <= grid[(gi + 1) * ks.size() + ki] + 1e-12);
    }
  }
  // gap-zero row would be all zeros
  const std::vector<double> zero_row = probability_surface(1000, ks, {0.0});
  for (double v : zero_row) CHECK(v == 0.0);
  // k = M column: all window rows drawn, so p = g_W
  const std::vector<double> full = probability_surface(1000, {1000}, {0.002});
  CHECK(full[0] == doctest::Approx(pattern_pair_probability(2)).epsilon(1e-12));
}

TEST_CASE("y distribution params") {
  const auto [mean20, var20] = y_distribution_params(20);
  CHECK(mean20 == doctest::Approx(0.5));
  CHECK(var20 == doctest::Approx(1.0 / 60.0).epsilon(1e-15));
  const auto [mean1, var1] = y_distribution_params(1);
  CHECK(mean1 == doctest::Approx(0.5));
  CHECK(var1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("window probability basics and symmetry") {
  CHECK(window_probability(0.5, 0.1, 0.1, 20) == 0.0);
  // Window centered on the mean: mu = 0.5 + a_i + h with a_j = a_i + 2h puts
  // (mu - a_j, mu - a_i) = (0.5 - h, 0.5 + h), whose mass is erf(h / (sd sqrt 2)).
  const double sd = std::sqrt(1.0 / 60.0);
  const double h = 0.02;
  const double a_i0 = 0.01;
  const double a_j0 = a_i0 + 2.0 * h;
  const double p = window_probability(0.5 + a_i0 + h, a_i0, a_j0, 20);
  const double expected = std::erf(h / (sd * std::sqrt(2.0)));
  CHECK(p == doctest::Approx(expected).epsilon(1e-12));

  // Gaussian reflection symmetry: reflecting the window about the 0.5 mean
  // (same pair, mu2 = 1 - mu + a_i + a_j) keeps the probability.
  const double a_i = 0.02, a_j = 0.05, mu = 0.4;
  const double left = window_probability(mu, a_i, a_j, 20);
  const double right = window_probability(1.0 - mu + a_i + a_j, a_i, a_j, 20);
  CHECK(left == doctest::Approx(right).epsilon(1e-10));
}

TEST_CASE("window asymmetry around the decision threshold") {
  // N=20 default coefficients a_n = n/210
  const std::vector<double> a = TheoryParams{}.resolved_coefficients();
  // mu = 0.4 (< .5): the unimportant pair (a2,a3) has the wider window
  const double unimportant = window_probability(0.4, a[1], a[2], 20);
  const double important = window_probability(0.4, a[17], a[18], 20);
  CHECK(unimportant > important);
  // mu = 0.6 (> .5): reversed for the same pairs
  const double unimportant6 = window_probability(0.6, a[1], a[2], 20);
  const double important6 = window_probability(0.6, a[17], a[18], 20);
  CHECK(important6 > unimportant6);
}

TEST_CASE("generate_population basics") {
  TheoryParams t;
  t.population_size = 20000;
  t.n_features = 20;
  t.sample_budget = 100;
  t.mu = 0.5;
  t.weak_index = 0;
  t.strong_index = 1;
  const BinaryPopulation pop = generate_population(t, 5);
  CHECK(pop.y.size() == t.population_size);
  double frac = 0.0;
  for (int l : pop.labels) frac += l;
  frac /= static_cast<double>(pop.population_size);
  CHECK(std::fabs(frac - 0.5) < 0.02);  // symmetry of Y about 0.5
  for (std::size_t m = 0; m < 50; ++m) {
    double y = 0.0;
    const std::vector<double> coeff = t.resolved_coefficients();
    for (std::size_t n = 0; n < t.n_features; ++n) {
      y += coeff[n] * pop.features[m * t.n_features + n];
    }
    CHECK(y == doctest::Approx(pop.y[m]).epsilon(1e-12));
    CHECK(pop.labels[m] == (pop.y[m] > t.mu ? 1 : 0));
  }
  // deterministic per seed
  const BinaryPopulation pop2 = generate_population(t, 5);
  CHECK(pop.features == pop2.features);
}

TEST_CASE("single-feature population label equals the feature bit") {
  TheoryParams t;
  t.population_size = 500;
  t.n_features = 2;
  t.sample_budget = 10;
  t.coefficients = {1.0 / 3.0, 2.0 / 3.0};
  t.mu = 0.9;
  // with mu = 0.9 only (1,1) rows are positive
  const BinaryPopulation pop = generate_population(t, 11);
  for (std::size_t m = 0; m < pop.population_size; ++m) {
    const bool both = pop.features[m * 2] == 1 && pop.features[m * 2 + 1] == 1;
    CHECK(pop.labels[m] == (both ? 1 : 0));
  }
}

TEST_CASE("monte carlo oracle agrees with the closed form") {
  SUBCASE("gap zero estimates zero") {
    const MonteCarloEstimate est = monte_carlo_pattern(1000, 100, 0, 2000, 3);
    CHECK(est.estimate == 0.0);
  }
  SUBCASE("k = M with W = 2 estimates g_2") {
    const MonteCarloEstimate est = monte_carlo_pattern(400, 400, 2, 20000, 17);
    CHECK(std::fabs(est.estimate - 0.125) <= 3.0 * est.standard_error + 1e-9);
  }
  SUBCASE("M=1000, k=100, W=20 within 3 SE") {
    const double closed = essential_sample_probability(1000, 100, 20);
    const MonteCarloEstimate est = monte_carlo_pattern(1000, 100, 20, 100000, 29);
    CHECK(std::fabs(est.estimate - closed) <= 3.0 * est.standard_error);
  }
  CHECK_THROWS_AS(monte_carlo_pattern(1000, 100, 20, 10, 1), Error);
}

TEST_CASE("theory params validation") {
  TheoryParams t;
  t.weak_index = 3;
  t.strong_index = 2;  // a_i > a_j: must be rejected
  CHECK_THROWS_AS(t.validate(), Error);
  t.weak_index = 2;
  t.strong_index = 3;
  t.validate();
  CHECK(t.importance_gap() == doctest::Approx(1.0 / 210.0).epsilon(1e-12));
  t.mu = 1.5;
  CHECK_THROWS_AS(t.validate(), Error);
}
