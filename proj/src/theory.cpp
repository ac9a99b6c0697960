#include "fislab/theory.hpp"

#include <algorithm>
#include <cmath>

#include "fislab/error.hpp"
#include "fislab/random.hpp"
#include "fislab/specfun.hpp"

namespace fislab {

std::vector<double> TheoryParams::resolved_coefficients() const {
  if (!coefficients.empty()) return coefficients;
  std::vector<double> a(n_features);
  const double denom =
      static_cast<double>(n_features) * (static_cast<double>(n_features) + 1.0) / 2.0;
  for (std::size_t n = 0; n < n_features; ++n) {
    a[n] = static_cast<double>(n + 1) / denom;
  }
  return a;
}

double TheoryParams::importance_gap() const {
  const std::vector<double> a = resolved_coefficients();
  return a[strong_index] - a[weak_index];
}

void TheoryParams::validate() const {
  if (n_features < 2) {
    throw Error(ErrorKind::invalid_argument, "theory params: n_features must be >= 2");
  }
  if (population_size < 2) {
    throw Error(ErrorKind::invalid_argument, "theory params: population must be >= 2");
  }
  if (sample_budget < 1 || sample_budget > population_size) {
    throw Error(ErrorKind::invalid_argument,
                "theory params: sample budget must be in [1, population]");
  }
  const std::vector<double> a = resolved_coefficients();
  if (a.size() != n_features) {
    throw Error(ErrorKind::invalid_argument,
                "theory params: coefficients length must equal n_features");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] > 0.0) || (n > 0 && !(a[n] > a[n - 1]))) {
      throw Error(ErrorKind::invalid_argument,
                  "theory params: coefficients must be positive and strictly increasing");
    }
    sum += a[n];
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument,
                "theory params: coefficients must sum to 1 within 1e-12");
  }
  if (weak_index >= n_features || strong_index >= n_features ||
      weak_index == strong_index) {
    throw Error(ErrorKind::invalid_argument, "theory params: bad feature pair");
  }
  if (!(a[weak_index] < a[strong_index])) {
    throw Error(ErrorKind::invalid_argument,
                "theory params: weak_index must name the smaller coefficient");
  }
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "theory params: mu must be in (0,1)");
  }
}

double pattern_pair_probability(std::uint64_t d) {
  const double dd = static_cast<double>(d);
  const double v = 1.0 - (2.0 * std::pow(0.75, dd) - std::pow(0.5, dd));
  return std::clamp(v, 0.0, 1.0);
}

double essential_sample_probability(std::size_t population, std::size_t sample_budget,
                                    std::size_t window) {
  const std::size_t m = population;
  const std::size_t k = sample_budget;
  const std::size_t w = window;
  if (w > m) {
    throw Error(ErrorKind::domain, "gap inconsistent with population: window " +
                                       std::to_string(w) + " exceeds M=" +
                                       std::to_string(m));
  }
  if (k > m) {
    throw Error(ErrorKind::invalid_argument, "sample budget exceeds population");
  }
  const std::size_t d_max = std::min(w, k);
  if (d_max < 2) return 0.0;

  const double log_total = log_choose(static_cast<double>(m), static_cast<double>(k));
  std::vector<double> log_terms;
  log_terms.reserve(d_max - 1);
  for (std::size_t d = 2; d <= d_max; ++d) {
    const double g = pattern_pair_probability(d);
    if (g <= 0.0) continue;
    const double lt = std::log(g) +
                      log_choose(static_cast<double>(m - w),
                                 static_cast<double>(k - d)) +
                      log_choose(static_cast<double>(w), static_cast<double>(d)) -
                      log_total;
    if (std::isfinite(lt)) log_terms.push_back(lt);
  }
  if (log_terms.empty()) return 0.0;
  return std::clamp(std::exp(log_sum_exp(log_terms)), 0.0, 1.0);
}

double essential_sample_probability(const TheoryParams& t, bool exact_window) {
  t.validate();
  const std::vector<double> a = t.resolved_coefficients();
  double fraction = t.importance_gap();
  if (exact_window) {
    fraction /= 1.0 - a[t.weak_index] - a[t.strong_index];
  }
  const auto window = static_cast<std::size_t>(
      std::llround(static_cast<double>(t.population_size) * fraction));
  return essential_sample_probability(t.population_size, t.sample_budget, window);
}

std::vector<double> probability_surface(std::size_t population,
                                        const std::vector<std::size_t>& k_values,
                                        const std::vector<double>& gaps) {
  if (k_values.empty() || gaps.empty()) {
    throw Error(ErrorKind::invalid_argument, "probability_surface: empty grid axis");
  }
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      !std::is_sorted(gaps.begin(), gaps.end())) {
    throw Error(ErrorKind::invalid_argument,
                "probability_surface: grid axes must be sorted ascending");
  }
  std::vector<double> grid;
  grid.reserve(k_values.size() * gaps.size());
  for (double gap : gaps) {
    const auto window = static_cast<std::size_t>(
        std::llround(static_cast<double>(population) * gap));
    for (std::size_t k : k_values) {
      grid.push_back(essential_sample_probability(population, k, window));
    }
  }
  return grid;
}

std::pair<double, double> y_distribution_params(std::size_t n_features) {
  if (n_features < 1) {
    throw Error(ErrorKind::invalid_argument, "y_distribution_params: N must be >= 1");
  }
  return {0.5, 1.0 / (3.0 * static_cast<double>(n_features))};
}

double window_probability(double mu, double a_i, double a_j, std::size_t n_features) {
  if (!(a_i < a_j)) {
    if (a_i == a_j) return 0.0;
    throw Error(ErrorKind::invalid_argument, "window_probability requires a_i <= a_j");
  }
  if (!(a_i > 0.0 && a_j < 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "window_probability: coefficients must lie in (0,1)");
  }
  const auto [mean, variance] = y_distribution_params(n_features);
  const double sd = std::sqrt(variance);
  const double hi = normal_cdf((mu - a_i - mean) / sd);
  const double lo = normal_cdf((mu - a_j - mean) / sd);
  return std::clamp(hi - lo, 0.0, 1.0);
}

BinaryPopulation generate_population(const TheoryParams& t, std::uint64_t seed) {
  t.validate();
  const std::vector<double> a = t.resolved_coefficients();
  BinaryPopulation pop;
  pop.population_size = t.population_size;
  pop.n_features = t.n_features;
  pop.features.resize(t.population_size * t.n_features);
  pop.y.resize(t.population_size);
  pop.labels.resize(t.population_size);
  Rng rng(derive_seed(seed, SeedStream::population));
  for (std::size_t m = 0; m < t.population_size; ++m) {
    double y = 0.0;
    std::uint8_t* row = pop.features.data() + m * t.n_features;
    for (std::size_t n = 0; n < t.n_features; ++n) {
      const std::uint8_t bit = static_cast<std::uint8_t>(rng.below(2));
      row[n] = bit;
      y += a[n] * bit;
    }
    pop.y[m] = y;
    pop.labels[m] = y > t.mu ? 1 : 0;
  }
  return pop;
}

MonteCarloEstimate monte_carlo_pattern(std::size_t population, std::size_t sample_budget,
                                       std::size_t window, std::size_t trials,
                                       std::uint64_t seed) {
  if (trials < 1000) {
    throw Error(ErrorKind::invalid_argument, "monte_carlo_pattern needs >= 1000 trials");
  }
  if (window > population || sample_budget > population) {
    throw Error(ErrorKind::invalid_argument, "monte_carlo_pattern: bad sizes");
  }
  Rng rng(derive_seed(seed, SeedStream::monte_carlo));

  // Rows 0..window-1 are the decisive window. Partial Fisher-Yates draws k
  // distinct rows; swaps are undone after each trial so the permutation array
  // is not re-initialized (population can be large).
  std::vector<std::uint32_t> perm(population);
  for (std::size_t i = 0; i < population; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::vector<std::pair<std::size_t, std::size_t>> swaps;
  swaps.reserve(sample_budget);

  std::size_t successes = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    swaps.clear();
    bool saw10 = false;
    bool saw01 = false;
    for (std::size_t i = 0; i < sample_budget; ++i) {
      const std::size_t j = i + rng.below(population - i);
      std::swap(perm[i], perm[j]);
      swaps.emplace_back(i, j);
      if (perm[i] < window) {
        // Patterns are independent of which rows are drawn, so assigning them
        // lazily on draw matches assigning the whole window up front.
        const std::uint64_t pattern = rng.below(4);  // 0=00 1=01 2=10 3=11
        saw10 = saw10 || pattern == 2;
        saw01 = saw01 || pattern == 1;
      }
      if (saw10 && saw01) break;
    }
    successes += static_cast<std::size_t>(saw10 && saw01);
    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
      std::swap(perm[it->first], perm[it->second]);
    }
  }
  MonteCarloEstimate est;
  est.trials = trials;
  est.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  est.standard_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

MonteCarloEstimate monte_carlo_pattern(const TheoryParams& t, std::size_t trials,
                                       std::uint64_t seed) {
  t.validate();
  const auto window = static_cast<std::size_t>(
      std::llround(static_cast<double>(t.population_size) * t.importance_gap()));
  return monte_carlo_pattern(t.population_size, t.sample_budget, window, trials, seed);
}

}  // namespace fislab
