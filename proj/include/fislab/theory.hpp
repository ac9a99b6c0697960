#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fislab {

/// Parameters of the binary-feature population model: y = sum a_n x_n with
/// x_n ~ Bernoulli(1/2), label 1 iff y > mu. The pair (weak_index,
/// strong_index) selects the two features whose importance gap is studied.
struct TheoryParams {
  std::size_t population_size = 1000;  // M
  std::size_t n_features = 20;         // N
  std::size_t sample_budget = 100;     // k
  std::vector<double> coefficients;    // empty -> proportional to (1..N), sum 1
  double mu = 0.5;
  std::size_t weak_index = 0;    // i, 0-based, a_i < a_j
  std::size_t strong_index = 1;  // j

  std::vector<double> resolved_coefficients() const;
  double importance_gap() const;  // a_j - a_i
  void validate() const;
};

/// Probability that d window samples, each carrying an (x_i, x_j) pattern
/// uniform over {00,01,10,11}, contain both (1,0) and (0,1):
/// 1 - (2 (3/4)^d - (1/2)^d), clamped to [0,1].
double pattern_pair_probability(std::uint64_t d);

/// Closed-form probability that a size-k sample without replacement from M
/// rows hits the W-row window with at least two rows showing both decisive
/// patterns. Log-gamma binomials + log-sum-exp; exact for any scale.
double essential_sample_probability(std::size_t population, std::size_t sample_budget,
                                    std::size_t window);

/// Same, with the window derived from the params' importance gap
/// (W = round(M * gap)); exact_window keeps the 1/(1 - a_i - a_j) denominator
/// instead of the paper's unit approximation.
double essential_sample_probability(const TheoryParams& t, bool exact_window = false);

/// p over the Cartesian grid gaps x k_values, row-major by gap.
std::vector<double> probability_surface(std::size_t population,
                                        const std::vector<std::size_t>& k_values,
                                        const std::vector<double>& gaps);

/// Gaussian approximation of the linear-combination sum: (mean, variance) =
/// (0.5, 1/(3N)).
std::pair<double, double> y_distribution_params(std::size_t n_features);

/// Probability mass of Y in (mu - a_j, mu - a_i) under the Gaussian
/// approximation: the chance a sample's remaining sum makes the (i, j) gap
/// decisive for its label.
double window_probability(double mu, double a_i, double a_j, std::size_t n_features);

struct BinaryPopulation {
  std::size_t population_size = 0;
  std::size_t n_features = 0;
  std::vector<std::uint8_t> features;  // M x N row-major bits
  std::vector<double> y;
  std::vector<int> labels;
};

BinaryPopulation generate_population(const TheoryParams& t, std::uint64_t seed);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// Sampling oracle for the closed form: marks W rows as the decisive window,
/// assigns uniform patterns, draws k rows without replacement and counts runs
/// where both patterns appear among the drawn window rows.
MonteCarloEstimate monte_carlo_pattern(std::size_t population, std::size_t sample_budget,
                                       std::size_t window, std::size_t trials,
                                       std::uint64_t seed);
MonteCarloEstimate monte_carlo_pattern(const TheoryParams& t, std::size_t trials,
                                       std::uint64_t seed);

}  // namespace fislab
