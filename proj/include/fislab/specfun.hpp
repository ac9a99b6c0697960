#pragma once

#include <cstddef>
#include <vector>

namespace fislab {

/// log(n choose k); -inf when k < 0 or k > n.
double log_choose(double n, double k);

/// log(sum(exp(x))) of the finite entries; -inf for an empty/all -inf input.
double log_sum_exp(const std::vector<double>& log_terms);

/// Standard normal CDF, accurate to ~1e-15 via erfc.
double normal_cdf(double x);

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement step; absolute error below 1e-13 on (0,1)).
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) by modified Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace fislab
