#include <doctest.h>

#include <cmath>

#include "fislab/specfun.hpp"

using namespace fislab;

TEST_CASE("log_choose matches exact small binomials") {
  CHECK(std::exp(log_choose(5, 2)) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::exp(log_choose(10, 0)) == doctest::Approx(1.0));
  CHECK(std::exp(log_choose(10, 10)) == doctest::Approx(1.0));
  CHECK(log_choose(4, 5) == -std::numeric_limits<double>::infinity());
  CHECK(log_choose(4, -1) == -std::numeric_limits<double>::infinity());
  // large n stays finite
  CHECK(std::isfinite(log_choose(1e6, 1e4)));
}

TEST_CASE("log_sum_exp") {
  CHECK(log_sum_exp({std::log(1.0), std::log(2.0), std::log(3.0)}) ==
        doctest::Approx(std::log(6.0)).epsilon(1e-12));
  CHECK(log_sum_exp({}) == -std::numeric_limits<double>::infinity());
  CHECK(log_sum_exp({-800.0, -800.0}) == doctest::Approx(-800.0 + std::log(2.0)));
}

TEST_CASE("normal cdf and quantile invert each other") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  // reference values (scipy.stats.norm.ppf)
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.95996398454005).epsilon(1e-10));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.95996398454005).epsilon(1e-10));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.36134090240406).epsilon(1e-9));
  for (double p : {1e-8, 1e-4, 0.01, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("incomplete beta and t-distribution p-values") {
  // I_x(1,1) = x
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-13));
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  const double v = regularized_incomplete_beta(2.5, 3.5, 0.3);
  CHECK(v == doctest::Approx(1.0 - regularized_incomplete_beta(3.5, 2.5, 0.7))
                 .epsilon(1e-12));
  // scipy 2*t.sf reference values
  CHECK(student_t_two_sided_p(4.242640687119285, 3) ==
        doctest::Approx(0.023981199790657).epsilon(1e-10));
  CHECK(student_t_two_sided_p(4.898979485566356, 3) ==
        doctest::Approx(0.016276603459429).epsilon(1e-10));
  CHECK(student_t_two_sided_p(2.0, 10) == doctest::Approx(0.07338803477074).epsilon(1e-10));
  CHECK(student_t_two_sided_p(0.5, 4) == doctest::Approx(0.64332996318186).epsilon(1e-10));
  CHECK(student_t_two_sided_p(0.0, 7) == doctest::Approx(1.0));
}
