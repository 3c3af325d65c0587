#include <doctest.h>

#include <cmath>

#include "uavnet/stats.hpp"

using namespace uavnet;

TEST_CASE("wilson_interval: brackets the point estimate and stays in [0,1]") {
    const auto iv = stats::wilson_interval(50, 100);
    CHECK(iv.low < 0.5);
    CHECK(iv.high > 0.5);
    const auto edge = stats::wilson_interval(0, 100);
    CHECK(edge.low == 0.0);
    CHECK(edge.high > 0.0);
    CHECK(edge.high < 0.1);
    const auto top = stats::wilson_interval(100, 100);
    CHECK(top.high == 1.0);
    CHECK(top.low > 0.9);
}

TEST_CASE("wilson_interval: known value") {
    // k=8, n=10, z=1.96: standard worked example
    const auto iv = stats::wilson_interval(8, 10);
    CHECK(iv.low == doctest::Approx(0.4901).epsilon(2e-3));
    CHECK(iv.high == doctest::Approx(0.9433).epsilon(2e-3));
    CHECK_THROWS(stats::wilson_interval(5, 0));
}

TEST_CASE("regularized_gamma_q: reference values") {
    // Q(1, x) = exp(-x)
    CHECK(stats::regularized_gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
    // Q(0.5, x) = erfc(sqrt(x))
    CHECK(stats::regularized_gamma_q(0.5, 1.0) ==
          doctest::Approx(std::erfc(1.0)).epsilon(1e-10));
    CHECK(stats::regularized_gamma_q(3.0, 0.0) == 1.0);
}

TEST_CASE("chi_square_p_value: textbook quantiles") {
    // P(chi2_1 > 3.841) ~ 0.05, P(chi2_10 > 18.307) ~ 0.05
    CHECK(stats::chi_square_p_value(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(stats::chi_square_p_value(18.307, 10) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(stats::chi_square_p_value(0.0, 4) == 1.0);
}

TEST_CASE("ks_p_value: calibration points") {
    // lambda = 1.36 is the 5% point of the Kolmogorov distribution
    const double n = 10000.0;
    const double d = 1.36 / std::sqrt(n);
    CHECK(stats::ks_p_value(d, 10000) == doctest::Approx(0.05).epsilon(0.05));
    CHECK(stats::ks_p_value(1e-9, 100) == doctest::Approx(1.0));
}
