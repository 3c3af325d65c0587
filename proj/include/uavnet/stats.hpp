// Estimator statistics: Wilson score intervals for binomial proportions and
// the tail probabilities used by the goodness-of-fit checks in the test and
// validation suites.
#pragma once

#include <cstdint>
#include <utility>

namespace uavnet::stats {

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for k successes in n trials. Behaves sensibly at
/// proportions near 0 and 1, unlike the Wald interval.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
double regularized_gamma_q(double a, double x);

/// Upper-tail p-value of a chi-square statistic with dof degrees of freedom.
double chi_square_p_value(double statistic, int dof);

/// Asymptotic Kolmogorov-Smirnov p-value for statistic d at sample size n.
double ks_p_value(double d, std::uint64_t n);

}  // namespace uavnet::stats
