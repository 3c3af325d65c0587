#include "uavnet/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace uavnet::stats {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::domain_error("wilson_interval: trials must be > 0");
    if (successes > trials) throw std::domain_error("wilson_interval: successes > trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) iv.low = 0.0;
    if (successes == trials) iv.high = 1.0;
    return iv;
}

namespace {

// series expansion of the lower regularized gamma P(a,x), valid for x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for the upper regularized gamma Q(a,x), x >= a+1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("regularized_gamma_q: requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_p_value(double statistic, int dof) {
    if (dof < 1) throw std::domain_error("chi_square_p_value: dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double ks_p_value(double d, std::uint64_t n) {
    if (d <= 0.0) return 1.0;
    const double sn = std::sqrt(static_cast<double>(n));
    const double lam = (sn + 0.12 + 0.11 / sn) * d;
    // the alternating series only converges usefully for lam away from 0;
    // below that the tail probability is 1 to double precision anyway
    if (lam < 0.3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    const double p = 2.0 * sum;
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace uavnet::stats
