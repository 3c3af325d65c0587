#include "uavnet/numerics.hpp"

namespace uavnet::numerics {

double gauss_2f1_11c(double c, double z) {
    if (!(c > 1.0)) throw std::domain_error("gauss_2f1_11c: requires c > 1");
    if (!(z >= 0.0) || z >= 1.0) throw std::domain_error("gauss_2f1_11c: requires 0 <= z < 1");
    if (z == 0.0) return 1.0;

    if (z <= 0.9) {
        // sum_{n>=0} n!/(c)_n z^n; the term ratio (n+1)z/(c+n) -> z < 1
        double term = 1.0, sum = 1.0;
        for (int n = 0; n < 100000; ++n) {
            term *= (n + 1.0) * z / (c + n);
            sum += term;
            const double ratio = (n + 2.0) * z / (c + n + 1.0);
            if (term / (1.0 - ratio) < 1e-12 * sum) return sum;
        }
        throw NonConvergence("gauss_2f1_11c: series did not converge", sum, term);
    }

    // Euler integral (c-1) int_0^1 (1-t)^{c-2}/(1-zt) dt; substituting
    // 1-t = v^{1/(c-1)} absorbs the weight factor exactly and leaves the
    // bounded integrand int_0^1 dv / (1 - z + z v^{1/(c-1)})
    QuadratureSpec tight{1e-13, 1e-11, 4000};
    const double expo = 1.0 / (c - 1.0);
    return integrate([=](double v) { return 1.0 / (1.0 - z + z * std::pow(v, expo)); }, 0.0, 1.0,
                     tight);
}

double h_bound(int m, double x) {
    if (m < 1) throw std::domain_error("h_bound: requires m >= 1");
    if (!(x >= 0.0)) throw std::domain_error("h_bound: requires x >= 0");
    return 1.0 - std::pow(1.0 + x, -m);
}

}  // namespace uavnet::numerics
