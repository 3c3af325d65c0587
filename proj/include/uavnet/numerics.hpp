// Shared numerical kernels: adaptive Gauss-Kronrod quadrature on finite and
// semi-infinite intervals, the Gauss hypergeometric function 2F1(1,1;c;z),
// finite-difference derivatives with Richardson extrapolation, and the
// gamma-CDF bound helper H(m,x).
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnet::numerics {

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive, max_subdivisions >= 1");
    }
};

/// Thrown when an error target cannot be met; carries the best estimate so
/// callers can decide whether the residual error is acceptable.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_(best_estimate), err_(error_bound) {}
    double best_estimate() const { return best_; }
    double error_bound() const { return err_; }

private:
    double best_;
    double err_;
};

namespace detail {

inline constexpr int kInitialPanels = 8;

// 15-point Kronrod extension of the 7-point Gauss rule; positive abscissae
// and weights, plus the embedded Gauss weights
inline constexpr double kGk15X[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGk15W[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7W[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                   0.417959183673469};

/// One Gauss-Kronrod 7-15 panel with the classic rescaled error estimate
/// (|K - G| damped against the deviation integral), which keeps the estimate
/// meaningful next to integrable endpoint singularities.
template <class F>
void gk15_panel(const F& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv1[7], fv2[7];
    const double fc = f(mid);
    double resg = fc * kG7W[3];
    double resk = fc * kGk15W[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {  // shared Gauss/Kronrod abscissae
        const int jk = 2 * j + 1;
        const double dx = half * kGk15X[jk];
        fv1[jk] = f(mid - dx);
        fv2[jk] = f(mid + dx);
        const double sum = fv1[jk] + fv2[jk];
        resg += kG7W[j] * sum;
        resk += kGk15W[jk] * sum;
        resabs += kGk15W[jk] * (std::abs(fv1[jk]) + std::abs(fv2[jk]));
    }
    for (int j = 0; j < 4; ++j) {  // Kronrod-only abscissae
        const int jk = 2 * j;
        const double dx = half * kGk15X[jk];
        fv1[jk] = f(mid - dx);
        fv2[jk] = f(mid + dx);
        const double sum = fv1[jk] + fv2[jk];
        resk += kGk15W[jk] * sum;
        resabs += kGk15W[jk] * (std::abs(fv1[jk]) + std::abs(fv2[jk]));
    }
    const double reskh = 0.5 * resk;
    double resasc = kGk15W[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGk15W[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    error = std::abs((resk - resg) * half);
    if (resasc != 0.0 && error != 0.0)
        error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        error = std::max(eps50 * resabs, error);
}

}  // namespace detail

/// Integrates f over [a,b] by globally adaptive 15-point Gauss-Kronrod
/// subdivision: the panel with the largest error estimate is bisected until
/// the summed error meets max(abs_tol, rel_tol*|I|). Interior panel nodes
/// tolerate integrable endpoint singularities.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a <= b)) throw std::domain_error("integrate: requires a <= b");
    if (a == b) return 0.0;

    struct Panel {
        double err, a, b, val;
        bool operator<(const Panel& o) const { return err < o.err; }
    };

    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    const double width = (b - a) / detail::kInitialPanels;
    for (int i = 0; i < detail::kInitialPanels; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == detail::kInitialPanels) ? b : lo + width;
        double v, e;
        detail::gk15_panel(f, lo, hi, v, e);
        heap.push({e, lo, hi, v});
        total += v;
        total_err += e;
    }

    int panels = detail::kInitialPanels;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (panels >= spec.max_subdivisions)
            throw NonConvergence("integrate: error target unmet after max_subdivisions", total, total_err);
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine precision; accept its estimate
            heap.push({0.0, worst.a, worst.b, worst.val});
            total_err -= worst.err;
            continue;
        }
        double vl, el, vr, er;
        detail::gk15_panel(f, worst.a, mid, vl, el);
        detail::gk15_panel(f, mid, worst.b, vr, er);
        heap.push({el, worst.a, mid, vl});
        heap.push({er, mid, worst.b, vr});
        total += vl + vr - worst.val;
        total_err += el + er - worst.err;
        ++panels;
    }
    return total;
}

/// Integrates f over [a, inf) through the rational substitution
/// x = a + t/(1-t), t in [0,1), then delegates to integrate(). The integrand
/// must be absolutely integrable (decay faster than 1/x^2 eventually).
template <class F>
double integrate_semi_infinite(F&& f, double a, const QuadratureSpec& spec = {}) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        const double v = f(x) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, spec);
}

/// Gauss hypergeometric 2F1(1,1;c;z) for c > 1 and z in [0,1).
/// Power series with term-ratio stopping for z <= 0.9; Euler integral
/// representation via adaptive quadrature beyond that.
double gauss_2f1_11c(double c, double z);

/// 1 - (1+x)^{-m}, the gamma-CDF bound helper.
double h_bound(int m, double x);

namespace detail {

template <class F>
double central_stencil(const F& f, double s, double h, int k) {
    switch (k) {
        case 1:
            return (f(s + h) - f(s - h)) / (2.0 * h);
        case 2:
            return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
        case 3:
            return (f(s + 2 * h) - 2.0 * f(s + h) + 2.0 * f(s - h) - f(s - 2 * h)) / (2.0 * h * h * h);
        case 4:
            return (f(s + 2 * h) - 4.0 * f(s + h) + 6.0 * f(s) - 4.0 * f(s - h) + f(s - 2 * h)) / (h * h * h * h);
        default:
            throw std::domain_error("central_stencil: order out of range");
    }
}

}  // namespace detail

/// k-th derivative of f at s (k <= 4) by central differences with step
/// h = max(|s|,1)*h0, Richardson-extrapolated over h0 in {1e-2, 5e-3, 2.5e-3}.
/// Throws NonConvergence when successive Richardson levels disagree by more
/// than 1e-4 relative (beyond the finite-difference noise floor).
template <class F>
double nth_derivative(F&& f, double s, int k) {
    if (k < 0 || k > 4) throw std::domain_error("nth_derivative: k must be in [0,4]");
    if (k == 0) return f(s);

    const double base = std::max(std::abs(s), 1.0);
    const double steps[3] = {1e-2, 5e-3, 2.5e-3};
    double est[3];
    double fmag = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double h = base * steps[i];
        est[i] = detail::central_stencil(f, s, h, k);
        fmag = std::max(fmag, std::abs(est[i]) * std::pow(h, k));
    }
    // stencils are O(h^2) accurate; successive halvings give ratio-4 Richardson
    const double r1 = (4.0 * est[1] - est[0]) / 3.0;
    const double r2 = (4.0 * est[2] - est[1]) / 3.0;
    // rounding amplification of the smallest step, used as an absolute floor
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * fmag /
                         std::pow(base * steps[2], k);
    const double scale = std::max({std::abs(r1), std::abs(r2), noise,
                                   std::numeric_limits<double>::min()});
    if (std::abs(r2 - r1) > 1e-4 * scale)
        throw NonConvergence("nth_derivative: Richardson levels disagree", (16.0 * r2 - r1) / 15.0,
                             std::abs(r2 - r1));
    return (16.0 * r2 - r1) / 15.0;
}

}  // namespace uavnet::numerics
