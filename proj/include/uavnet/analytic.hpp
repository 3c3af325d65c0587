// Semi-analytic pipeline: association probabilities, serving-distance PDFs,
// interference Laplace transforms, backhaul probability, conditional coverage
// probabilities, and overall coverage for the backhaul-unaware and
// backhaul-aware schemes.
#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uavnet/numerics.hpp"
#include "uavnet/params.hpp"

namespace uavnet::analytic {

struct AssociationProbs {
    double a_ul = 0.0;
    double a_un = 0.0;
    double a_g = 0.0;
    double sum() const { return a_ul + a_un + a_g; }
};

struct AwareTransmissionProbs {
    double at_ul = 0.0;
    double at_un = 0.0;
    double at_g = 0.0;
    double at_f = 0.0;
    double sum() const { return at_ul + at_un + at_g + at_f; }
};

/// Overall coverage with its conditional components, for reporting.
struct CoverageReport {
    double p_cov = 0.0;
    double p_cov_g = 0.0;
    double p_cov_ul = 0.0;
    double p_cov_un = 0.0;
    double s_backhaul = 0.0;
    AssociationProbs assoc;
    AwareTransmissionProbs aware;  // populated by the aware pipeline
};

/// Evaluates the analytic expressions for one parameter point. Survival
/// integrals reused by every outer quadrature are precomputed on a Chebyshev
/// grid and interpolated (cubic Hermite with exact nodal slopes); pass
/// use_cache = false for the exact-quadrature validation mode.
class AnalyticEngine {
public:
    struct Options {
        bool use_cache = true;
        int cache_nodes = 512;
        // probabilities are targeted at 1e-6 absolute; the outer quadratures
        // integrate probability densities against transform products
        numerics::QuadratureSpec outer{1e-7, 1e-6, 8000};
        // transform factors feed second-difference stencils, which amplify
        // their quadrature noise by 1/h^2; the tight absolute target keeps
        // Richardson extrapolation inside its convergence gate
        numerics::QuadratureSpec inner{1e-12, 1e-10, 20000};
        // PGFL exponent integrals are scaled by 2*pi*lambda_b ~ 1e-4 before
        // entering exp(-Q-V); a 1e-6 absolute target on the raw integral
        // keeps them below 1e-10 on probabilities while staying clear of the
        // double-precision noise floor of the mapped far tail
        numerics::QuadratureSpec pgfl_exponent{3e-6, 3e-7, 20000};
    };

    explicit AnalyticEngine(const NetworkParams& params) : AnalyticEngine(params, Options{}) {}
    AnalyticEngine(const NetworkParams& params, Options opt);

    const NetworkParams& params() const { return p_; }

    // -- association (backhaul-unaware rule) --
    double assoc_prob_uav(Los zeta) const;
    double assoc_prob_bs() const;
    AssociationProbs association() const;

    // -- serving-distance PDFs --
    double serving_pdf_bs(double x) const;
    double serving_pdf_uav(Los zeta, double y) const;

    // -- interference Laplace transforms --
    /// Closed form for the PPP of interfering BSs beyond horizontal distance
    /// x_lower.
    double laplace_bs_interference(double s, double x_lower) const;
    /// Single-UAV mixture factor with LOS/NLOS lower limits, raised to
    /// `exponent`; non-integer exponents carry the mean-count bound
    /// semantics of the aware scheme.
    double laplace_uav_interference(double s, double lower_l, double lower_n, double exponent) const;

    // -- backhaul --
    double backhaul_assoc_prob(Los xi) const;
    double backhaul_serving_pdf(Los xi, double x) const;
    /// Conditional backhaul success given association with a xi-type BS, at
    /// desired-link gain g0.
    double backhaul_cond_success(Los xi, double tau_b, double g0) const;
    /// Overall backhaul probability; with_misalignment mixes over the
    /// desired-gain PMF of the configured sigma_g/sigma_u.
    double backhaul_prob(double tau_b, bool with_misalignment) const;
    /// backhaul_prob at the configured tau_b, misalignment iff sigma > 0.
    double backhaul_prob() const;

    // -- conditional coverage --
    double cond_cov_bs_unaware() const;
    double cond_cov_uav_unaware(Los zeta) const;
    double cond_cov_bs_aware() const;
    double cond_cov_uav_aware(Los zeta) const;

    // -- overall --
    CoverageReport overall_cov_unaware() const;
    AwareTransmissionProbs aware_transmission_probs() const;
    CoverageReport overall_cov_aware() const;

    /// Events worth surfacing in run manifests (e.g. interferer-exponent
    /// clamping).
    std::vector<std::string> warnings() const;

    // exposed for oracle tests
    double survival(Los zeta, double lower) const;  // int_lower^{w_p} f_W * kappa
    double backhaul_exclusion(Los xi, double x) const;
    double backhaul_nearest_exponent(Los xi, double x) const;  // 2 pi lambda_b int_0^x kappa t dt

private:
    struct HermiteSpline {
        std::vector<double> x, y, dy;
        double eval(double at) const;
        bool empty() const { return x.empty(); }
    };

    double survival_exact(Los zeta, double lower) const;
    double nearest_exponent_exact(Los xi, double x) const;
    double kappa_access(Los zeta, double r) const;
    double kappa_backhaul(Los xi, double r) const;
    double access_mgf_integral(double s, Los zeta, double lower) const;
    double cond_cov_uav_core(Los zeta, double uav_exponent) const;
    double aware_uav_exponent() const;
    void add_warning(const std::string& w) const;

    NetworkParams p_;
    Options opt_;
    double w_p_ = 0.0;
    double e_u_ = 0.0;  // serving-BS distance bound max(E_ul(w_p), E_un(w_p))
    HermiteSpline k_los_, k_nlos_;      // survival integrals on [h_u, w_p]
    HermiteSpline lam_los_, lam_nlos_;  // backhaul nearest-distance exponents
    double lam_cache_end_ = 0.0;

    mutable std::mutex memo_mx_;
    mutable std::map<std::tuple<int, double, double>, double> s_memo_;  // (xi, tau_b, g0)
    mutable std::optional<double> a_bl_, a_bn_, a_g_, a_ul_, a_un_, s_default_;
    mutable std::vector<std::string> warnings_;
};

}  // namespace uavnet::analytic
