#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "uavnet/analytic.hpp"
#include "uavnet/numerics.hpp"
#include "uavnet/simulator.hpp"

using namespace uavnet;
using analytic::AnalyticEngine;

namespace {
constexpr double kPi = std::numbers::pi;

NetworkParams table_defaults() { return NetworkParams::defaults(); }

double aligned_gain(const NetworkParams& p) { return p.ant_bs.g_max * p.ant_uav.g_max; }
}  // namespace

TEST_CASE("association: published operating point at h_u = 110 m") {
    auto p = table_defaults();
    p.geom.h_u = 110.0;
    AnalyticEngine eng(p);
    const auto a = eng.association();
    CHECK(a.a_ul + a.a_un == doctest::Approx(0.532).epsilon(0.01));
    CHECK(a.a_g == doctest::Approx(0.4677).epsilon(0.005));
    CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("association: sums to one across parameter variations") {
    for (auto [h_u, n_u, p_u] : {std::tuple{70.0, 5, 1.0}, std::tuple{150.0, 20, 0.5},
                                 std::tuple{300.0, 3, 2.0}, std::tuple{90.0, 1, 1.0},
                                 std::tuple{200.0, 10, 5.0}}) {
        auto p = table_defaults();
        p.geom.h_u = h_u;
        p.geom.n_u = n_u;
        p.p_u = p_u;
        AnalyticEngine eng(p);
        CHECK(eng.association().sum() == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("association: no UAVs leaves the closed-form BS probability") {
    auto p = table_defaults();
    p.geom.n_u = 0;
    AnalyticEngine eng(p);
    CHECK(eng.assoc_prob_uav(Los::los) == 0.0);
    CHECK(eng.assoc_prob_uav(Los::nlos) == 0.0);
    const double e_ul = geometry::exclusion_region(geometry::ExclusionKind::e_ul, p.geom.w_p(), p);
    const double e_un = geometry::exclusion_region(geometry::ExclusionKind::e_un, p.geom.w_p(), p);
    const double e_u = std::max(e_ul, e_un);
    CHECK(eng.assoc_prob_bs() ==
          doctest::Approx(1.0 - std::exp(-kPi * p.geom.lambda_g * e_u * e_u)).epsilon(1e-6));
}

TEST_CASE("association: forcing full access LOS removes NLOS association") {
    auto p = table_defaults();
    p.access_los.a = 1e-12;  // sigmoid collapses to 1 everywhere
    AnalyticEngine eng(p);
    CHECK(eng.assoc_prob_uav(Los::nlos) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("association: matches Monte-Carlo class fractions") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const auto a = eng.association();
    const auto est = simulator::estimate(p, simulator::Scheme::unaware, 20000, 99, 2);
    const double n = static_cast<double>(est.n_trials);
    const auto near = [&](double analytic, std::uint64_t count) {
        const double frac = count / n;
        const double sigma = std::sqrt(std::max(frac * (1 - frac), 1e-6) / n);
        CHECK(std::abs(analytic - frac) < 4.0 * sigma + 2e-3);
    };
    near(a.a_g, est.breakdown.assoc_bs);
    near(a.a_ul, est.breakdown.assoc_uav_los);
    near(a.a_un, est.breakdown.assoc_uav_nlos);
}

TEST_CASE("serving_pdf_bs: normalization and the no-UAV Rayleigh form") {
    auto p = table_defaults();
    {
        AnalyticEngine eng(p);
        const double e_ul = geometry::exclusion_region(geometry::ExclusionKind::e_ul, p.geom.w_p(), p);
        const double e_un = geometry::exclusion_region(geometry::ExclusionKind::e_un, p.geom.w_p(), p);
        const double e_u = std::max(e_ul, e_un);
        const double total =
            numerics::integrate([&](double x) { return eng.serving_pdf_bs(x); }, 0.0, e_u);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
        CHECK_THROWS_AS(eng.serving_pdf_bs(e_u + 1.0), std::domain_error);
    }
    p.geom.n_u = 0;
    AnalyticEngine eng0(p);
    const double e_u = std::max(
        geometry::exclusion_region(geometry::ExclusionKind::e_ul, p.geom.w_p(), p),
        geometry::exclusion_region(geometry::ExclusionKind::e_un, p.geom.w_p(), p));
    const double denom = 1.0 - std::exp(-kPi * p.geom.lambda_g * e_u * e_u);
    for (double x : {50.0, 150.0, 400.0}) {
        const double rayleigh =
            2.0 * kPi * p.geom.lambda_g * x * std::exp(-kPi * p.geom.lambda_g * x * x) / denom;
        CHECK(eng0.serving_pdf_bs(x) == doctest::Approx(rayleigh).epsilon(1e-6));
    }
}

TEST_CASE("serving_pdf_uav: normalization and single-UAV collapse") {
    auto p = table_defaults();
    {
        AnalyticEngine eng(p);
        const double total = numerics::integrate(
            [&](double y) { return eng.serving_pdf_uav(Los::los, y); }, p.geom.h_u, p.geom.w_p());
        CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
    }
    p.geom.n_u = 1;
    AnalyticEngine eng1(p);
    const double a_ul = eng1.assoc_prob_uav(Los::los);
    for (double y : {150.0, 400.0, 800.0}) {
        const double e_ul = geometry::exclusion_region(geometry::ExclusionKind::e_ul, y, p);
        const double direct = geometry::distance_pdf_fw(y, p.geom) *
                              channel::los_prob_access(y, p.geom.h_u, p.access_los) *
                              std::exp(-kPi * p.geom.lambda_g * e_ul * e_ul) / a_ul;
        CHECK(eng1.serving_pdf_uav(Los::los, y) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("laplace_bs_interference: trivial point, frozen value, PGFL oracle") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    CHECK(eng.laplace_bs_interference(0.0, 50.0) == 1.0);

    const auto pgfl_oracle = [&](double s, double x_lower) {
        const double integral = numerics::integrate_semi_infinite(
            [&](double z) {
                const double d = std::pow(z * z + p.geom.h_g * p.geom.h_g, -p.eta_g / 2.0);
                return (1.0 - 1.0 / (1.0 + s * p.p_g * d)) * z;
            },
            x_lower, numerics::QuadratureSpec{1e-12, 1e-10, 4000});
        return std::exp(-2.0 * kPi * p.geom.lambda_g * integral);
    };

    const double x = 50.0;
    const double s1 = p.tau_a * std::pow(x * x + p.geom.h_g * p.geom.h_g, p.eta_g / 2.0) / p.p_g;
    const double closed = eng.laplace_bs_interference(s1, x);
    CHECK(closed == doctest::Approx(0.9257914512).epsilon(1e-8));  // frozen from the oracle
    CHECK(closed == doctest::Approx(pgfl_oracle(s1, x)).epsilon(1e-6));

    // two more operating points, including a high-threshold one (z > 0.9 path)
    for (auto [tau_db, xl] : {std::pair{10.0, 120.0}, std::pair{16.0, 30.0}}) {
        const double tau = db_to_linear(tau_db);
        const double s = tau * std::pow(xl * xl + p.geom.h_g * p.geom.h_g, p.eta_g / 2.0) / p.p_g;
        CHECK(eng.laplace_bs_interference(s, xl) ==
              doctest::Approx(pgfl_oracle(s, xl)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(eng.laplace_bs_interference(-1.0, 0.0), std::domain_error);
}

TEST_CASE("laplace_bs_interference: agrees with the Monte-Carlo transform") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const double x = 50.0;
    const double s1 = p.tau_a * std::pow(x * x + p.geom.h_g * p.geom.h_g, p.eta_g / 2.0) / p.p_g;
    simulator::LaplaceConditioning cond;
    cond.x_lower = x;
    const auto mc = simulator::mc_laplace(p, simulator::LaplaceTarget::bs_interf, s1, cond, 40000, 5);
    const double closed = eng.laplace_bs_interference(s1, x);
    CHECK(closed > mc.ci_low - 1e-3);
    CHECK(closed < mc.ci_high + 1e-3);
}

TEST_CASE("laplace_uav_interference: trivial exponents and frozen value") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    CHECK(eng.laplace_uav_interference(0.0, 200.0, 60.0, 10.0) == 1.0);
    CHECK(eng.laplace_uav_interference(123.0, 200.0, 60.0, 0.0) == 1.0);

    const double x = 50.0;
    const double s1 = p.tau_a * std::pow(x * x + p.geom.h_g * p.geom.h_g, p.eta_g / 2.0) / p.p_g;
    const double lower_l = geometry::exclusion_region(geometry::ExclusionKind::e_gl, x, p);
    const double lower_n = geometry::exclusion_region(geometry::ExclusionKind::e_gn, x, p);
    const double v = eng.laplace_uav_interference(s1, lower_l, lower_n, p.geom.n_u);
    CHECK(v == doctest::Approx(0.8927633721).epsilon(1e-7));  // frozen from the oracle

    simulator::LaplaceConditioning cond;
    cond.lower_l = lower_l;
    cond.lower_n = lower_n;
    const auto mc = simulator::mc_laplace(p, simulator::LaplaceTarget::uav_interf, s1, cond, 40000, 7);
    CHECK(v > mc.ci_low - 2e-3);
    CHECK(v < mc.ci_high + 2e-3);
}

TEST_CASE("laplace transforms: value in (0,1], nonincreasing in s") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    double prev_bs = 1.0, prev_uav = 1.0;
    for (double s = 0.0; s < 1e7; s = s == 0.0 ? 10.0 : s * 10.0) {
        const double lb = eng.laplace_bs_interference(s, 100.0);
        const double lu = eng.laplace_uav_interference(s, 150.0, 150.0, 10.0);
        CHECK(lb > 0.0);
        CHECK(lb <= 1.0);
        CHECK(lu >= 0.0);
        CHECK(lu <= 1.0);
        CHECK(lb <= prev_bs + 1e-12);
        CHECK(lu <= prev_uav + 1e-12);
        prev_bs = lb;
        prev_uav = lu;
    }
}

TEST_CASE("cond_cov_bs_unaware: zero-threshold limit and monotonicity") {
    auto p = table_defaults();
    p.tau_a = 1e-9;
    CHECK(AnalyticEngine(p).cond_cov_bs_unaware() == doctest::Approx(1.0).epsilon(1e-4));

    double prev = 1.1;
    for (double tau_db = -10.0; tau_db <= 17.0; tau_db += 3.0) {
        auto q = table_defaults();
        q.tau_a = db_to_linear(tau_db);
        const double v = AnalyticEngine(q).cond_cov_bs_unaware();
        CHECK(v < prev + 1e-6);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("backhaul_assoc_prob: complementarity and the forced-LOS limit") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const double a_bl = eng.backhaul_assoc_prob(Los::los);
    const double a_bn = eng.backhaul_assoc_prob(Los::nlos);
    CHECK(a_bl + a_bn == doctest::Approx(1.0).epsilon(1e-5));

    auto forced = table_defaults();
    forced.backhaul_los.c = 1e-12;  // kappa_bl ~ e = 1 everywhere
    AnalyticEngine eng_forced(forced);
    CHECK(eng_forced.backhaul_assoc_prob(Los::los) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eng_forced.backhaul_assoc_prob(Los::nlos) == doctest::Approx(0.0).epsilon(1e-6));

    auto none = table_defaults();
    none.geom.delta_b = 0.0;
    CHECK_THROWS_AS(AnalyticEngine(none).backhaul_assoc_prob(Los::los), std::domain_error);
}

TEST_CASE("backhaul_assoc_prob: LOS fraction matches simulation") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const double a_bl = eng.backhaul_assoc_prob(Los::los);
    auto rng = geometry::make_rng(31);
    int los_count = 0;
    const int drops = 3000;
    for (int i = 0; i < drops; ++i) {
        const auto real = simulator::drop_realization(p, rng);
        const auto bh = simulator::evaluate_backhaul(real, p);
        const std::size_t n_en = real.backhaul_bs.size();
        los_count += real.backhaul_los[0 * n_en + bh[0].serving_bs] ? 1 : 0;
    }
    const double frac = los_count / static_cast<double>(drops);
    CHECK(std::abs(a_bl - frac) < 4.0 * std::sqrt(0.25 / drops) + 1e-3);
}

TEST_CASE("backhaul_serving_pdf: normalization and density contraction") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const double total = numerics::integrate_semi_infinite(
        [&](double x) { return eng.backhaul_serving_pdf(Los::los, x); }, 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(eng.backhaul_serving_pdf(Los::los, -1.0), std::domain_error);

    // doubling the backhaul density stochastically contracts the distance
    auto dense = table_defaults();
    dense.geom.lambda_g *= 2.0;
    AnalyticEngine eng2(dense);
    const auto cdf = [](AnalyticEngine& e, double x) {
        return numerics::integrate([&](double t) { return e.backhaul_serving_pdf(Los::los, t); },
                                   0.0, x);
    };
    for (double x : {50.0, 100.0, 200.0, 400.0}) CHECK(cdf(eng2, x) >= cdf(eng, x) - 1e-6);
}

TEST_CASE("backhaul probability: zero-threshold limit and published points") {
    {
        auto p = table_defaults();
        p.geom.h_u = 70.0;
        AnalyticEngine eng(p);
        CHECK(eng.backhaul_cond_success(Los::los, 1e-9, aligned_gain(p)) ==
              doctest::Approx(1.0).epsilon(1e-5));
        CHECK(eng.backhaul_prob(10.0, false) == doctest::Approx(0.9776).epsilon(0.021));
    }
    {
        auto p = table_defaults();
        p.geom.h_u = 490.0;
        p.tau_b = db_to_linear(20.0);
        AnalyticEngine eng(p);
        CHECK(eng.backhaul_prob() <= 1e-4);
    }
}

TEST_CASE("backhaul probability: misalignment mixture reduces to aligned at sigma 0") {
    auto p = table_defaults();
    AnalyticEngine eng(p);
    CHECK(eng.backhaul_prob(p.tau_b, true) ==
          doctest::Approx(eng.backhaul_prob(p.tau_b, false)).epsilon(1e-12));
}

TEST_CASE("backhaul probability: nonincreasing in tau_b and in sigma") {
    auto p = table_defaults();
    AnalyticEngine eng(p);
    double prev = 1.1;
    for (double tb_db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        const double s = eng.backhaul_prob(db_to_linear(tb_db), false);
        CHECK(s <= prev + 1e-9);
        prev = s;
    }
    prev = 1.1;
    for (double sigma : {0.0, 0.1, 0.3, 0.6, 1.0}) {
        auto q = table_defaults();
        q.sigma_g = q.sigma_u = sigma;
        AnalyticEngine e2(q);
        const double s = e2.backhaul_prob(q.tau_b, true);
        CHECK(s <= prev + 1e-9);
        prev = s;
    }
}

TEST_CASE("backhaul probability: m = 1 case is exact against the SINR simulation") {
    auto p = table_defaults();
    p.fading.m_l = 1;
    p.fading.m_n = 1;
    AnalyticEngine eng(p);
    const double s_analytic = eng.backhaul_prob(p.tau_b, false);

    auto rng = geometry::make_rng(41);
    int ok = 0;
    const int drops = 20000;
    for (int i = 0; i < drops; ++i) {
        const auto real = simulator::drop_realization(p, rng);
        const auto bh = simulator::evaluate_backhaul(real, p);
        ok += bh[0].ok ? 1 : 0;
    }
    const auto ci = stats::wilson_interval(ok, drops);
    CHECK(s_analytic > ci.low - 0.01);
    CHECK(s_analytic < ci.high + 0.01);
}

TEST_CASE("cond_cov_uav_unaware: zero-threshold limit equals the backhaul probability") {
    auto p = table_defaults();
    p.tau_a = 1e-12;
    AnalyticEngine eng(p);
    CHECK(eng.cond_cov_uav_unaware(Los::los) ==
          doctest::Approx(eng.backhaul_prob()).epsilon(1e-4));
}

TEST_CASE("overall coverage: published unaware/aware pair at N_u = 19") {
    auto p = table_defaults();
    p.geom.n_u = 19;
    AnalyticEngine eng(p);
    const auto unaware = eng.overall_cov_unaware();
    const auto aware = eng.overall_cov_aware();
    CHECK(unaware.p_cov == doctest::Approx(0.7299).epsilon(0.03));
    CHECK(aware.p_cov == doctest::Approx(0.7334).epsilon(0.03));
    CHECK(aware.p_cov >= unaware.p_cov - 1e-3);
}

TEST_CASE("overall coverage unaware: zero-access-threshold composition") {
    auto p = table_defaults();
    p.tau_a = 1e-12;
    AnalyticEngine eng(p);
    const auto rep = eng.overall_cov_unaware();
    const double expected =
        rep.assoc.a_g + (rep.assoc.a_ul + rep.assoc.a_un) * rep.s_backhaul;
    CHECK(rep.p_cov == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("aware_transmission_probs: published h_u = 230 m point and sum rule") {
    auto p = table_defaults();
    p.geom.h_u = 230.0;
    AnalyticEngine eng(p);
    const auto t = eng.aware_transmission_probs();
    CHECK(t.at_ul + t.at_un == doctest::Approx(0.7006).epsilon(0.03));
    CHECK(t.at_g == doctest::Approx(0.2359).epsilon(0.03));
    CHECK(t.at_f == doctest::Approx(0.0635).epsilon(0.20));
    CHECK(t.sum() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("aware_transmission_probs: sums to one at varied parameters") {
    for (auto [h_u, tb_db] : {std::pair{70.0, 5.0}, std::pair{150.0, 15.0}, std::pair{400.0, 10.0},
                              std::pair{100.0, 20.0}, std::pair{250.0, 10.0}}) {
        auto p = table_defaults();
        p.geom.h_u = h_u;
        p.tau_b = db_to_linear(tb_db);
        AnalyticEngine eng(p);
        CHECK(eng.aware_transmission_probs().sum() == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("cond_cov_bs_aware: exceeds the unaware value when backhaul can fail") {
    auto p = table_defaults();
    p.geom.h_u = 350.0;  // weaker backhaul, S well below 1
    AnalyticEngine eng(p);
    CHECK(eng.backhaul_prob() < 0.99);
    CHECK(eng.cond_cov_bs_aware() >= eng.cond_cov_bs_unaware() - 1e-9);
}

TEST_CASE("cond_cov_uav_aware: near-certain backhaul recovers the access term") {
    auto p = table_defaults();
    p.tau_b = 1e-9;  // S -> 1, exponent collapses to N_u - 1
    AnalyticEngine eng(p);
    const double aware = eng.cond_cov_uav_aware(Los::los);
    const double unaware_access = eng.cond_cov_uav_unaware(Los::los) / eng.backhaul_prob();
    CHECK(aware == doctest::Approx(unaware_access).epsilon(1e-4));
    CHECK(eng.warnings().empty());
}

TEST_CASE("cond_cov_uav_aware: exponent clamp is recorded") {
    auto p = table_defaults();
    p.geom.n_u = 1;
    p.geom.h_u = 490.0;
    p.tau_b = db_to_linear(20.0);  // N_u * S << 1
    AnalyticEngine eng(p);
    eng.cond_cov_uav_aware(Los::los);
    CHECK(!eng.warnings().empty());
}

TEST_CASE("overall_cov_aware: published height-sweep point at 110 m") {
    auto p = table_defaults();
    p.geom.h_u = 110.0;
    AnalyticEngine eng(p);
    CHECK(eng.overall_cov_aware().p_cov == doctest::Approx(0.711).epsilon(0.03));
}

TEST_CASE("mean-count interference bound stays below the Monte-Carlo transform") {
    const auto p = table_defaults();
    AnalyticEngine eng(p);
    const double s_tb = eng.backhaul_prob();
    for (double x : {40.0, 100.0}) {
        const double s1 = p.tau_a * std::pow(x * x + p.geom.h_g * p.geom.h_g, p.eta_g / 2.0) / p.p_g;
        const double lower_l = geometry::exclusion_region(geometry::ExclusionKind::e_gl, x, p);
        const double lower_n = geometry::exclusion_region(geometry::ExclusionKind::e_gn, x, p);
        const double bound =
            eng.laplace_uav_interference(s1, lower_l, lower_n, p.geom.n_u * s_tb);
        simulator::LaplaceConditioning cond;
        cond.lower_l = lower_l;
        cond.lower_n = lower_n;
        cond.s_success = s_tb;
        const auto mc = simulator::mc_laplace(p, simulator::LaplaceTarget::uav_successful_interf, s1,
                                              cond, 20000, 13);
        CHECK(bound <= mc.ci_high + 1e-3);
    }
}

TEST_CASE("analytic engine: cached and exact modes agree") {
    auto p = table_defaults();
    p.geom.v_0 = 300.0;  // exercise the two-branch distance PDF
    AnalyticEngine cached(p);
    AnalyticEngine::Options exact_opt;
    exact_opt.use_cache = false;
    AnalyticEngine exact(p, exact_opt);
    CHECK(cached.assoc_prob_bs() == doctest::Approx(exact.assoc_prob_bs()).epsilon(1e-6));
    CHECK(cached.assoc_prob_uav(Los::los) ==
          doctest::Approx(exact.assoc_prob_uav(Los::los)).epsilon(1e-6));
    const double s = 1e5;
    CHECK(cached.laplace_uav_interference(s, 200.0, 120.0, 9.0) ==
          doctest::Approx(exact.laplace_uav_interference(s, 200.0, 120.0, 9.0)).epsilon(1e-6));
}
