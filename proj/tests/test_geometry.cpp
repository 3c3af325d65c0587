#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavnet/geometry.hpp"
#include "uavnet/numerics.hpp"
#include "uavnet/params.hpp"
#include "uavnet/stats.hpp"

using namespace uavnet;
using geometry::DeploymentGeometry;
using geometry::ExclusionKind;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sample_bs_ppp: Poisson count and backhaul flag fraction") {
    DeploymentGeometry geom;  // lambda 10/km^2, R = 5 km -> mean 785.4
    const double mean = geom.lambda_g * kPi * geom.sim_radius * geom.sim_radius;
    CHECK(mean == doctest::Approx(785.398).epsilon(1e-4));

    auto rng = geometry::make_rng(42);
    const int drops = 2000;
    double count_sum = 0.0;
    std::uint64_t flagged = 0, total = 0;
    geom.delta_b = 0.5;
    for (int i = 0; i < drops; ++i) {
        const auto d = geometry::sample_bs_ppp(geom, rng);
        count_sum += static_cast<double>(d.bs_positions.size());
        for (auto f : d.bs_backhaul_flag) flagged += f;
        total += d.bs_backhaul_flag.size();
        for (const auto& p : d.bs_positions) {
            CHECK(p.z == geom.h_g);
            CHECK(p.x * p.x + p.y * p.y <= geom.sim_radius * geom.sim_radius * (1 + 1e-12));
        }
    }
    const double empirical_mean = count_sum / drops;
    const double sigma = std::sqrt(mean / drops);
    CHECK(std::abs(empirical_mean - mean) < 3.0 * sigma);
    const double flag_sigma = std::sqrt(0.25 / static_cast<double>(total));
    CHECK(std::abs(static_cast<double>(flagged) / total - 0.5) < 3.0 * flag_sigma);
}

TEST_CASE("sample_bs_ppp: delta_b = 1 flags everything") {
    DeploymentGeometry geom;
    auto rng = geometry::make_rng(7);
    const auto d = geometry::sample_bs_ppp(geom, rng);
    for (auto f : d.bs_backhaul_flag) CHECK(f == 1);
}

TEST_CASE("sample_uav_bpp: count, support, and radius law") {
    DeploymentGeometry geom;
    geom.n_u = 0;
    auto rng = geometry::make_rng(3);
    CHECK(geometry::sample_uav_bpp(geom, rng).uav_positions.empty());

    geom.n_u = 10;
    const auto d = geometry::sample_uav_bpp(geom, rng);
    CHECK(d.uav_positions.size() == 10);
    for (const auto& p : d.uav_positions) {
        CHECK(p.z == geom.h_u);
        CHECK(std::sqrt(p.x * p.x + p.y * p.y) <= geom.r_u * (1 + 1e-12));
    }

    // KS test of the horizontal radius CDF (r/r_u)^2 at 1e5 points
    geom.n_u = 100000;
    auto rng2 = geometry::make_rng(11);
    const auto big = geometry::sample_uav_bpp(geom, rng2);
    std::vector<double> radii;
    radii.reserve(big.uav_positions.size());
    for (const auto& p : big.uav_positions) radii.push_back(std::hypot(p.x, p.y));
    std::sort(radii.begin(), radii.end());
    double ks = 0.0;
    const double n = static_cast<double>(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double cdf = (radii[i] / geom.r_u) * (radii[i] / geom.r_u);
        ks = std::max(ks, std::abs(cdf - (i + 1) / n));
        ks = std::max(ks, std::abs(cdf - i / n));
    }
    CHECK(stats::ks_p_value(ks, radii.size()) > 0.01);
}

TEST_CASE("distance_pdf_fw: centered UE single branch") {
    DeploymentGeometry geom;  // v_0 = 0, r_u = 1000, h_u = 100
    CHECK(geom.w_m() == geom.w_p());
    CHECK(geometry::distance_pdf_fw(500.0, geom) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(geometry::distance_pdf_fw(50.0, geom) == 0.0);
    CHECK(geometry::distance_pdf_fw(geom.w_p() + 1.0, geom) == 0.0);
    CHECK_THROWS_AS(geometry::distance_pdf_fw(-1.0, geom), std::domain_error);
}

TEST_CASE("distance_pdf_fw: integrates to one for offset UEs") {
    for (double v0 : {0.0, 200.0, 400.0, 800.0}) {
        DeploymentGeometry geom;
        geom.v_0 = v0;
        const double total =
            numerics::integrate([&](double w) { return geometry::distance_pdf_fw(w, geom); },
                                geom.h_u, geom.w_m()) +
            numerics::integrate([&](double w) { return geometry::distance_pdf_fw(w, geom); },
                                geom.w_m(), geom.w_p());
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("distance_pdf_fw: frozen second-branch value") {
    DeploymentGeometry geom;
    geom.v_0 = 400.0;
    CHECK(geometry::distance_pdf_fw(700.0, geom) == doctest::Approx(1.0150416137e-3).epsilon(1e-8));
}

TEST_CASE("distance_pdf_fw: matches sampled distances (chi-square)") {
    DeploymentGeometry geom;
    geom.v_0 = 400.0;
    geom.n_u = 200000;
    auto rng = geometry::make_rng(19);
    const auto d = geometry::sample_uav_bpp(geom, rng);
    const geometry::Vec3 ue{geom.v_0, 0.0, 0.0};

    const int bins = 40;
    const double lo = geom.h_u, hi = geom.w_p();
    std::vector<std::uint64_t> observed(bins, 0);
    for (const auto& p : d.uav_positions) {
        const double w =
            std::sqrt((p.x - ue.x) * (p.x - ue.x) + (p.y - ue.y) * (p.y - ue.y) + p.z * p.z);
        const int b = std::min(bins - 1, static_cast<int>((w - lo) / (hi - lo) * bins));
        observed[b] += 1;
    }
    double chi2 = 0.0;
    int dof = 0;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + (hi - lo) * b / bins;
        const double bnd = lo + (hi - lo) * (b + 1) / bins;
        const double expected =
            geom.n_u *
            numerics::integrate([&](double w) { return geometry::distance_pdf_fw(w, geom); }, a, bnd);
        if (expected < 10.0) continue;
        chi2 += (observed[b] - expected) * (observed[b] - expected) / expected;
        ++dof;
    }
    CHECK(stats::chi_square_p_value(chi2, dof - 1) > 0.01);
}

TEST_CASE("exclusion_region: fixed points and frozen values") {
    const NetworkParams p;
    CHECK(geometry::exclusion_region(ExclusionKind::e_ln, 1.0, p) == doctest::Approx(1.0));
    CHECK(geometry::exclusion_region(ExclusionKind::e_nl, 1.0, p) == doctest::Approx(1.0));
    // solving p_u z^{-eta_l} = p_g (h_g^2)^{-eta_g/2} for z gives the same number
    const double direct =
        std::pow(p.p_u / p.p_g * std::pow(p.geom.h_g * p.geom.h_g, p.eta_g / 2.0), 1.0 / p.eta_l);
    CHECK(geometry::exclusion_region(ExclusionKind::e_gl, 0.0, p) ==
          doctest::Approx(direct).epsilon(1e-12));
    CHECK(geometry::exclusion_region(ExclusionKind::e_gl, 0.0, p) ==
          doctest::Approx(52.034575).epsilon(1e-6));
    CHECK(geometry::exclusion_region(ExclusionKind::e_gl, 50.0, p) ==
          doctest::Approx(188.568011).epsilon(1e-6));
    CHECK(geometry::exclusion_region(ExclusionKind::e_gn, 50.0, p) ==
          doctest::Approx(26.434282).epsilon(1e-6));
    CHECK_THROWS_AS(geometry::exclusion_region(ExclusionKind::e_gl, -1.0, p), std::domain_error);
}

TEST_CASE("exclusion_region: e_gl and e_ul are functional inverses") {
    const NetworkParams p;
    for (double x : {10.0, 50.0, 120.0, 400.0, 1000.0}) {
        const double z = geometry::exclusion_region(ExclusionKind::e_gl, x, p);
        const double back = geometry::exclusion_region(ExclusionKind::e_ul, z, p);
        CHECK(back == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("exclusion_region: clamps below the ground intersection") {
    const NetworkParams p;
    // a very close serving UAV excludes no BS at all
    CHECK(geometry::exclusion_region(ExclusionKind::e_ul, 1e-3, p) == 0.0);
}

TEST_CASE("exclusion maps are nondecreasing in x") {
    const NetworkParams p;
    for (auto kind : {ExclusionKind::e_gl, ExclusionKind::e_gn, ExclusionKind::e_ul,
                      ExclusionKind::e_un, ExclusionKind::e_ln, ExclusionKind::e_nl}) {
        double prev = -1.0;
        for (double x = 0.5; x < 2000.0; x *= 1.7) {
            const double v = geometry::exclusion_region(kind, x, p);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("samplers: identical seed gives identical drops") {
    DeploymentGeometry geom;
    auto rng1 = geometry::make_trial_rng(123, 5);
    auto rng2 = geometry::make_trial_rng(123, 5);
    const auto a = geometry::sample_bs_ppp(geom, rng1);
    const auto b = geometry::sample_bs_ppp(geom, rng2);
    REQUIRE(a.bs_positions.size() == b.bs_positions.size());
    for (std::size_t i = 0; i < a.bs_positions.size(); ++i) {
        CHECK(a.bs_positions[i].x == b.bs_positions[i].x);
        CHECK(a.bs_positions[i].y == b.bs_positions[i].y);
    }
    // different trial index decorrelates
    auto rng3 = geometry::make_trial_rng(123, 6);
    const auto c = geometry::sample_bs_ppp(geom, rng3);
    CHECK((c.bs_positions.size() != a.bs_positions.size() ||
           c.bs_positions[0].x != a.bs_positions[0].x));
}

TEST_CASE("geometry validation rejects bad values") {
    DeploymentGeometry geom;
    geom.lambda_g = 0.0;
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
    geom = DeploymentGeometry{};
    geom.v_0 = geom.r_u + 1.0;
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
    geom = DeploymentGeometry{};
    geom.sim_radius = 2.0 * geom.r_u;
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
}
