#include "uavnet/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavnet/params.hpp"

namespace uavnet::geometry {

namespace {
constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

void DeploymentGeometry::validate() const {
    if (!(lambda_g > 0.0)) throw std::invalid_argument("geometry: lambda_g must be > 0");
    if (!(h_g > 0.0)) throw std::invalid_argument("geometry: h_g must be > 0");
    if (!(h_u > 0.0)) throw std::invalid_argument("geometry: h_u must be > 0");
    if (!(r_u > 0.0)) throw std::invalid_argument("geometry: r_u must be > 0");
    if (n_u < 0) throw std::invalid_argument("geometry: n_u must be >= 0");
    if (delta_b < 0.0 || delta_b > 1.0) throw std::invalid_argument("geometry: delta_b must be in [0,1]");
    if (v_0 < 0.0 || v_0 > r_u) throw std::invalid_argument("geometry: v_0 must be in [0, r_u]");
    if (!(sim_radius >= 3.0 * r_u)) throw std::invalid_argument("geometry: sim_radius must be >= 3*r_u");
}

double DeploymentGeometry::w_m() const {
    const double d = r_u - v_0;
    return std::sqrt(d * d + h_u * h_u);
}

double DeploymentGeometry::w_p() const {
    const double d = r_u + v_0;
    return std::sqrt(d * d + h_u * h_u);
}

RngEngine make_rng(std::uint64_t seed) { return RngEngine(splitmix64(seed)); }

RngEngine make_trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
    return RngEngine(splitmix64(splitmix64(seed) ^ (trial_index + 1)));
}

PointDrop sample_bs_ppp(const DeploymentGeometry& geom, RngEngine& rng) {
    geom.validate();
    PointDrop drop;
    const double mean = geom.lambda_g * kPi * geom.sim_radius * geom.sim_radius;
    std::poisson_distribution<int> count(mean);
    const int n = count(rng);
    drop.bs_positions.reserve(n);
    drop.bs_backhaul_flag.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = geom.sim_radius * std::sqrt(uniform01(rng));
        const double phi = 2.0 * kPi * uniform01(rng);
        drop.bs_positions.push_back({r * std::cos(phi), r * std::sin(phi), geom.h_g});
        drop.bs_backhaul_flag.push_back(uniform01(rng) < geom.delta_b ? 1 : 0);
    }
    return drop;
}

PointDrop sample_uav_bpp(const DeploymentGeometry& geom, RngEngine& rng) {
    geom.validate();
    PointDrop drop;
    drop.uav_positions.reserve(geom.n_u);
    for (int i = 0; i < geom.n_u; ++i) {
        const double r = geom.r_u * std::sqrt(uniform01(rng));
        const double phi = 2.0 * kPi * uniform01(rng);
        drop.uav_positions.push_back({r * std::cos(phi), r * std::sin(phi), geom.h_u});
    }
    return drop;
}

double distance_pdf_fw(double w, const DeploymentGeometry& geom) {
    if (w < 0.0) throw std::domain_error("distance_pdf_fw: negative distance");
    const double wm = geom.w_m();
    const double wp = geom.w_p();
    if (w < geom.h_u || w > wp) return 0.0;
    if (w <= wm) return 2.0 * w / (geom.r_u * geom.r_u);
    // offset-UE branch; the arccos argument is clamped against rounding at
    // the w_m / w_p edges
    const double u2 = w * w - geom.h_u * geom.h_u;
    if (u2 <= 0.0 || geom.v_0 <= 0.0) return 0.0;
    double arg = (u2 + geom.v_0 * geom.v_0 - geom.r_u * geom.r_u) / (2.0 * geom.v_0 * std::sqrt(u2));
    arg = std::clamp(arg, -1.0, 1.0);
    return 2.0 * w / (kPi * geom.r_u * geom.r_u) * std::acos(arg);
}

double exclusion_region(ExclusionKind kind, double x, const NetworkParams& p) {
    if (x < 0.0) throw std::domain_error("exclusion_region: negative distance");
    const double h_g = p.geom.h_g;
    switch (kind) {
        case ExclusionKind::e_gl:
        case ExclusionKind::e_gn: {
            const double eta_z = kind == ExclusionKind::e_gl ? p.eta_l : p.eta_n;
            return std::pow(p.p_u / p.p_g, 1.0 / eta_z) *
                   std::pow(x * x + h_g * h_g, p.eta_g / (2.0 * eta_z));
        }
        case ExclusionKind::e_ul:
        case ExclusionKind::e_un: {
            const double eta_z = kind == ExclusionKind::e_ul ? p.eta_l : p.eta_n;
            const double rad = std::pow(p.p_g / p.p_u, 2.0 / p.eta_g) *
                                   std::pow(x, 2.0 * eta_z / p.eta_g) -
                               h_g * h_g;
            return rad > 0.0 ? std::sqrt(rad) : 0.0;
        }
        case ExclusionKind::e_ln:
            return std::pow(x, p.eta_l / p.eta_n);
        case ExclusionKind::e_nl:
            return std::pow(x, p.eta_n / p.eta_l);
    }
    throw std::logic_error("exclusion_region: unknown kind");
}

}  // namespace uavnet::geometry
