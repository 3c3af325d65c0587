#include "uavnet/channel.hpp"

#include <numbers>
#include <stdexcept>

#include "uavnet/params.hpp"

namespace uavnet::channel {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDegPerRad = 180.0 / kPi;
}  // namespace

double los_prob_access(double r, double h_u, const AccessLosParams& p) {
    if (r < h_u) throw std::domain_error("los_prob_access: r must be >= h_u");
    const double horiz2 = r * r - h_u * h_u;
    const double elev_deg = horiz2 <= 0.0 ? 90.0 : kDegPerRad * std::atan(h_u / std::sqrt(horiz2));
    return 1.0 / (1.0 + p.a * std::exp(-p.b * (elev_deg - p.a)));
}

double los_prob_backhaul(double r, double delta_h, const BackhaulLosParams& p) {
    if (r < 0.0 || delta_h < 0.0) throw std::domain_error("los_prob_backhaul: negative distance");
    const double elev_deg = r <= 0.0 ? 90.0 : kDegPerRad * std::atan(delta_h / r);
    return -p.c * std::exp(-p.d * elev_deg) + p.e;
}

double los_prob_itu(double r, const ItuLosParams& p) {
    if (!(r > 0.0)) throw std::domain_error("los_prob_itu: requires r > 0");
    const int m = static_cast<int>(std::floor(r * std::sqrt(p.alpha * p.beta) / 1000.0 - 1.0));
    if (m < 0) return 1.0;
    double prod = 1.0;
    for (int n = 0; n <= m; ++n) {
        const double ray_h = p.h_tx - (n + 0.5) * (p.h_tx - p.h_rx) / (m + 1);
        prod *= 1.0 - std::exp(-ray_h * ray_h / (2.0 * p.gamma * p.gamma));
    }
    return prod;
}

double received_power(LinkKind link, double distance, double fading_gain, double beam_gain,
                      const NetworkParams& p) {
    if (!(distance > 0.0) && link != LinkKind::bs_ue && link != LinkKind::bs_uav_los &&
        link != LinkKind::bs_uav_nlos)
        throw std::domain_error("received_power: nonpositive distance");
    if (distance < 0.0) throw std::domain_error("received_power: negative distance");
    switch (link) {
        case LinkKind::bs_ue: {
            const double d2 = distance * distance + p.geom.h_g * p.geom.h_g;
            return p.p_g * std::pow(d2, -p.eta_g / 2.0) * fading_gain;
        }
        case LinkKind::uav_ue_los:
            return p.p_u * std::pow(distance, -p.eta_l) * fading_gain;
        case LinkKind::uav_ue_nlos:
            return p.p_u * std::pow(distance, -p.eta_n) * fading_gain;
        case LinkKind::bs_uav_los: {
            const double dh = p.geom.delta_h();
            return p.p_b * beam_gain * p.c_l * std::pow(distance * distance + dh * dh, -p.eta_l / 2.0) *
                   fading_gain;
        }
        case LinkKind::bs_uav_nlos: {
            const double dh = p.geom.delta_h();
            return p.p_b * beam_gain * p.c_n * std::pow(distance * distance + dh * dh, -p.eta_n / 2.0) *
                   fading_gain;
        }
    }
    throw std::logic_error("received_power: unknown link");
}

double sample_rayleigh_power(geometry::RngEngine& rng) {
    return -std::log1p(-geometry::uniform01(rng));
}

double sample_nakagami_power(int m, geometry::RngEngine& rng) {
    if (m < 1) throw std::domain_error("sample_nakagami_power: m must be >= 1");
    // integer shape: Gamma(m, 1/m) is a normalized sum of unit exponentials,
    // folded into one logarithm
    double prod = 1.0;
    for (int i = 0; i < m; ++i) prod *= 1.0 - geometry::uniform01(rng);
    return -std::log(prod) / m;
}

double antenna_gain(double phi, const AntennaPattern& pat) {
    if (phi < -kPi || phi >= kPi) throw std::domain_error("antenna_gain: phi outside [-pi, pi)");
    return std::abs(phi) <= 0.5 * pat.theta ? pat.g_max : pat.g_min;
}

GainDistribution interferer_gain_pmf(const AntennaPattern& pat_g, const AntennaPattern& pat_u) {
    const double cg = pat_g.theta / (2.0 * kPi);
    const double cu = pat_u.theta / (2.0 * kPi);
    GainDistribution d;
    d.atoms[0] = {pat_g.g_max * pat_u.g_max, cg * cu};
    d.atoms[1] = {pat_g.g_max * pat_u.g_min, cg * (1.0 - cu)};
    d.atoms[2] = {pat_g.g_min * pat_u.g_max, (1.0 - cg) * cu};
    d.atoms[3] = {pat_g.g_min * pat_u.g_min, (1.0 - cg) * (1.0 - cu)};
    return d;
}

GainDistribution desired_gain_pmf(const AntennaPattern& pat_g, const AntennaPattern& pat_u,
                                  double sigma_g, double sigma_u) {
    if (sigma_g < 0.0 || sigma_u < 0.0) throw std::domain_error("desired_gain_pmf: negative sigma");
    // P(|eps| <= theta/2) for half-normal |eps| of scale sigma
    const auto aligned_prob = [](double half_beam, double sigma) {
        if (sigma == 0.0) return 1.0;
        return std::erf(half_beam / (std::sqrt(2.0) * sigma));
    };
    const double fg = aligned_prob(0.5 * pat_g.theta, sigma_g);
    const double fu = aligned_prob(0.5 * pat_u.theta, sigma_u);
    GainDistribution d;
    d.atoms[0] = {pat_g.g_max * pat_u.g_max, fg * fu};
    d.atoms[1] = {pat_g.g_max * pat_u.g_min, fg * (1.0 - fu)};
    d.atoms[2] = {pat_g.g_min * pat_u.g_max, (1.0 - fg) * fu};
    d.atoms[3] = {pat_g.g_min * pat_u.g_min, (1.0 - fg) * (1.0 - fu)};
    return d;
}

}  // namespace uavnet::channel
