// Propagation and antenna layer: LOS probability models, received-power laws,
// small-scale fading samplers, the sectored antenna pattern, and the
// four-point directivity-gain PMFs for interfering and desired backhaul links.
#pragma once

#include <array>
#include <cmath>
#include <random>

#include "uavnet/geometry.hpp"

namespace uavnet {

struct NetworkParams;

namespace channel {

/// Sigmoid access-LOS model constants (dense urban defaults).
struct AccessLosParams {
    double a = 11.95;
    double b = 0.136;  // per degree
};

/// Exponential backhaul-LOS model constants.
struct BackhaulLosParams {
    double c = 1.0;
    double d = 0.106;  // per degree
    double e = 1.0;
};

/// Built-up area LOS model (reference model only; not part of the analytic
/// pipeline).
struct ItuLosParams {
    double alpha = 0.5;   // built-up area ratio
    double beta = 300.0;  // buildings per km^2
    double gamma = 20.0;  // building height scale, m
    double h_tx = 100.0;
    double h_rx = 1.5;
};

/// Sectored pattern: main-lobe gain within half the beamwidth of boresight,
/// side-lobe gain elsewhere. Gains linear, beamwidth in radians.
struct AntennaPattern {
    double g_max = 63.09573444801933;  // 18 dB
    double g_min = 0.6309573444801932; // -2 dB
    double theta = 0.3490658503988659; // 20 degrees
};

struct GainAtom {
    double gain = 1.0;
    double prob = 0.0;
};

/// Discrete PMF over the four directivity-gain products
/// {Gg_max*Gu_max, Gg_max*Gu_min, Gg_min*Gu_max, Gg_min*Gu_min}.
struct GainDistribution {
    std::array<GainAtom, 4> atoms;
};

/// Nakagami shape parameters for aerial LOS/NLOS links (integer by model
/// assumption).
struct FadingParams {
    int m_l = 3;
    int m_n = 2;
};

/// LOS probability of a UAV-UE access link at 3-D distance r, UAV altitude
/// h_u. Elevation handled in degrees; r = h_u maps to 90 degrees.
double los_prob_access(double r, double h_u, const AccessLosParams& p);

/// LOS probability of a BS-UAV backhaul link at horizontal distance r with
/// height difference delta_h. r = 0 maps to the 90-degree limit.
double los_prob_backhaul(double r, double delta_h, const BackhaulLosParams& p);

/// Built-up area LOS product formula at horizontal distance r; returns 1 when
/// the potential-blocker count is negative.
double los_prob_itu(double r, const ItuLosParams& p);

enum class LinkKind { bs_ue, uav_ue_los, uav_ue_nlos, bs_uav_los, bs_uav_nlos };

/// Received power for one link. `distance` is the horizontal separation for
/// bs_ue and bs_uav links (heights come from params) and the 3-D distance
/// for uav_ue links. Beam gain applies to backhaul links only (pass 1 for
/// access links).
double received_power(LinkKind link, double distance, double fading_gain, double beam_gain,
                      const NetworkParams& params);

/// Unit-mean Rayleigh power gain, Exp(1).
double sample_rayleigh_power(geometry::RngEngine& rng);

/// Unit-mean Nakagami-m power gain, Gamma(shape m, rate m). m = 1 coincides
/// with Rayleigh.
double sample_nakagami_power(int m, geometry::RngEngine& rng);

/// Sectored gain at boresight offset phi in [-pi, pi).
double antenna_gain(double phi, const AntennaPattern& pat);

/// Gain PMF of an interfering backhaul link under uniformly random steering
/// at both ends.
GainDistribution interferer_gain_pmf(const AntennaPattern& pat_g, const AntennaPattern& pat_u);

/// Gain PMF of the desired backhaul link under half-normal beam-steering
/// errors with scales sigma_g, sigma_u (radians). sigma = 0 collapses onto
/// the aligned gain Gg_max*Gu_max.
GainDistribution desired_gain_pmf(const AntennaPattern& pat_g, const AntennaPattern& pat_u,
                                  double sigma_g, double sigma_u);

}  // namespace channel
}  // namespace uavnet
