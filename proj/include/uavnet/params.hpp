// Complete scenario parameterization. All values are linear / SI; dB-valued
// inputs are converted once at config load.
#pragma once

#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"

namespace uavnet {

enum class Los { los, nlos };

inline Los other(Los v) { return v == Los::los ? Los::nlos : Los::los; }

struct NetworkParams {
    geometry::DeploymentGeometry geom;

    double p_g = 20.0;  // BS access transmit power, W
    double p_b = 10.0;  // BS backhaul transmit power, W
    double p_u = 1.0;   // UAV transmit power, W

    double eta_g = 4.0;
    double eta_l = 2.5;
    double eta_n = 4.0;

    double c_l = 1.0471285480508996e-07;  // -69.8 dB
    double c_n = 1.0471285480508996e-07;

    channel::FadingParams fading;
    channel::AccessLosParams access_los;
    channel::BackhaulLosParams backhaul_los;
    channel::AntennaPattern ant_bs;
    channel::AntennaPattern ant_uav;

    double sigma_g = 0.0;  // beam-steering error scale, radians
    double sigma_u = 0.0;

    double noise_b = 4e-11;  // backhaul noise power sigma_b^2, W
    double tau_a = 1.0;      // access SIR threshold, linear (0 dB)
    double tau_b = 10.0;     // backhaul SINR threshold, linear (10 dB)

    void validate() const;

    double eta_uav(Los zeta) const { return zeta == Los::los ? eta_l : eta_n; }
    double c_backhaul(Los xi) const { return xi == Los::los ? c_l : c_n; }
    int m_fading(Los v) const { return v == Los::los ? fading.m_l : fading.m_n; }

    /// Baseline parameter set used throughout the bundled configs and tests.
    static NetworkParams defaults() { return NetworkParams{}; }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace uavnet
