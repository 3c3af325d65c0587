#include "uavnet/params.hpp"

#include <stdexcept>

namespace uavnet {

void NetworkParams::validate() const {
    geom.validate();
    if (!(p_g > 0.0) || !(p_b > 0.0) || !(p_u > 0.0))
        throw std::invalid_argument("params: transmit powers must be > 0");
    if (!(eta_g > 2.0)) throw std::invalid_argument("params: eta_g must be > 2");
    if (!(eta_l > 2.0) || !(eta_n > 2.0))
        throw std::invalid_argument("params: eta_l and eta_n must be > 2");
    if (!(c_l > 0.0) || !(c_n > 0.0)) throw std::invalid_argument("params: intercepts must be > 0");
    if (fading.m_l < 1 || fading.m_n < 1)
        throw std::invalid_argument("params: Nakagami shapes must be integers >= 1");
    if (!(access_los.a > 0.0) || !(access_los.b > 0.0))
        throw std::invalid_argument("params: access LOS constants must be > 0");
    if (!(backhaul_los.c > 0.0) || !(backhaul_los.d > 0.0))
        throw std::invalid_argument("params: backhaul LOS constants must be > 0");
    if (backhaul_los.e < backhaul_los.c * std::exp(-backhaul_los.d * 90.0))
        throw std::invalid_argument("params: backhaul LOS must be nonnegative at zenith");
    for (const auto* ant : {&ant_bs, &ant_uav}) {
        if (!(ant->g_max > ant->g_min) || !(ant->g_min > 0.0))
            throw std::invalid_argument("params: antenna gains require g_max > g_min > 0");
        if (!(ant->theta > 0.0) || ant->theta > 2.0 * 3.141592653589793)
            throw std::invalid_argument("params: beamwidth out of range");
    }
    if (sigma_g < 0.0 || sigma_u < 0.0)
        throw std::invalid_argument("params: misalignment scales must be >= 0");
    if (!(noise_b > 0.0)) throw std::invalid_argument("params: noise power must be > 0");
    if (!(tau_a > 0.0) || !(tau_b > 0.0)) throw std::invalid_argument("params: thresholds must be > 0");
}

}  // namespace uavnet
