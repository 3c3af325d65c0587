// Spatial model: deployment geometry, PPP/BPP samplers, the UAV-UE distance
// PDF, and the exclusion-region mappings implied by max-average-power
// association.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace uavnet {

struct NetworkParams;  // params.hpp

namespace geometry {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Scenario geometry. BSs form a PPP of density lambda_g at height h_g on a
/// disk of radius sim_radius; the N_u UAVs form a BPP at altitude h_u on a
/// disk of radius r_u centered above the origin. The reference UE sits at
/// (v_0, 0, 0).
struct DeploymentGeometry {
    double lambda_g = 10e-6;  // BS per m^2
    double h_g = 25.0;        // m
    double delta_b = 1.0;     // fraction of backhaul-enabled BSs
    int n_u = 10;
    double h_u = 100.0;       // m
    double r_u = 1000.0;      // m
    double v_0 = 0.0;         // m, UE offset from disk center
    double sim_radius = 5000.0;

    void validate() const;

    double lambda_b() const { return delta_b * lambda_g; }
    double delta_h() const { return h_u > h_g ? h_u - h_g : h_g - h_u; }
    double w_m() const;    // sqrt((r_u - v_0)^2 + h_u^2)
    double w_p() const;    // sqrt((r_u + v_0)^2 + h_u^2)
};

/// One sampled drop. BS and UAV parts are filled by their respective
/// samplers; simulator code merges them.
struct PointDrop {
    std::vector<Vec3> bs_positions;
    std::vector<std::uint8_t> bs_backhaul_flag;
    std::vector<Vec3> uav_positions;
};

using RngEngine = std::mt19937_64;

/// Uniform draw on [0,1) from the engine's top 53 bits; used instead of the
/// standard distribution so streams are identical across standard libraries.
inline double uniform01(RngEngine& rng) { return (rng() >> 11) * 0x1.0p-53; }

/// Engine seeded through a SplitMix64 expansion so nearby seeds decorrelate.
RngEngine make_rng(std::uint64_t seed);

/// Per-trial stream: hash(seed, index). Trials seeded this way are invariant
/// under any partitioning of indices across workers.
RngEngine make_trial_rng(std::uint64_t seed, std::uint64_t trial_index);

/// Samples the BS PPP part: Poisson(lambda_g * pi * sim_radius^2) points
/// uniform on the simulation disk at height h_g, each flagged
/// backhaul-enabled with probability delta_b.
PointDrop sample_bs_ppp(const DeploymentGeometry& geom, RngEngine& rng);

/// Samples the UAV BPP part: exactly n_u points i.i.d. uniform on the UAV
/// disk at altitude h_u.
PointDrop sample_uav_bpp(const DeploymentGeometry& geom, RngEngine& rng);

/// PDF of the distance from an arbitrary UAV of the BPP to the UE.
/// Two branches: 2w/r_u^2 on [h_u, w_m], and for offset UEs an arccos branch
/// on [w_m, w_p]. Zero outside the support.
double distance_pdf_fw(double w, const DeploymentGeometry& geom);

/// Exclusion-region mappings of the association rule. Naming: e_gl is the
/// minimum 3-D distance of LOS UAVs when a BS at horizontal distance x
/// serves; e_ul the minimum horizontal BS distance when a LOS UAV at 3-D
/// distance x serves; e_ln the minimum NLOS-UAV distance when a LOS UAV
/// serves; and symmetrically for the others.
enum class ExclusionKind { e_gl, e_gn, e_ul, e_un, e_ln, e_nl };

/// Evaluates the exclusion mapping; e_ul/e_un clamp to 0 where no horizontal
/// distance satisfies the power ordering (the serving UAV beats every BS).
double exclusion_region(ExclusionKind kind, double x, const NetworkParams& params);

}  // namespace geometry
}  // namespace uavnet
