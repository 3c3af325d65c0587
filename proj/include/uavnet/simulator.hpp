// Exact Monte-Carlo reference: full network drops, per-UAV backhaul SINR,
// the three association/transmission schemes, and probability estimators
// with confidence intervals.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/params.hpp"
#include "uavnet/stats.hpp"

namespace uavnet::simulator {

enum class Scheme { unaware, aware, instantaneous };

enum class AssocClass { bs, uav_los, uav_nlos };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// One sampled drop with every random quantity pre-drawn, so that scheme
/// evaluation is deterministic given the realization.
struct NetworkRealization {
    geometry::PointDrop drop;
    std::vector<std::uint32_t> backhaul_bs;     // indices of backhaul-enabled BSs
    std::vector<std::uint8_t> uav_access_los;   // per UAV
    std::vector<double> uav_access_fading;      // per UAV, Nakagami by LOS class
    std::vector<double> bs_access_fading;       // per BS, Exp(1)
    // per (uav, enabled-BS) pair, row-major [uav * n_enabled + i]
    std::vector<std::uint8_t> backhaul_los;
    std::vector<double> backhaul_fading;
    std::vector<double> backhaul_gain;          // interferer beam gains
    std::vector<double> uav_desired_gain;       // per UAV, serving-link gain
};

struct BackhaulEval {
    std::uint32_t serving_bs = 0;  // index into backhaul_bs
    double sinr = 0.0;
    bool ok = false;
};

struct TrialOutcome {
    AssocClass association = AssocClass::bs;
    bool backhaul_ok = false;  // serving UAV's backhaul, when UAV-associated
    bool covered = false;
    bool service_failure = false;
    Scheme scheme = Scheme::unaware;
    bool reassociated = false;      // instantaneous scheme fell back to a BS
    double serving_distance = 0.0;  // horizontal for BSs, 3-D for UAVs
};

/// Per-class and event counts accumulated over trials.
struct Breakdown {
    std::uint64_t assoc_bs = 0, assoc_uav_los = 0, assoc_uav_nlos = 0;
    std::uint64_t covered_bs = 0, covered_uav_los = 0, covered_uav_nlos = 0;
    std::uint64_t service_failures = 0;
    std::uint64_t failures_uav_los = 0, failures_uav_nlos = 0;  // per-class split
    // UAV-associated trials whose serving backhaul allowed a transmission
    std::uint64_t transmitting_uav_los() const { return assoc_uav_los - failures_uav_los; }
    std::uint64_t transmitting_uav_nlos() const { return assoc_uav_nlos - failures_uav_nlos; }
    std::uint64_t serving_backhaul_ok = 0;   // over UAV-associated trials
    std::uint64_t probe_backhaul_ok = 0;     // UAV 0's backhaul, one sample per trial
    std::uint64_t probe_backhaul_n = 0;
    std::uint64_t reassociations = 0;

    std::uint64_t total() const { return assoc_bs + assoc_uav_los + assoc_uav_nlos; }
    std::uint64_t covered() const { return covered_bs + covered_uav_los + covered_uav_nlos; }
    void merge(const Breakdown& o);
};

struct CoverageEstimate {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t n_trials = 0;
    Breakdown breakdown;
};

/// Thrown when the backhaul-enabled BS set of a drop is empty.
class NoBackhaulBS : public std::runtime_error {
public:
    NoBackhaulBS() : std::runtime_error("no backhaul-enabled BS in realization") {}
};

/// Samples one full realization: BS PPP with backhaul flags, UAV BPP,
/// per-link LOS classes, fading gains and beam gains. Draw order is fixed,
/// so equal seeds give bit-identical realizations.
NetworkRealization drop_realization(const NetworkParams& p, geometry::RngEngine& rng);

/// Minimum-path-loss backhaul association and SINR per UAV.
std::vector<BackhaulEval> evaluate_backhaul(const NetworkRealization& real, const NetworkParams& p);

/// Association by maximum average received power, then scheme-specific
/// coverage evaluation. BS wins exact power ties (candidates ordered BSs
/// before UAVs, lowest index first).
TrialOutcome run_trial(const NetworkParams& p, Scheme scheme, geometry::RngEngine& rng);

/// Deterministic evaluation of an existing realization (all randomness lives
/// in the realization, so schemes can be compared on matched drops).
TrialOutcome evaluate_realization(const NetworkRealization& real, const NetworkParams& p,
                                  Scheme scheme);

/// As above with the backhaul evaluation precomputed, for paired-scheme runs.
TrialOutcome evaluate_realization(const NetworkRealization& real,
                                  const std::vector<BackhaulEval>& backhaul,
                                  const NetworkParams& p, Scheme scheme);

/// Runs n_trials independent trials with per-trial derived seeds and
/// aggregates a Wilson-interval coverage estimate. Results are independent
/// of the worker count.
CoverageEstimate estimate(const NetworkParams& p, Scheme scheme, std::uint64_t n_trials,
                          std::uint64_t seed, int workers = 1);

/// Estimates several schemes from shared realizations (one drop and one
/// backhaul evaluation per trial); same per-scheme distribution as estimate.
std::vector<CoverageEstimate> estimate_many(const NetworkParams& p,
                                            const std::vector<Scheme>& schemes,
                                            std::uint64_t n_trials, std::uint64_t seed,
                                            int workers = 1);

enum class LaplaceTarget { bs_interf, uav_interf, uav_successful_interf };

/// Conditioning for mc_laplace; fields are read per target.
struct LaplaceConditioning {
    double x_lower = 0.0;    // bs_interf: serving-BS horizontal distance
    double lower_l = 0.0;    // uav targets: minimum 3-D distance of LOS UAVs
    double lower_n = 0.0;    // minimum 3-D distance of NLOS UAVs
    double s_success = 1.0;  // uav_successful_interf: per-UAV backhaul probability
};

struct McLaplaceResult {
    double estimate = 1.0;
    double ci_low = 1.0;
    double ci_high = 1.0;
    int n_drops = 0;
};

/// Monte-Carlo estimate of E[exp(-s I)] for the requested interference term
/// under the stated conditioning (exclusion radii by per-point rejection).
McLaplaceResult mc_laplace(const NetworkParams& p, LaplaceTarget which, double s,
                           const LaplaceConditioning& cond, int n_drops, std::uint64_t seed);

}  // namespace uavnet::simulator
