#include "uavnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "uavnet/channel.hpp"

namespace uavnet::simulator {

namespace {
constexpr double kPi = std::numbers::pi;

double sq(double v) { return v * v; }

/// Draws a gain index from a four-atom PMF.
int draw_gain_index(const channel::GainDistribution& pmf, double u) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        acc += pmf.atoms[k].prob;
        if (u < acc) return k;
    }
    return 3;
}
}  // namespace

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::unaware: return "unaware";
        case Scheme::aware: return "aware";
        case Scheme::instantaneous: return "instantaneous";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "unaware") return Scheme::unaware;
    if (name == "aware") return Scheme::aware;
    if (name == "instantaneous") return Scheme::instantaneous;
    throw std::invalid_argument("unknown scheme: " + name);
}

void Breakdown::merge(const Breakdown& o) {
    assoc_bs += o.assoc_bs;
    assoc_uav_los += o.assoc_uav_los;
    assoc_uav_nlos += o.assoc_uav_nlos;
    covered_bs += o.covered_bs;
    covered_uav_los += o.covered_uav_los;
    covered_uav_nlos += o.covered_uav_nlos;
    service_failures += o.service_failures;
    failures_uav_los += o.failures_uav_los;
    failures_uav_nlos += o.failures_uav_nlos;
    serving_backhaul_ok += o.serving_backhaul_ok;
    probe_backhaul_ok += o.probe_backhaul_ok;
    probe_backhaul_n += o.probe_backhaul_n;
    reassociations += o.reassociations;
}

NetworkRealization drop_realization(const NetworkParams& p, geometry::RngEngine& rng) {
    NetworkRealization real;
    real.drop = geometry::sample_bs_ppp(p.geom, rng);
    auto uavs = geometry::sample_uav_bpp(p.geom, rng);
    real.drop.uav_positions = std::move(uavs.uav_positions);

    const std::size_t n_bs = real.drop.bs_positions.size();
    const std::size_t n_uav = real.drop.uav_positions.size();
    for (std::uint32_t i = 0; i < n_bs; ++i)
        if (real.drop.bs_backhaul_flag[i]) real.backhaul_bs.push_back(i);

    const geometry::Vec3 ue{p.geom.v_0, 0.0, 0.0};

    // access-link LOS classes and fading
    real.uav_access_los.resize(n_uav);
    real.uav_access_fading.resize(n_uav);
    for (std::size_t j = 0; j < n_uav; ++j) {
        const auto& u = real.drop.uav_positions[j];
        const double z = std::sqrt(sq(u.x - ue.x) + sq(u.y - ue.y) + sq(u.z));
        const double k_los = channel::los_prob_access(std::max(z, p.geom.h_u), p.geom.h_u, p.access_los);
        real.uav_access_los[j] = geometry::uniform01(rng) < k_los ? 1 : 0;
        real.uav_access_fading[j] =
            channel::sample_nakagami_power(p.m_fading(real.uav_access_los[j] ? Los::los : Los::nlos), rng);
    }
    real.bs_access_fading.resize(n_bs);
    for (std::size_t i = 0; i < n_bs; ++i) real.bs_access_fading[i] = channel::sample_rayleigh_power(rng);

    // backhaul-link LOS classes, fading and beam gains (enabled BSs only)
    const std::size_t n_en = real.backhaul_bs.size();
    const double dh = p.geom.delta_h();
    real.backhaul_los.resize(n_uav * n_en);
    real.backhaul_fading.resize(n_uav * n_en);
    real.backhaul_gain.resize(n_uav * n_en);
    const auto interferer_pmf = channel::interferer_gain_pmf(p.ant_bs, p.ant_uav);
    for (std::size_t j = 0; j < n_uav; ++j) {
        const auto& u = real.drop.uav_positions[j];
        for (std::size_t i = 0; i < n_en; ++i) {
            const auto& b = real.drop.bs_positions[real.backhaul_bs[i]];
            const double r = std::sqrt(sq(b.x - u.x) + sq(b.y - u.y));
            const double k_los = channel::los_prob_backhaul(r, dh, p.backhaul_los);
            const std::size_t idx = j * n_en + i;
            real.backhaul_los[idx] = geometry::uniform01(rng) < k_los ? 1 : 0;
            real.backhaul_fading[idx] =
                channel::sample_nakagami_power(p.m_fading(real.backhaul_los[idx] ? Los::los : Los::nlos), rng);
            real.backhaul_gain[idx] =
                interferer_pmf.atoms[draw_gain_index(interferer_pmf, geometry::uniform01(rng))].gain;
        }
    }
    const auto desired_pmf = channel::desired_gain_pmf(p.ant_bs, p.ant_uav, p.sigma_g, p.sigma_u);
    real.uav_desired_gain.resize(n_uav);
    for (std::size_t j = 0; j < n_uav; ++j)
        real.uav_desired_gain[j] =
            desired_pmf.atoms[draw_gain_index(desired_pmf, geometry::uniform01(rng))].gain;
    return real;
}

std::vector<BackhaulEval> evaluate_backhaul(const NetworkRealization& real, const NetworkParams& p) {
    const std::size_t n_uav = real.drop.uav_positions.size();
    const std::size_t n_en = real.backhaul_bs.size();
    if (n_uav == 0) return {};
    if (n_en == 0) throw NoBackhaulBS();

    const double dh2 = sq(p.geom.delta_h());
    std::vector<BackhaulEval> out(n_uav);
    std::vector<double> avg_rx(n_en);
    for (std::size_t j = 0; j < n_uav; ++j) {
        const auto& u = real.drop.uav_positions[j];
        // min path loss == max fading-free received power at common P_b
        std::size_t best = 0;
        double best_rx = -1.0;
        for (std::size_t i = 0; i < n_en; ++i) {
            const auto& b = real.drop.bs_positions[real.backhaul_bs[i]];
            const double d2 = sq(b.x - u.x) + sq(b.y - u.y) + dh2;
            const std::size_t idx = j * n_en + i;
            const bool los = real.backhaul_los[idx];
            const double rx = (los ? p.c_l : p.c_n) * std::pow(d2, -(los ? p.eta_l : p.eta_n) / 2.0);
            avg_rx[i] = rx;
            if (rx > best_rx) {
                best_rx = rx;
                best = i;
            }
        }
        double interference = 0.0;
        for (std::size_t i = 0; i < n_en; ++i) {
            if (i == best) continue;
            const std::size_t idx = j * n_en + i;
            interference += p.p_b * real.backhaul_gain[idx] * avg_rx[i] * real.backhaul_fading[idx];
        }
        const std::size_t sidx = j * n_en + best;
        const double desired = p.p_b * real.uav_desired_gain[j] * best_rx * real.backhaul_fading[sidx];
        out[j].serving_bs = static_cast<std::uint32_t>(best);
        out[j].sinr = desired / (p.noise_b + interference);
        out[j].ok = out[j].sinr >= p.tau_b;
    }
    return out;
}

namespace {

struct AccessPowers {
    std::vector<double> bs;   // fading-free average received power per BS
    std::vector<double> uav;  // per UAV with its drawn LOS class
    std::size_t best_bs = 0;
    std::size_t best_uav = 0;
    bool uav_served = false;
};

AccessPowers access_association(const NetworkRealization& real, const NetworkParams& p) {
    AccessPowers a;
    const geometry::Vec3 ue{p.geom.v_0, 0.0, 0.0};
    const std::size_t n_bs = real.drop.bs_positions.size();
    const std::size_t n_uav = real.drop.uav_positions.size();
    a.bs.resize(n_bs);
    a.uav.resize(n_uav);
    double best_bs_pw = -1.0;
    for (std::size_t i = 0; i < n_bs; ++i) {
        const auto& b = real.drop.bs_positions[i];
        const double d2 = sq(b.x - ue.x) + sq(b.y - ue.y) + sq(b.z);
        a.bs[i] = p.p_g * std::pow(d2, -p.eta_g / 2.0);
        if (a.bs[i] > best_bs_pw) {
            best_bs_pw = a.bs[i];
            a.best_bs = i;
        }
    }
    double best_uav_pw = -1.0;
    for (std::size_t j = 0; j < n_uav; ++j) {
        const auto& u = real.drop.uav_positions[j];
        const double z = std::sqrt(sq(u.x - ue.x) + sq(u.y - ue.y) + sq(u.z));
        const double eta = real.uav_access_los[j] ? p.eta_l : p.eta_n;
        a.uav[j] = p.p_u * std::pow(z, -eta);
        if (a.uav[j] > best_uav_pw) {
            best_uav_pw = a.uav[j];
            a.best_uav = j;
        }
    }
    // BS wins exact ties
    a.uav_served = n_uav > 0 && (n_bs == 0 || best_uav_pw > best_bs_pw);
    return a;
}

TrialOutcome evaluate_outcome(const NetworkRealization& real,
                              const std::vector<BackhaulEval>& backhaul, const AccessPowers& assoc,
                              const NetworkParams& p, Scheme scheme) {
    const std::size_t n_bs = real.drop.bs_positions.size();
    const std::size_t n_uav = real.drop.uav_positions.size();

    TrialOutcome out;
    out.scheme = scheme;

    const auto uav_interferes = [&](std::size_t j) {
        return scheme == Scheme::unaware || backhaul[j].ok;
    };

    double bs_sum_all = 0.0;
    for (std::size_t i = 0; i < n_bs; ++i) bs_sum_all += assoc.bs[i] * real.bs_access_fading[i];
    double uav_sum = 0.0;
    for (std::size_t j = 0; j < n_uav; ++j)
        if (uav_interferes(j)) uav_sum += assoc.uav[j] * real.uav_access_fading[j];

    bool serve_uav = assoc.uav_served;
    std::size_t serving_bs = assoc.best_bs;
    if (serve_uav) {
        const std::size_t j = assoc.best_uav;
        out.association = real.uav_access_los[j] ? AssocClass::uav_los : AssocClass::uav_nlos;
        out.backhaul_ok = backhaul[j].ok;
        if (scheme == Scheme::aware && !out.backhaul_ok) {
            out.service_failure = true;
            out.covered = false;
            return out;
        }
        if (scheme == Scheme::instantaneous && !out.backhaul_ok) {
            // fall back to the strongest BS and evaluate as BS-served
            serve_uav = false;
            out.reassociated = true;
            out.association = AssocClass::bs;
        }
    } else {
        out.association = AssocClass::bs;
    }

    const geometry::Vec3 ue{p.geom.v_0, 0.0, 0.0};
    if (serve_uav) {
        const std::size_t j = assoc.best_uav;
        const auto& u = real.drop.uav_positions[j];
        out.serving_distance = std::sqrt(sq(u.x - ue.x) + sq(u.y - ue.y) + sq(u.z));
        const double desired = assoc.uav[j] * real.uav_access_fading[j];
        double interference = bs_sum_all + uav_sum;
        if (uav_interferes(j)) interference -= desired;
        const bool sir_ok = interference > 0.0 ? desired / interference >= p.tau_a : true;
        out.covered = scheme == Scheme::unaware ? (sir_ok && out.backhaul_ok) : sir_ok;
    } else {
        if (n_bs == 0) {
            out.covered = false;
            return out;
        }
        const auto& b = real.drop.bs_positions[serving_bs];
        out.serving_distance = std::sqrt(sq(b.x - ue.x) + sq(b.y - ue.y));
        const double desired = assoc.bs[serving_bs] * real.bs_access_fading[serving_bs];
        const double interference = bs_sum_all - desired + uav_sum;
        out.covered = interference > 0.0 ? desired / interference >= p.tau_a : true;
    }
    return out;
}

}  // namespace

TrialOutcome run_trial(const NetworkParams& p, Scheme scheme, geometry::RngEngine& rng) {
    const NetworkRealization real = drop_realization(p, rng);
    const std::vector<BackhaulEval> backhaul = evaluate_backhaul(real, p);
    const AccessPowers assoc = access_association(real, p);
    return evaluate_outcome(real, backhaul, assoc, p, scheme);
}

TrialOutcome evaluate_realization(const NetworkRealization& real, const NetworkParams& p,
                                  Scheme scheme) {
    return evaluate_realization(real, evaluate_backhaul(real, p), p, scheme);
}

TrialOutcome evaluate_realization(const NetworkRealization& real,
                                  const std::vector<BackhaulEval>& backhaul,
                                  const NetworkParams& p, Scheme scheme) {
    const AccessPowers assoc = access_association(real, p);
    return evaluate_outcome(real, backhaul, assoc, p, scheme);
}

namespace {

void tally(Breakdown& acc, const TrialOutcome& out, bool has_uavs, bool uav0_backhaul_ok) {
    if (has_uavs) {
        acc.probe_backhaul_n += 1;
        acc.probe_backhaul_ok += uav0_backhaul_ok ? 1 : 0;
    }
    switch (out.association) {
        case AssocClass::bs:
            acc.assoc_bs += 1;
            acc.covered_bs += out.covered ? 1 : 0;
            break;
        case AssocClass::uav_los:
            acc.assoc_uav_los += 1;
            acc.covered_uav_los += out.covered ? 1 : 0;
            acc.serving_backhaul_ok += out.backhaul_ok ? 1 : 0;
            acc.failures_uav_los += out.service_failure ? 1 : 0;
            break;
        case AssocClass::uav_nlos:
            acc.assoc_uav_nlos += 1;
            acc.covered_uav_nlos += out.covered ? 1 : 0;
            acc.serving_backhaul_ok += out.backhaul_ok ? 1 : 0;
            acc.failures_uav_nlos += out.service_failure ? 1 : 0;
            break;
    }
    acc.service_failures += out.service_failure ? 1 : 0;
    acc.reassociations += out.reassociated ? 1 : 0;
}

std::vector<Breakdown> run_range(const NetworkParams& p, const std::vector<Scheme>& schemes,
                                 std::uint64_t begin, std::uint64_t end, std::uint64_t seed) {
    std::vector<Breakdown> acc(schemes.size());
    for (std::uint64_t i = begin; i < end; ++i) {
        auto rng = geometry::make_trial_rng(seed, i);
        const NetworkRealization real = drop_realization(p, rng);
        const auto backhaul = evaluate_backhaul(real, p);
        const AccessPowers assoc = access_association(real, p);
        const bool has_uavs = !real.drop.uav_positions.empty();
        const bool uav0_ok = has_uavs && backhaul[0].ok;
        for (std::size_t s = 0; s < schemes.size(); ++s)
            tally(acc[s], evaluate_outcome(real, backhaul, assoc, p, schemes[s]), has_uavs, uav0_ok);
    }
    return acc;
}

}  // namespace

std::vector<CoverageEstimate> estimate_many(const NetworkParams& p,
                                            const std::vector<Scheme>& schemes,
                                            std::uint64_t n_trials, std::uint64_t seed,
                                            int workers) {
    if (n_trials < 100) throw std::invalid_argument("estimate: n_trials must be >= 100");
    if (schemes.empty()) throw std::invalid_argument("estimate: no schemes requested");
    p.validate();
    std::vector<Breakdown> totals(schemes.size());
    if (workers <= 1) {
        totals = run_range(p, schemes, 0, n_trials, seed);
    } else {
        const std::uint64_t w = static_cast<std::uint64_t>(workers);
        std::vector<std::vector<Breakdown>> parts(w);
        std::vector<std::exception_ptr> errors(w);
        std::vector<std::thread> threads;
        for (std::uint64_t k = 0; k < w; ++k) {
            const std::uint64_t begin = n_trials * k / w;
            const std::uint64_t end = n_trials * (k + 1) / w;
            threads.emplace_back([&, k, begin, end] {
                try {
                    parts[k] = run_range(p, schemes, begin, end, seed);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (const auto& part : parts)
            for (std::size_t s = 0; s < schemes.size(); ++s) totals[s].merge(part[s]);
    }

    std::vector<CoverageEstimate> out(schemes.size());
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        out[s].n_trials = n_trials;
        out[s].breakdown = totals[s];
        out[s].estimate = static_cast<double>(totals[s].covered()) / n_trials;
        const auto ci = stats::wilson_interval(totals[s].covered(), n_trials);
        out[s].ci_low = ci.low;
        out[s].ci_high = ci.high;
    }
    return out;
}

CoverageEstimate estimate(const NetworkParams& p, Scheme scheme, std::uint64_t n_trials,
                          std::uint64_t seed, int workers) {
    return estimate_many(p, {scheme}, n_trials, seed, workers).front();
}

McLaplaceResult mc_laplace(const NetworkParams& p, LaplaceTarget which, double s,
                           const LaplaceConditioning& cond, int n_drops, std::uint64_t seed) {
    if (n_drops < 1000) throw std::invalid_argument("mc_laplace: n_drops must be >= 1000");
    if (s < 0.0) throw std::domain_error("mc_laplace: s must be >= 0");
    auto rng = geometry::make_rng(seed);
    const geometry::Vec3 ue{p.geom.v_0, 0.0, 0.0};

    // draws one conditioned UAV interference contribution by rejection
    const auto draw_uav_term = [&]() {
        for (int attempts = 0; attempts < 1000000; ++attempts) {
            const double r = p.geom.r_u * std::sqrt(geometry::uniform01(rng));
            const double phi = 2.0 * kPi * geometry::uniform01(rng);
            const double x = r * std::cos(phi), y = r * std::sin(phi);
            const double w = std::sqrt(sq(x - ue.x) + sq(y - ue.y) + sq(p.geom.h_u));
            const double k_los =
                channel::los_prob_access(std::max(w, p.geom.h_u), p.geom.h_u, p.access_los);
            const bool los = geometry::uniform01(rng) < k_los;
            if (los && w < cond.lower_l) continue;
            if (!los && w < cond.lower_n) continue;
            const double fading = channel::sample_nakagami_power(
                los ? p.fading.m_l : p.fading.m_n, rng);
            return p.p_u * std::pow(w, -(los ? p.eta_l : p.eta_n)) * fading;
        }
        throw std::runtime_error("mc_laplace: rejection sampling failed (conditioning too tight)");
    };

    double sum = 0.0, sum_sq = 0.0;
    for (int d = 0; d < n_drops; ++d) {
        double interference = 0.0;
        switch (which) {
            case LaplaceTarget::bs_interf: {
                const double r0 = cond.x_lower, r1 = p.geom.sim_radius;
                if (r1 > r0) {
                    const double mean = p.geom.lambda_g * kPi * (r1 * r1 - r0 * r0);
                    std::poisson_distribution<int> count(mean);
                    const int n = count(rng);
                    for (int i = 0; i < n; ++i) {
                        const double rr =
                            std::sqrt(r0 * r0 + geometry::uniform01(rng) * (r1 * r1 - r0 * r0));
                        interference += p.p_g *
                                        std::pow(rr * rr + sq(p.geom.h_g), -p.eta_g / 2.0) *
                                        channel::sample_rayleigh_power(rng);
                    }
                }
                break;
            }
            case LaplaceTarget::uav_interf: {
                for (int j = 0; j < p.geom.n_u; ++j) interference += draw_uav_term();
                break;
            }
            case LaplaceTarget::uav_successful_interf: {
                std::binomial_distribution<int> n_success(p.geom.n_u, cond.s_success);
                const int n = n_success(rng);
                for (int j = 0; j < n; ++j) interference += draw_uav_term();
                break;
            }
        }
        const double v = std::exp(-s * interference);
        sum += v;
        sum_sq += v * v;
    }
    McLaplaceResult res;
    res.n_drops = n_drops;
    res.estimate = sum / n_drops;
    const double var = std::max(0.0, sum_sq / n_drops - res.estimate * res.estimate);
    const double half = 1.959963984540054 * std::sqrt(var / n_drops);
    res.ci_low = res.estimate - half;
    res.ci_high = res.estimate + half;
    return res;
}

}  // namespace uavnet::simulator
