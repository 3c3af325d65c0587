#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "uavnet/channel.hpp"
#include "uavnet/params.hpp"

using namespace uavnet;
namespace ch = uavnet::channel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("los_prob_access: zenith, 45 degrees, and far limit") {
    const ch::AccessLosParams p;  // a = 11.95, b = 0.136
    const double h = 100.0;
    CHECK(ch::los_prob_access(h, h, p) == doctest::Approx(0.99971).epsilon(1e-4));
    CHECK(ch::los_prob_access(h * std::sqrt(2.0), h, p) == doctest::Approx(0.8824).epsilon(1e-3));
    const double floor = 1.0 / (1.0 + p.a * std::exp(p.a * p.b));
    CHECK(ch::los_prob_access(1e9, h, p) == doctest::Approx(floor).epsilon(1e-6));
    CHECK_THROWS_AS(ch::los_prob_access(50.0, h, p), std::domain_error);
}

TEST_CASE("los_prob_access: in [0,1] and nonincreasing in distance") {
    const ch::AccessLosParams p;
    double prev = 1.1;
    for (double r = 100.0; r < 1e5; r *= 1.3) {
        const double v = ch::los_prob_access(r, 100.0, p);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("los_prob_backhaul: limits match the defaults") {
    const ch::BackhaulLosParams p;  // c = 1, d = 0.106, e = 1
    CHECK(ch::los_prob_backhaul(1e12, 75.0, p) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(ch::los_prob_backhaul(75.0, 75.0, p) ==
          doctest::Approx(1.0 - std::exp(-0.106 * 45.0)).epsilon(1e-9));
    CHECK(ch::los_prob_backhaul(0.0, 75.0, p) ==
          doctest::Approx(1.0 - std::exp(-0.106 * 90.0)).epsilon(1e-9));
}

TEST_CASE("los_prob_itu: empty product and symmetric-height collapse") {
    ch::ItuLosParams p;
    CHECK(ch::los_prob_itu(10.0, p) == 1.0);  // m < 0, no potential blockers

    // equal heights: every factor equals 1 - exp(-h^2 / (2 gamma^2))
    p.h_rx = p.h_tx;
    const double r = 500.0;
    const int m = static_cast<int>(std::floor(r * std::sqrt(p.alpha * p.beta) / 1000.0 - 1.0));
    const double factor = 1.0 - std::exp(-p.h_tx * p.h_tx / (2.0 * p.gamma * p.gamma));
    CHECK(ch::los_prob_itu(r, p) == doctest::Approx(std::pow(factor, m + 1)).epsilon(1e-12));
}

TEST_CASE("los_prob_itu: dense-urban value vs direct loop oracle") {
    const ch::ItuLosParams p;  // alpha .5, beta 300, gamma 20, 100 m -> 1.5 m
    const double r = 500.0;
    const int m = static_cast<int>(std::floor(r * std::sqrt(p.alpha * p.beta) / 1000.0 - 1.0));
    double oracle = 1.0;
    for (int n = 0; n <= m; ++n) {
        const double ray = p.h_tx - (n + 0.5) * (p.h_tx - p.h_rx) / (m + 1);
        oracle *= 1.0 - std::exp(-ray * ray / (2.0 * p.gamma * p.gamma));
    }
    CHECK(ch::los_prob_itu(r, p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("received_power: closed-form spot values") {
    const NetworkParams p;
    CHECK(ch::received_power(ch::LinkKind::bs_ue, 0.0, 1.0, 1.0, p) ==
          doctest::Approx(20.0 / (625.0 * 625.0)).epsilon(1e-12));
    CHECK(ch::received_power(ch::LinkKind::uav_ue_los, 1.0, 1.0, 1.0, p) == doctest::Approx(1.0));
    CHECK(ch::received_power(ch::LinkKind::bs_uav_los, 0.0, 1.0, 1.0, p) ==
          doctest::Approx(2.149e-11).epsilon(1e-3));
    CHECK_THROWS_AS(ch::received_power(ch::LinkKind::uav_ue_los, 0.0, 1.0, 1.0, p),
                    std::domain_error);
}

TEST_CASE("received_power: strictly decreasing in distance") {
    const NetworkParams p;
    for (auto link : {ch::LinkKind::bs_ue, ch::LinkKind::uav_ue_los, ch::LinkKind::uav_ue_nlos,
                      ch::LinkKind::bs_uav_los, ch::LinkKind::bs_uav_nlos}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double d = 10.0; d < 1e4; d *= 2.0) {
            const double v = ch::received_power(link, d, 1.0, 1.0, p);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("sample_fading: gamma moments and rayleigh equivalence") {
    auto rng = geometry::make_rng(5);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = ch::sample_nakagami_power(3, rng);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // Gamma(3, 1/3): mean 1, var 1/3
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt((1.0 / 3.0) / n));
    CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.02));

    // rayleigh median at ln 2
    int below = 0;
    for (int i = 0; i < n; ++i) below += ch::sample_rayleigh_power(rng) < std::numbers::ln2;
    CHECK(std::abs(below / static_cast<double>(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));

    // nakagami(1) has the exponential distribution: compare tail masses
    int tail = 0;
    for (int i = 0; i < n; ++i) tail += ch::sample_nakagami_power(1, rng) > 1.0;
    CHECK(std::abs(tail / static_cast<double>(n) - std::exp(-1.0)) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("antenna_gain: main lobe window and uniform-angle mass") {
    const ch::AntennaPattern pat;  // 20 degree beamwidth
    CHECK(ch::antenna_gain(0.0, pat) == pat.g_max);
    CHECK(ch::antenna_gain(kPi / 2.0, pat) == pat.g_min);
    CHECK(ch::antenna_gain(-kPi, pat) == pat.g_min);
    CHECK_THROWS_AS(ch::antenna_gain(kPi, pat), std::domain_error);

    auto rng = geometry::make_rng(17);
    std::uniform_real_distribution<double> uni(-kPi, kPi);
    const int n = 1000000;
    int main_lobe = 0;
    for (int i = 0; i < n; ++i) main_lobe += ch::antenna_gain(uni(rng), pat) == pat.g_max;
    const double expect = pat.theta / (2.0 * kPi);
    CHECK(std::abs(main_lobe / static_cast<double>(n) - expect) <
          3.0 * std::sqrt(expect * (1 - expect) / n));
}

TEST_CASE("interferer_gain_pmf: default and omnidirectional patterns") {
    const ch::AntennaPattern pat;
    const auto pmf = ch::interferer_gain_pmf(pat, pat);
    CHECK(pmf.atoms[0].prob == doctest::Approx(1.0 / 324.0).epsilon(1e-12));
    CHECK(pmf.atoms[3].prob == doctest::Approx(289.0 / 324.0).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& a : pmf.atoms) sum += a.prob;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    ch::AntennaPattern omni;
    omni.theta = 2.0 * kPi;
    const auto o = ch::interferer_gain_pmf(omni, omni);
    CHECK(o.atoms[0].prob == doctest::Approx(1.0));
    CHECK(o.atoms[1].prob == doctest::Approx(0.0));
}

TEST_CASE("interferer_gain_pmf: matches empirical antenna_gain frequencies") {
    const ch::AntennaPattern pat;
    const auto pmf = ch::interferer_gain_pmf(pat, pat);
    auto rng = geometry::make_rng(23);
    std::uniform_real_distribution<double> uni(-kPi, kPi);
    const int n = 1000000;
    // atoms 1 and 2 share the same product gain for identical patterns, so
    // compare masses per distinct gain value
    std::map<double, double> expected;
    for (const auto& a : pmf.atoms) expected[a.gain] += a.prob;
    std::map<double, int> counts;
    for (int i = 0; i < n; ++i) {
        const double g = ch::antenna_gain(uni(rng), pat) * ch::antenna_gain(uni(rng), pat);
        counts[g] += 1;
    }
    for (const auto& [gain, pk] : expected) {
        const double freq = counts.count(gain) ? counts[gain] / static_cast<double>(n) : 0.0;
        CHECK(std::abs(freq - pk) <= 3.0 * std::sqrt(pk * (1 - pk) / n) + 1e-9);
    }
}

TEST_CASE("desired_gain_pmf: aligned, misaligned, and saturated limits") {
    const ch::AntennaPattern pat;
    const auto aligned = ch::desired_gain_pmf(pat, pat, 0.0, 0.0);
    CHECK(aligned.atoms[0].prob == 1.0);
    CHECK(aligned.atoms[0].gain == doctest::Approx(pat.g_max * pat.g_max));

    const auto mis = ch::desired_gain_pmf(pat, pat, 0.2, 0.2);
    const double f = std::erf(0.5 * pat.theta / (0.2 * std::sqrt(2.0)));
    CHECK(mis.atoms[0].prob == doctest::Approx(f * f).epsilon(1e-12));
    CHECK(mis.atoms[3].prob == doctest::Approx((1 - f) * (1 - f)).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& a : mis.atoms) sum += a.prob;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    const auto sat = ch::desired_gain_pmf(pat, pat, 1e9, 1e9);
    CHECK(sat.atoms[3].prob == doctest::Approx(1.0).epsilon(1e-6));
}
