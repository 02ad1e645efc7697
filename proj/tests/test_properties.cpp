// randomized-input property checks across modules (fixed master seed)
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uddmag/bath.hpp"
#include "uddmag/coherence.hpp"
#include "uddmag/constants.hpp"
#include "uddmag/montecarlo.hpp"
#include "uddmag/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace uddmag;

namespace {
double ge() { return default_constants().gamma_e; }

PulseSequence random_sequence(std::mt19937_64& rng, int max_pulses = 30) {
    std::uniform_int_distribution<int> count(0, max_pulses);
    std::uniform_real_distribution<double> uni(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    const double tau = std::pow(10.0, scale(rng));
    const int p = count(rng);
    std::vector<double> xs(p);
    for (auto& x : xs) x = uni(rng);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (auto& x : xs) x *= tau;
    return PulseSequence{tau, xs, "custom"};
}
}  // namespace

TEST_CASE("lambda and residual routes agree on random sequences") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> order(0, 12);
    for (int i = 0; i < 400; ++i) {
        const auto seq = random_sequence(rng);
        const int j = order(rng);
        const double l = lambda_factor(seq, j);
        const double r = moment_residual(seq, j);
        CHECK(std::abs(l - r) <= 1e-10 * std::max(1.0, std::abs(l)));
        CHECK(std::abs(l) <= 1.0 + 1e-12);
    }
}

TEST_CASE("udd symmetry and suppression on random orders") {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> count(1, 40);
    std::uniform_real_distribution<double> tau_dist(1e-4, 10.0);
    for (int i = 0; i < 300; ++i) {
        const int n = count(rng);
        const double tau = tau_dist(rng);
        const auto seq = udd(n, tau);
        for (int k = 1; k <= n; ++k)
            CHECK(seq.pulse_times[k - 1] + seq.pulse_times[n - k] == tau);
        std::uniform_int_distribution<int> below(0, n - 1);
        CHECK(std::abs(moment_residual(seq, below(rng))) <= 1e-12);
    }
}

TEST_CASE("bath homogeneity and theta identity on random fractions") {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> frac(1e-4, 1.0);
    const double ref = [] {
        const auto e = bath_from_concentration(0.011);
        return e.sigma0 * e.tau_c;
    }();
    for (int i = 0; i < 300; ++i) {
        const auto env = bath_from_concentration(frac(rng));
        CHECK(std::abs(env.sigma0 * env.tau_c / ref - 1.0) <= 1e-12);
        CHECK(std::abs(theta(env, ge()) * ge() * env.sigma0 * env.tau_c - 1.0) <= 1e-15);
    }
}

TEST_CASE("envelope bounds and pointwise ordering in the pulse number") {
    const auto env = bath_from_concentration(0.011);
    std::vector<DephasingModel> models;
    for (int n = 0; n <= 16; ++n) {
        const auto seq = udd(n, 1.0);
        models.push_back(
            modified_model(seq, env, ge(), choose_truncation(seq, env, ge(), env.tau_c)));
    }
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> tdist(1e-7, env.tau_c / std::numbers::sqrt2);
    std::uniform_int_distribution<int> ndist(0, 15);
    for (int i = 0; i < 400; ++i) {
        const double t = tdist(rng);
        const int n = ndist(rng);
        const double lo = envelope(models[n], t);
        const double hi = envelope(models[n + 1], t);
        CHECK(hi >= lo * (1.0 - 1e-12));
        CHECK(lo >= 0.0);
        CHECK(lo <= 1.0);
        CHECK(lo <= leading_order_envelope(models[n], t) * (1.0 + 1e-12));
        // monotone non-increasing in t
        const double later = envelope(models[n], t * 1.5);
        CHECK(later <= lo * (1.0 + 1e-12));
    }
}

TEST_CASE("coherence roots: residual, ceiling, and rate-rescaling oracle") {
    const auto env = bath_from_concentration(0.011);
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> ndist(0, 20);
    std::uniform_real_distribution<double> cdist(1.2, 8.0);
    for (int i = 0; i < 200; ++i) {
        const int n = ndist(rng);
        const auto seq = udd(n, 1.0);
        const auto model =
            modified_model(seq, env, ge(), choose_truncation(seq, env, ge(), env.tau_c));
        const auto pt = coherence_time(model);
        CHECK(pt.t2 <= env.tau_c);
        if (!pt.capped) {
            CHECK(std::abs(decay_exponent(model, pt.t2) - 1.0) < 1e-9);
            const double c = cdist(rng);
            auto scaled = model.rates;
            for (auto& r : scaled) r.gamma_k *= c;
            const auto pt2 = coherence_time(make_model(scaled, model.tau_c));
            if (!pt2.capped) CHECK(std::abs(pt2.t2 * c / pt.t2 - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("sensitivity scalings on random configurations") {
    const auto env = bath_from_concentration(0.011);
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> cdist(0.05, 1.0);
    std::uniform_real_distribution<double> udist(0.1, 1.2);
    std::uniform_int_distribution<int> ndist(0, 10);
    std::uniform_real_distribution<double> thdist(1.0, 100.0);
    MeasurementConfig base_cfg;
    base_cfg.pulse_width = 0.0;
    base_cfg.pulse_error = 0.0;
    std::vector<double> tau_star;
    for (int n = 0; n <= 10; ++n) tau_star.push_back(optimal_tau(n, env, base_cfg).tau);
    for (int i = 0; i < 200; ++i) {
        MeasurementConfig cfg = base_cfg;
        const int n = ndist(rng);
        const double tau = udist(rng) * tau_star[n];  // keep eta in range
        const double base = eta_telegraph(n, tau, env, cfg);
        MeasurementConfig cs = cfg;
        cs.C = cdist(rng);
        CHECK(std::abs(eta_telegraph(n, tau, env, cs) * cs.C / base - 1.0) <= 1e-12);
        CHECK(std::abs(eta_ac(n, tau, env, cfg) / base - std::numbers::pi / 2.0) <= 1e-12);
        const double th = thdist(rng);
        CHECK(std::abs(eta_fluctuating(n, tau, env, th, cfg) / base - 2.0 * th) <=
              1e-12 * 2.0 * th);
    }
}

TEST_CASE("monte carlo determinism and aggregation equivalence (sampled)") {
    const auto env = make_environment(1e-6, 1.0);
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<int> pulses(0, 4);
    std::uniform_real_distribution<double> tdist(0.02, 0.2);
    for (int i = 0; i < 25; ++i) {
        const int n = pulses(rng);
        const double t1 = tdist(rng);
        const std::vector<double> grid{0.5 * t1, t1};
        const std::uint64_t seed = 1000 + i;
        auto fam = [n](double t) { return udd(n, t); };
        MCOptions serial, parallel;
        serial.n_threads = 1;
        parallel.n_threads = 3;
        const auto a = mc_envelope(fam, env, NoiseKind::ou, ge(), 1000, grid, seed, serial);
        const auto b =
            mc_envelope(fam, env, NoiseKind::ou, ge(), 1000, grid, seed, parallel);
        const auto c = mc_envelope(fam, env, NoiseKind::ou, ge(), 1000, grid, seed);
        CHECK(a.envelope == b.envelope);
        CHECK(a.stderrs == b.stderrs);
        CHECK(a.envelope == c.envelope);
    }
}
