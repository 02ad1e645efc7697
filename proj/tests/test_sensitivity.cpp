#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uddmag/constants.hpp"
#include "uddmag/errors.hpp"
#include "uddmag/coherence.hpp"
#include "uddmag/sensitivity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace uddmag;

namespace {
bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }
double ge() { return default_constants().gamma_e; }

MeasurementConfig ideal() {
    MeasurementConfig cfg;
    cfg.pulse_width = 0.0;
    cfg.pulse_error = 0.0;
    return cfg;
}

// one-rate objective minimized by a test-side golden section (the calculus
// oracle for the closed-form interrogation time)
double golden_min_one_term(double g, int s) {
    auto f = [&](double u) {
        return std::exp((2.0 * s + 2.0) * (std::log(g) + u)) - 0.5 * u;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = -std::log(g) - 4.0, b = -std::log(g) + 4.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 400 && (b - a) > 1e-13; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return std::exp(0.5 * (a + b));
}
}  // namespace

TEST_CASE("shot-noise limit and C scaling") {
    // negligible dephasing: eta collapses to 1/(C gamma sqrt(tau))
    const auto quiet = make_environment(1e-18, 1.0);
    auto cfg = ideal();
    const double tau = 0.01;
    CHECK(close(eta_telegraph(0, tau, quiet, cfg), 1.0 / (ge() * std::sqrt(tau)), 1e-9));

    const auto env = bath_from_concentration(0.011);
    const std::pair<int, double> samples[] = {{0, 1e-6}, {0, 4e-6}, {1, 1e-4},
                                              {1, 4e-4}, {4, 2e-3}, {8, 8e-3}};
    for (const auto& [n, t] : samples) {
        auto half = ideal();
        half.C = 0.5;
        CHECK(close(eta_telegraph(n, t, env, half),
                    2.0 * eta_telegraph(n, t, env, ideal()), 1e-14));
    }
    CHECK_THROWS_AS(eta_telegraph(0, 0.0, env, cfg), std::domain_error);
    auto bad = ideal();
    bad.C = 1.5;
    CHECK_THROWS_AS(eta_telegraph(0, 1e-4, env, bad), std::domain_error);
}

TEST_CASE("the 1/(C gamma) prefactor is exact at a fixed dephasing model") {
    const auto env = bath_from_concentration(0.011);
    for (int n : {1, 2, 3}) {
        for (double gfac : {1.0, 2.0, 0.5}) {
            auto cfg = ideal();
            cfg.gamma = ge() * gfac;
            const double tau = 1e-4;
            const auto seq = udd(n, 1.0);
            const auto model = modified_model(
                seq, env, cfg.gamma, choose_truncation(seq, env, cfg.gamma, env.tau_c));
            const double expect =
                std::exp(decay_exponent(model, tau)) / (cfg.C * cfg.gamma * std::sqrt(tau));
            CHECK(close(eta_telegraph(n, tau, env, cfg), expect, 1e-12));
        }
    }
}

TEST_CASE("free-induction sensitivity at T2*") {
    const auto env = bath_from_concentration(0.011);
    const double T2s = 1.0 / gamma_rate(env.sigma0, 0, ge());
    const double value = eta_telegraph(0, T2s, env, ideal()) * ge() * std::sqrt(T2s);
    CHECK(close(value, std::exp(1.0), 1e-6));
}

TEST_CASE("optimal tau matches the one-term closed form") {
    // calculus on exp[(G tau)^(2s+2)]/sqrt(tau): (G tau)^(2s+2) = 1/(4s+4)
    for (int s : {0, 1, 2, 5, 9}) {
        const double g = 321.7;
        const double closed = (1.0 / g) * std::pow(4.0 * s + 4.0, -1.0 / (2.0 * s + 2.0));
        CHECK(close(golden_min_one_term(g, s), closed, 1e-6));
    }
    // the library optimizer on a bath whose higher orders are invisible
    // (steeply collapsing sigma_j leaves the single order-0 rate)
    const auto single = make_environment(1e-9, 0.5, -40.0);
    const auto opt = optimal_tau(0, single, ideal());
    const double g0 = gamma_rate(1e-9, 0, ge());
    CHECK(close(opt.tau, 0.5 / g0, 1e-6));
    CHECK(close(opt.eta, std::exp(0.25) / (ge() * std::sqrt(opt.tau)), 1e-6));
}

TEST_CASE("optimal tau is stationary and interior for moderate n") {
    const auto env = bath_from_concentration(0.011);
    for (int n : {0, 1, 2, 5, 13}) {
        const auto opt = optimal_tau(n, env, ideal());
        CHECK(opt.tau > 0.0);
        CHECK(opt.tau <= env.tau_c);
        if (opt.tau < 0.99 * env.tau_c) {
            const double up = eta_telegraph(n, opt.tau * (1.0 + 1e-3), env, ideal());
            const double dn = eta_telegraph(n, opt.tau * (1.0 - 1e-3), env, ideal());
            CHECK(opt.eta <= up);
            CHECK(opt.eta <= dn);
            // stationary to first order
            CHECK(close(eta_telegraph(n, opt.tau * (1 + 1e-6), env, ideal()), opt.eta, 1e-9));
        }
    }
    // large pulse numbers push the search to the ceiling
    CHECK(optimal_tau(40, env, ideal()).tau == env.tau_c);
}

TEST_CASE("upper bound dominates the computed sensitivity") {
    const auto env = bath_from_concentration(0.011);
    const auto cfg = ideal();
    for (int n = 1; n <= 40; ++n)
        CHECK(eta_upper_bound(n, env, cfg) >= optimal_tau(n, env, cfg).eta);
    CHECK_THROWS_AS(eta_upper_bound(0, env, cfg), std::domain_error);

    // Theta = 1: nothing to gain from decoupling, bound flat in n
    const auto unit = make_environment(1.0 / (ge() * 1e-3), 1e-3);
    CHECK(close(eta_upper_bound(1, unit, cfg), eta_upper_bound(7, unit, cfg), 1e-12));

    auto half = ideal();
    half.C = 0.5;
    CHECK(close(eta_upper_bound(3, env, half), 2.0 * eta_upper_bound(3, env, cfg), 1e-12));

    // explicit prefactor override is honored
    auto fixed = ideal();
    fixed.f_e = 4.0 / env.tau_c;
    CHECK(close(eta_upper_bound(5, env, fixed), 2.0 * eta_upper_bound(5, env, cfg), 1e-12));
}

TEST_CASE("ac mode is exactly pi/2 of telegraph") {
    const auto env = bath_from_concentration(0.011);
    const auto cfg = ideal();
    for (int n : {0, 1, 2, 7}) {
        // sample around the per-count optimum, where eta is well inside range
        const double tau_star = optimal_tau(n, env, cfg).tau;
        for (double f : {0.25, 1.0, 1.3}) {
            const double tau = f * tau_star;
            const double ratio =
                eta_ac(n, tau, env, cfg) / eta_telegraph(n, tau, env, cfg);
            CHECK(std::abs(ratio - std::numbers::pi / 2.0) <= 1e-12);
        }
    }
    const auto quiet = make_environment(1e-18, 1.0);
    CHECK(close(eta_ac(0, 0.01, quiet, cfg),
                std::numbers::pi / (2.0 * ge() * std::sqrt(0.01)), 1e-9));
}

TEST_CASE("fast external field rate") {
    const auto cfg = ideal();
    CHECK(gamma_ext(0.0, 1e-3, cfg) == 0.0);
    const double g1 = gamma_ext(1e-9, 1e-3, cfg);
    CHECK(close(gamma_ext(2e-9, 1e-3, cfg), 4.0 * g1, 1e-12));
    CHECK(close(g1, cfg.gamma * cfg.gamma * 1e-18 * 1e-3, 1e-12));
    CHECK_THROWS_AS(gamma_ext(1e-9, 0.0, cfg), std::domain_error);
}

TEST_CASE("fluctuating mode is 2 Theta_ext of telegraph") {
    const auto env = bath_from_concentration(0.011);
    const auto cfg = ideal();
    const double tau = optimal_tau(1, env, cfg).tau;
    for (double th : {1.0, 2.0, 10.0, 100.0}) {
        const double ratio =
            eta_fluctuating(1, tau, env, th, cfg) / eta_telegraph(1, tau, env, cfg);
        CHECK(std::abs(ratio - 2.0 * th) <= 1e-12 * 2.0 * th);
    }
    CHECK_THROWS_AS(eta_fluctuating(1, tau, env, 0.99, cfg), regime_error);
}

TEST_CASE("pulse penalty") {
    const auto env = bath_from_concentration(0.011);
    CHECK(pulse_penalty(7, env, ideal()) == 1.0);

    MeasurementConfig real;
    real.pulse_width = 50e-9;
    real.pulse_error = 0.01;
    // 0.99^-14 with a negligible Rabi correction (gamma sigma0/Omega ~ 5.6e-3)
    CHECK(close(pulse_penalty(13, env, real), 1.1510847239164868, 1e-12));
    CHECK(close(pulse_penalty(13, env, real), 1.151, 1e-3));

    double prev = 0.0;
    for (int n = 0; n <= 30; ++n) {
        const double p = pulse_penalty(n, env, real);
        CHECK(p > prev);
        CHECK(p >= 1.0);
        prev = p;
    }
    MeasurementConfig bad;
    bad.pulse_error = 1.0;
    CHECK_THROWS_AS(pulse_penalty(1, env, bad), std::domain_error);
}

TEST_CASE("pulse-count optimization") {
    const auto env = bath_from_concentration(0.011);

    // ideal pulses: eta non-increasing, optimum parks at the saturation knee
    std::vector<double> etas;
    for (int n = 0; n <= 30; ++n) etas.push_back(optimal_tau(n, env, ideal()).eta);
    for (std::size_t i = 0; i + 1 < etas.size(); ++i)
        CHECK(etas[i + 1] <= etas[i] * (1.0 + 1e-12));
    const auto best_ideal = optimize_pulses(env, ideal(), 30);
    CHECK(best_ideal.penalty == 1.0);
    CHECK(best_ideal.tau == env.tau_c);
    CHECK(close(best_ideal.eta * ge() * std::sqrt(env.tau_c), 1.0, 1e-12));
    // first count whose optimum sits on the ceiling at the floor sensitivity
    const auto curve = coherence_curve({22, 23}, env, ge());
    CHECK(!curve[0].capped);
    CHECK(curve[1].capped);
    CHECK(best_ideal.pulses == 23);

    // realistic pulses: finite optimum, thirteen pulses for this bath
    MeasurementConfig real;
    real.pulse_width = 50e-9;
    real.pulse_error = 0.01;
    const auto best = optimize_pulses(env, real, 40);
    CHECK(best.pulses == 13);
    CHECK(best.eta > 5.70e-11);
    CHECK(best.eta < 5.83e-11);
    CHECK(best.penalty > 1.0);
    CHECK(best.mode == "telegraph");

    // stronger pulse errors pull the optimum down
    MeasurementConfig sloppy = real;
    sloppy.pulse_error = 0.10;
    const auto best_sloppy = optimize_pulses(env, sloppy, 40);
    CHECK(best_sloppy.pulses == 5);
    CHECK(best_sloppy.pulses < best.pulses);

    // argmin is invariant under C rescaling
    MeasurementConfig halfc = real;
    halfc.C = 0.5;
    CHECK(optimize_pulses(env, halfc, 40).pulses == best.pulses);

    CHECK_THROWS_AS(optimize_pulses(env, real, 0), std::invalid_argument);
}

TEST_CASE("decoupling never hurts in the ideal model") {
    const auto env = bath_from_concentration(0.011);
    const double eta0 = optimal_tau(0, env, ideal()).eta;
    for (int n = 1; n <= 20; ++n) CHECK(optimal_tau(n, env, ideal()).eta <= eta0);
}
