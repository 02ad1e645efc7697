#include "uddmag/bath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uddmag {

void validate(const PhysicalConstants& k) {
    const double vals[] = {k.gamma_e, k.gamma_c, k.mu0_over_4pi, k.hbar,
                           k.mu_N,    k.g_c,     k.n_carbon};
    for (double v : vals) {
        if (!(v > 0.0)) throw std::domain_error("physical constants must be positive");
    }
    const double hz_per_T = k.gamma_e / (2.0 * std::numbers::pi);
    if (std::abs(hz_per_T / 2.80e10 - 1.0) > 0.01)
        throw std::domain_error("gamma_e inconsistent with 2.80e10 Hz/T");
}

NoiseEnvironment make_environment(double sigma0, double tau_c, double sigma_model_exponent) {
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw std::domain_error("sigma0 must be >= 0");
    if (!(tau_c > 0.0) || !std::isfinite(tau_c))
        throw std::domain_error("tau_c must be > 0");
    return NoiseEnvironment{sigma0, tau_c, 0.0, sigma_model_exponent};
}

NoiseEnvironment bath_from_concentration(double fraction, const PhysicalConstants& k) {
    validate(k);
    if (!(fraction > 0.0) || !(fraction <= 1.0))
        throw std::domain_error("isotope fraction must be in (0, 1]");
    const double n_c = fraction * k.n_carbon;
    const double sigma0 =
        std::sqrt(2.0 * std::numbers::pi / 3.0) * k.mu0_over_4pi * n_c * k.g_c * k.mu_N;
    const double tau_c = std::sqrt(6.0 / std::numbers::pi) * (k.hbar / k.mu0_over_4pi) /
                         (n_c * k.g_c * k.g_c * k.mu_N * k.mu_N);
    NoiseEnvironment env;
    env.sigma0 = sigma0;
    env.tau_c = tau_c;
    env.concentration = fraction;
    return env;
}

double theta(const NoiseEnvironment& env, double gamma) {
    if (!(env.sigma0 > 0.0) || !(env.tau_c > 0.0))
        throw std::domain_error("theta requires sigma0 > 0 and tau_c > 0");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    return 1.0 / (gamma * env.sigma0 * env.tau_c);
}

double sigma_taylor(const NoiseEnvironment& env, int j) {
    if (j < 0) throw std::domain_error("Taylor order must be >= 0");
    if (!(env.sigma0 >= 0.0) || !(env.tau_c > 0.0))
        throw std::domain_error("invalid environment");
    if (j == 0) return env.sigma0;
    // log space: tau_c^(-j e) overflows plain pow for extreme orders
    return env.sigma0 *
           std::exp(-static_cast<double>(j) * env.sigma_model_exponent * std::log(env.tau_c));
}

}  // namespace uddmag
