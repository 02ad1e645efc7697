// bath.hpp — Noise-environment parameters of a dilute nuclear-spin bath

#pragma once

#include "uddmag/constants.hpp"

namespace uddmag {

/// Gaussian bath summary: RMS field strength, self-correlation time, and the
/// rule generating the Taylor-coefficient scales sigma_j.
///
/// sigma_j = sigma0 * tau_c^(-j * sigma_model_exponent). The default exponent
/// of 1 reproduces the Hahn-echo rate Gamma_1 = 2.1 kHz for the 1.1% bath;
/// alternative decay rules can be swapped in through the field.
struct NoiseEnvironment {
    double sigma0 = 0.0;                 // RMS field strength [T], >= 0
    double tau_c = 0.0;                  // self-correlation time [s], > 0
    double concentration = 0.0;          // isotope fraction, 0 when synthetic
    double sigma_model_exponent = 1.0;   // rule selector for higher-order sigma_j
};

/// Environment with sigma0 >= 0 and tau_c > 0; throws std::domain_error otherwise.
NoiseEnvironment make_environment(double sigma0, double tau_c,
                                  double sigma_model_exponent = 1.0);

/// Bath parameters from the 13C isotope fraction:
///   sigma0 = sqrt(2pi/3) (mu0/4pi) n_c g_c mu_N,       n_c = fraction * n_carbon
///   tau_c  = sqrt(6/pi) (4pi hbar / mu0) / (n_c g_c^2 mu_N^2)
/// Throws std::domain_error unless 0 < fraction <= 1.
NoiseEnvironment bath_from_concentration(double fraction,
                                         const PhysicalConstants& k = default_constants());

/// Fluctuation-regime number Theta = 1 / (gamma sigma0 tau_c). Values >> 1 are
/// fast baths, << 1 slow baths. Requires sigma0 > 0.
double theta(const NoiseEnvironment& env, double gamma);

/// Taylor-coefficient scale sigma_j [T s^-j] under the environment's model.
/// j = 0 returns sigma0 exactly; j < 0 throws std::domain_error.
double sigma_taylor(const NoiseEnvironment& env, int j);

}  // namespace uddmag
