// sensitivity.hpp — shot-noise magnetometer sensitivity and its optimization

#pragma once

#include "uddmag/bath.hpp"
#include "uddmag/dephasing.hpp"

#include <cmath>
#include <string>

namespace uddmag {

/// Readout / pulse-hardware parameters of one measurement configuration.
struct MeasurementConfig {
    double C = 1.0;                  // readout efficiency, 0 < C <= 1
    double gamma = 1.76085963023e11; // probe gyromagnetic ratio [rad s^-1 T^-1]
    double pulse_width = 0.0;        // pi-pulse duration t_pi [s], 0 = ideal
    double pulse_error = 0.01;       // per-pulse fidelity loss epsilon
    double f_e = std::nan("");       // upper-bound prefactor [1/s]; NaN = auto (1/tau_c)
};

struct SensitivityPoint {
    int pulses = 0;
    double tau = 0.0;       // interrogation time [s]
    double eta = 0.0;       // sensitivity [T Hz^-1/2] (penalty included)
    std::string mode = "telegraph";  // telegraph | ac | fluctuating
    double penalty = 1.0;   // multiplicative pulse-imperfection factor, >= 1
};

/// Telegraph-signal sensitivity for n pulses (udd timing) at interrogation
/// time tau: eta = exp[sum_k (Gamma_k tau)^(2k+2)] / (C gamma sqrt(tau)).
double eta_telegraph(int n, double tau, const NoiseEnvironment& env,
                     const MeasurementConfig& cfg);

/// Minimizes eta_telegraph over tau in (0, tau_c]. The one-term closed form
/// tau = Gamma_s^-1 (4s+4)^(-1/(2s+2)) seeds a golden-section search on
/// log tau (the log-objective is convex). Returns (tau*, eta(tau*)).
struct OptimalTau {
    double tau = 0.0;
    double eta = 0.0;
};
OptimalTau optimal_tau(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg);

/// Printed analytic bound (1/(C gamma)) sqrt(f_e Theta^(-1/n)), n >= 1.
/// f_e defaults to 1/tau_c, which makes the bound's n -> infinity asymptote
/// coincide with the saturation floor 1/(C gamma sqrt(tau_c)) and dominate
/// the computed sensitivity over the tested range. Flagged approximate.
double eta_upper_bound(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg);

/// Synchronized-AC sensitivity, exactly (pi/2) * eta_telegraph.
double eta_ac(int n, double tau, const NoiseEnvironment& env, const MeasurementConfig& cfg);

/// Motional-narrowed decay rate of a fast external field with e-folding
/// correlation time tau_ext: Gamma_ext = gamma_p^2 sigma_ext^2 tau_ext
/// (envelope factor exp(-Gamma_ext t)). Equals the conventional
/// (1/2) gamma^2 sigma^2 tau* with tau* the two-sided integral correlation
/// time 2 tau_ext.
double gamma_ext(double sigma_ext, double tau_ext, const MeasurementConfig& cfg);

/// Fast-fluctuating-field sensitivity 2 Theta_ext * eta_telegraph; requires
/// theta_ext >= 1 (fast regime), else regime_error.
double eta_fluctuating(int n, double tau, const NoiseEnvironment& env,
                       double theta_ext, const MeasurementConfig& cfg);

/// Pulse-imperfection factor (1-eps)^-(n+1) [1 + (n+1)/4 (sqrt(pi) gamma
/// sigma0 / Omega)^4], Omega = pi / pulse_width. Ideal pulses give 1.
double pulse_penalty(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg);

/// Minimizes pulse_penalty(n) * optimal_tau(n).eta over n in [0, n_max];
/// ties resolve to the smaller pulse count. eta of the returned point carries
/// the penalty; the penalty field holds the factor itself.
SensitivityPoint optimize_pulses(const NoiseEnvironment& env, const MeasurementConfig& cfg,
                                 int n_max);

}  // namespace uddmag
