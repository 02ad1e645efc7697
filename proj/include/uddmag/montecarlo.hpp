// montecarlo.hpp — stochastic oracle: sampled noise paths, switched-phase
// integration, empirical dephasing envelopes

#pragma once

#include "uddmag/bath.hpp"
#include "uddmag/sequences.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace uddmag {

enum class NoiseKind { ou, smooth_gaussian };

/// A sampled field path B(i * dt), i = 0..N.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> samples;  // [T]
    NoiseKind kind = NoiseKind::ou;
};

/// Exact-discretization stationary Ornstein-Uhlenbeck path with variance
/// sigma0^2 and e-folding correlation time tau_c. Bit-deterministic given the
/// seed (own Box-Muller over SplitMix64-seeded mt19937_64). Requires
/// dt <= tau_c / 100 (resolution_error otherwise) and t_max > dt.
Trajectory sample_ou(const NoiseEnvironment& env, double dt, double t_max,
                     std::uint64_t seed);

/// Stationary Gaussian process with squared-exponential correlation
/// sigma0^2 exp(-s^2 / (2 tau_c^2)); sample paths are smooth, so the Taylor
/// coefficients a_j exist. Dense Cholesky draw: paths longer than 8192 steps
/// throw resource_error. Same preconditions as sample_ou.
Trajectory sample_smooth(const NoiseEnvironment& env, double dt, double t_max,
                         std::uint64_t seed);

/// integral_0^t f(s) B(s) ds with f the switching function of seq, trapezoid
/// on the sample grid split exactly at pulse times (B linearly interpolated
/// at the split). Requires t <= sampled span.
double phase_integral(const PulseSequence& seq, const Trajectory& traj, double t);

/// Ensemble-averaged empirical envelope with standard errors.
struct MCEstimate {
    std::vector<double> times;     // grid [s]
    std::vector<double> envelope;  // <cos phi(t)>, exactly 1 at t = 0
    std::vector<double> stderrs;   // per-point standard error
    int n_traj = 0;
    std::uint64_t seed = 0;
};

struct MCOptions {
    double dt = 0.0;      // 0 = auto (tau_c/400, capped by grid resolution)
    int n_threads = 0;    // 0 = hardware concurrency
};

/// For each grid time t, averages cos(gamma integral_0^t f B) over n_traj
/// paths, with f from seq_family(t) (the sequence scaled to window t).
/// Per-path sub-seeds derive from (seed, path index) and accumulation is
/// chunked in fixed order, so results are bit-identical for any thread count.
/// Requires n_traj >= 1000; grid times in [0, max]; t = 0 estimates are
/// exactly 1.
MCEstimate mc_envelope(const std::function<PulseSequence(double)>& seq_family,
                       const NoiseEnvironment& env, NoiseKind kind, double gamma,
                       int n_traj, const std::vector<double>& t_grid,
                       std::uint64_t seed, const MCOptions& opts = {});

/// Fits exp(-Gamma t) to the empirical OU envelope under seq (rescaled to
/// each window) and returns Gamma. Requires the deep motional-narrowing
/// regime Theta_ext = 1/(gamma sigma_ext tau_ext) > 5 and a sane exponential
/// fit; regime_error otherwise.
double mc_fast_field_rate(double sigma_ext, double tau_ext, const PulseSequence& seq,
                          double gamma, int n_traj, std::uint64_t seed,
                          const MCOptions& opts = {});

}  // namespace uddmag
