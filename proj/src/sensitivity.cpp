#include "uddmag/sensitivity.hpp"

#include "uddmag/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uddmag {

namespace {

void check_config(const MeasurementConfig& cfg) {
    if (!(cfg.C > 0.0) || !(cfg.C <= 1.0)) throw std::domain_error("C must be in (0, 1]");
    if (!(cfg.gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (!(cfg.pulse_width >= 0.0)) throw std::domain_error("pulse_width must be >= 0");
    if (!(cfg.pulse_error >= 0.0) || !(cfg.pulse_error < 1.0))
        throw std::domain_error("pulse_error must be in [0, 1)");
}

DephasingModel model_for(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg) {
    const PulseSequence seq = udd(n, 1.0);
    const int trunc = choose_truncation(seq, env, cfg.gamma, env.tau_c);
    return modified_model(seq, env, cfg.gamma, trunc);
}

double log_eta(const DephasingModel& model, double tau, const MeasurementConfig& cfg) {
    return decay_exponent(model, tau) - 0.5 * std::log(tau) -
           std::log(cfg.C * cfg.gamma);
}

}  // namespace

double eta_telegraph(int n, double tau, const NoiseEnvironment& env,
                     const MeasurementConfig& cfg) {
    check_config(cfg);
    if (n < 0) throw std::domain_error("pulse count must be >= 0");
    if (!(tau > 0.0)) throw std::domain_error("tau must be > 0");
    return std::exp(log_eta(model_for(n, env, cfg), tau, cfg));
}

OptimalTau optimal_tau(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg) {
    check_config(cfg);
    if (n < 0) throw std::domain_error("pulse count must be >= 0");
    const DephasingModel model = model_for(n, env, cfg);
    const double ln_cap = std::log(env.tau_c);
    double lo = ln_cap - 10.0;
    if (!model.rates.empty()) {
        // one-term closed form: (Gamma tau)^(2s+2) = 1/(4s+4) seeds the bracket
        const auto& r = model.rates.front();
        const double seed = -std::log(r.gamma_k) -
                            std::log(4.0 * r.order + 4.0) / (2.0 * r.order + 2.0);
        lo = std::min(seed, ln_cap) - 10.0;
    }
    // golden section on u = log tau; the objective is convex in u
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double u) { return log_eta(model, std::exp(u), cfg); };
    double a = lo, b = ln_cap;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 300 && (b - a) > 1e-12; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    double u = 0.5 * (a + b);
    if (f(ln_cap) <= f(u)) u = ln_cap;  // boundary minimum: tau* = tau_c
    OptimalTau out;
    out.tau = std::min(std::exp(u), env.tau_c);
    out.eta = std::exp(log_eta(model, out.tau, cfg));
    return out;
}

double eta_upper_bound(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg) {
    check_config(cfg);
    if (n < 1) throw std::domain_error("upper bound defined for n >= 1");
    const double th = theta(env, cfg.gamma);
    const double fe = std::isnan(cfg.f_e) ? 1.0 / env.tau_c : cfg.f_e;
    if (!(fe > 0.0)) throw std::domain_error("f_e must be > 0");
    return std::sqrt(fe * std::pow(th, -1.0 / n)) / (cfg.C * cfg.gamma);
}

double eta_ac(int n, double tau, const NoiseEnvironment& env, const MeasurementConfig& cfg) {
    return (std::numbers::pi / 2.0) * eta_telegraph(n, tau, env, cfg);
}

double gamma_ext(double sigma_ext, double tau_ext, const MeasurementConfig& cfg) {
    check_config(cfg);
    if (!(sigma_ext >= 0.0)) throw std::domain_error("sigma_ext must be >= 0");
    if (!(tau_ext > 0.0)) throw std::domain_error("tau_ext must be > 0");
    // e-folding tau convention; equals (1/2) gamma^2 sigma^2 * (2 tau_ext)
    return cfg.gamma * cfg.gamma * sigma_ext * sigma_ext * tau_ext;
}

double eta_fluctuating(int n, double tau, const NoiseEnvironment& env,
                       double theta_ext, const MeasurementConfig& cfg) {
    if (!(theta_ext >= 1.0))
        throw regime_error("eta_fluctuating requires the fast regime theta_ext >= 1");
    return 2.0 * theta_ext * eta_telegraph(n, tau, env, cfg);
}

double pulse_penalty(int n, const NoiseEnvironment& env, const MeasurementConfig& cfg) {
    check_config(cfg);
    if (n < 0) throw std::domain_error("pulse count must be >= 0");
    double bracket = 1.0;
    if (cfg.pulse_width > 0.0) {
        const double omega = std::numbers::pi / cfg.pulse_width;
        const double x = std::sqrt(std::numbers::pi) * cfg.gamma * env.sigma0 / omega;
        bracket = 1.0 + 0.25 * (n + 1.0) * x * x * x * x;
    }
    return std::pow(1.0 - cfg.pulse_error, -(n + 1.0)) * bracket;
}

SensitivityPoint optimize_pulses(const NoiseEnvironment& env, const MeasurementConfig& cfg,
                                 int n_max) {
    check_config(cfg);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    SensitivityPoint best;
    bool have = false;
    for (int n = 0; n <= n_max; ++n) {
        const OptimalTau opt = optimal_tau(n, env, cfg);
        const double pen = pulse_penalty(n, env, cfg);
        const double score = pen * opt.eta;
        if (!have || score < best.eta) {
            best.pulses = n;
            best.tau = opt.tau;
            best.eta = score;
            best.penalty = pen;
            have = true;
        }
    }
    best.mode = "telegraph";
    return best;
}

}  // namespace uddmag
