#include "uddmag/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace uddmag {

namespace {

constexpr int kMaxRetainedOrders = 64;
constexpr double kLambdaZeroTol = 1e-12;
// per-order envelope contribution below this at t = tau_c is invisible in the
// double-precision product and is dropped
const double kLnContribFloor = std::log(1e-18);

double ln_gamma_rate(double ln_gamma_sigma, int j) {
    // ln Gamma_j for gamma*sigma_j given in log form
    return (ln_gamma_sigma - 0.5 * std::log(2.0) - std::log(j + 1.0)) / (j + 1.0);
}

// rates for sigma_j -> weight_j * sigma_j, orders [start, truncation]
DephasingModel build_model(const NoiseEnvironment& env, double gamma, int start,
                           int truncation,
                           const std::function<double(int)>& weight) {
    if (!(env.sigma0 > 0.0) || !(env.tau_c > 0.0))
        throw std::domain_error("model requires sigma0 > 0 and tau_c > 0");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (truncation < start)
        throw std::domain_error("truncation below the model's start order");
    DephasingModel model;
    model.start_order = start;
    model.truncation_order = truncation;
    model.tau_c = env.tau_c;
    const double ln_tau_c = std::log(env.tau_c);
    const double ln_gs0 = std::log(gamma) + std::log(env.sigma0);
    for (int j = start; j <= truncation; ++j) {
        const double w = weight(j);
        if (!(w > kLambdaZeroTol)) continue;  // fully suppressed order
        const double ln_sj = std::log(w) + ln_gs0 -
                             j * env.sigma_model_exponent * ln_tau_c;
        const double ln_g = ln_gamma_rate(ln_sj, j);
        if ((2.0 * j + 2.0) * (ln_g + ln_tau_c) < kLnContribFloor) continue;
        model.rates.push_back({j, std::exp(ln_g)});
        if (static_cast<int>(model.rates.size()) >= kMaxRetainedOrders) break;
    }
    return model;
}

}  // namespace

double gamma_rate(double sigma_j, int j, double gamma) {
    if (j < 0) throw std::domain_error("Taylor order must be >= 0");
    if (!(sigma_j >= 0.0)) throw std::domain_error("sigma_j must be >= 0");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (sigma_j == 0.0) return 0.0;
    return std::exp(ln_gamma_rate(std::log(gamma) + std::log(sigma_j), j));
}

DephasingModel free_induction_model(const NoiseEnvironment& env, double gamma,
                                    int truncation) {
    return build_model(env, gamma, 0, truncation, [](int) { return 1.0; });
}

DephasingModel modified_model(const PulseSequence& seq, const NoiseEnvironment& env,
                              double gamma, int truncation) {
    const int start = suppression_order(seq) + 1;
    return build_model(env, gamma, start, truncation,
                       [&seq](int j) { return std::abs(lambda_factor(seq, j)); });
}

int choose_truncation(const PulseSequence& seq, const NoiseEnvironment& env,
                      double gamma, double t_max) {
    if (!(t_max > 0.0)) throw std::domain_error("t_max must be > 0");
    const int start = suppression_order(seq) + 1;
    const double ln_t = std::log(t_max);
    const double ln_tau_c = std::log(env.tau_c);
    const double ln_gs0 = std::log(gamma) + std::log(env.sigma0);
    // scan orders; stop at the first whose contribution at t_max is invisible
    int last = start;
    int retained = 0;
    for (int j = start; retained < kMaxRetainedOrders && j <= start + 512; ++j) {
        const double w = std::abs(lambda_factor(seq, j));
        if (!(w > kLambdaZeroTol)) continue;
        const double ln_sj = std::log(w) + ln_gs0 - j * env.sigma_model_exponent * ln_tau_c;
        const double ln_g = ln_gamma_rate(ln_sj, j);
        if ((2.0 * j + 2.0) * (ln_g + ln_t) < kLnContribFloor) break;
        last = j;
        ++retained;
    }
    return last;
}

DephasingModel make_model(std::vector<DephasingModel::Rate> rates, double tau_c) {
    if (!(tau_c > 0.0)) throw std::domain_error("tau_c must be > 0");
    DephasingModel model;
    model.rates = std::move(rates);
    model.tau_c = tau_c;
    for (const auto& r : model.rates)
        if (!(r.gamma_k > 0.0) || r.order < 0)
            throw std::domain_error("rates must be positive with order >= 0");
    std::sort(model.rates.begin(), model.rates.end(),
              [](const auto& a, const auto& b) { return a.order < b.order; });
    model.start_order = model.rates.empty() ? 0 : model.rates.front().order;
    model.truncation_order = model.rates.empty() ? 0 : model.rates.back().order;
    return model;
}

double decay_exponent(const DephasingModel& model, double t) {
    if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
    if (t == 0.0) return 0.0;
    const double ln_t = std::log(t);
    double s = 0.0;
    for (const auto& r : model.rates) {
        const double e = (2.0 * r.order + 2.0) * (std::log(r.gamma_k) + ln_t);
        if (e > 709.0) return std::numeric_limits<double>::infinity();
        if (e > -745.0) s += std::exp(e);
    }
    return s;
}

double envelope(const DephasingModel& model, double t) {
    return std::exp(-decay_exponent(model, t));
}

double leading_order_envelope(const DephasingModel& model, double t) {
    if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
    if (t == 0.0 || model.rates.empty()) return 1.0;
    const auto& r = model.rates.front();
    const double e = (2.0 * r.order + 2.0) * (std::log(r.gamma_k) + std::log(t));
    if (e > 709.0) return 0.0;
    return std::exp(-std::exp(std::min(e, 709.0)));
}

}  // namespace uddmag
