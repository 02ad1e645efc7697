#include "uddmag/sequences.hpp"

#include "uddmag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace uddmag {

namespace {

// Neumaier-compensated accumulator
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void check_valid(const PulseSequence& seq) {
    if (!(seq.total_time > 0.0)) throw std::invalid_argument("total_time must be > 0");
    double prev = 0.0;
    for (double t : seq.pulse_times) {
        if (!(t > prev) || !(t < seq.total_time))
            throw std::invalid_argument("pulse times must be strictly increasing in (0, tau)");
        prev = t;
    }
}

}  // namespace

PulseSequence make_sequence(double total_time, std::vector<double> pulse_times,
                            std::string label) {
    PulseSequence seq{total_time, std::move(pulse_times), std::move(label)};
    check_valid(seq);
    return seq;
}

PulseSequence udd(int n, double tau) {
    if (n < 0) throw std::invalid_argument("pulse count must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    PulseSequence seq;
    seq.total_time = tau;
    seq.label = "udd(" + std::to_string(n) + ")";
    seq.pulse_times.resize(n);
    // upper half from the timing formula; lower half by subtraction from tau.
    // the upper times sit in [tau/2, tau), so the subtraction is exact
    // (Sterbenz) and tau_k + tau_{n+1-k} = tau holds exactly
    for (int k = n / 2 + 1; k <= n; ++k) {
        const double s = std::sin(std::numbers::pi * k / (2.0 * n + 2.0));
        seq.pulse_times[k - 1] = tau * (s * s);
    }
    if (n % 2 == 1) seq.pulse_times[(n - 1) / 2] = 0.5 * tau;
    for (int k = 1; 2 * k <= n; ++k)
        seq.pulse_times[k - 1] = tau - seq.pulse_times[n - k];
    return seq;
}

PulseSequence hahn(double tau) {
    PulseSequence seq = udd(1, tau);
    seq.label = "hahn";
    return seq;
}

PulseSequence cdd(int level, double tau, int max_level) {
    if (level < 1) throw std::invalid_argument("cdd level must be >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    if (level > max_level)
        throw resource_error("cdd level " + std::to_string(level) + " exceeds cap " +
                             std::to_string(max_level));
    // switching pattern over 2^level equal segments: s_l = [s_{l-1}, -s_{l-1}]
    std::vector<signed char> signs{+1};
    for (int l = 0; l < level; ++l) {
        const std::size_t half = signs.size();
        signs.resize(2 * half);
        for (std::size_t i = 0; i < half; ++i)
            signs[half + i] = static_cast<signed char>(-signs[i]);
    }
    PulseSequence seq;
    seq.total_time = tau;
    seq.label = "cdd(" + std::to_string(level) + ")";
    const double seg = tau / static_cast<double>(signs.size());
    for (std::size_t i = 1; i < signs.size(); ++i)
        if (signs[i] != signs[i - 1]) seq.pulse_times.push_back(seg * static_cast<double>(i));
    return seq;
}

double moment_residual(const PulseSequence& seq, int m) {
    if (m < 0) throw std::domain_error("moment order must be >= 0");
    check_valid(seq);
    // segment route: -(sum_j s_j (x_{j+1}^(m+1) - x_j^(m+1))), x normalized
    const double inv_tau = 1.0 / seq.total_time;
    KahanSum acc;
    double sign = 1.0;
    double prev_pow = 0.0;  // x_0 = 0
    for (double t : seq.pulse_times) {
        const double p = std::pow(t * inv_tau, m + 1);
        acc.add(-sign * (p - prev_pow));
        prev_pow = p;
        sign = -sign;
    }
    acc.add(-sign * (1.0 - prev_pow));  // x_{P+1} = 1
    return acc.value();
}

double lambda_factor(const PulseSequence& seq, int j) {
    if (j < 0) throw std::domain_error("Taylor order must be >= 0");
    check_valid(seq);
    // closed form: 2 sum_k (-1)^k x_k^(j+1) + (-1)^(P+1)
    const double inv_tau = 1.0 / seq.total_time;
    KahanSum acc;
    double sign = -1.0;  // k = 1
    for (double t : seq.pulse_times) {
        const double x = t * inv_tau;
        acc.add(2.0 * sign * std::exp((j + 1) * std::log(x)));
        sign = -sign;
    }
    const int P = static_cast<int>(seq.pulse_times.size());
    acc.add((P % 2 == 0) ? -1.0 : 1.0);  // (-1)^(P+1)
    return acc.value();
}

int suppression_order(const PulseSequence& seq, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    const int cap = static_cast<int>(seq.pulse_times.size());
    int order = -1;
    for (int m = 0; m <= cap; ++m) {
        if (std::abs(moment_residual(seq, m)) >= tol) break;
        order = m;
    }
    return order;
}

double switching_function(const PulseSequence& seq, double t) {
    check_valid(seq);
    if (!(t >= 0.0) || !(t <= seq.total_time))
        throw std::domain_error("t outside the interrogation window");
    const auto it =
        std::upper_bound(seq.pulse_times.begin(), seq.pulse_times.end(), t);
    const auto flips = std::distance(seq.pulse_times.begin(), it);
    return (flips % 2 == 0) ? 1.0 : -1.0;
}

double udd_identity_sum(int n, int m) {
    if (n < 0) throw std::domain_error("n must be >= 0");
    if (m < 1) throw std::domain_error("m must be >= 1");
    KahanSum acc;
    for (int k = 1; k <= n + 1; ++k) {
        const double s = std::sin(std::numbers::pi * k / (2.0 * n + 4.0));
        const double term = 2.0 * std::exp(2.0 * m * std::log(s));
        acc.add((k % 2 == 1) ? term : -term);
    }
    return acc.value();
}

bool verify_identity(int n, int m) {
    if (n < 0) throw std::domain_error("n must be >= 0");
    if (m < 1 || m > n + 1)
        throw std::domain_error("identity requires 1 <= m <= n+1");
    const double rhs = (n % 2 == 0) ? 1.0 : -1.0;
    return std::abs(udd_identity_sum(n, m) - rhs) <= 1e-10;
}

SuppressionReport make_report(const PulseSequence& seq, double tol, int max_order) {
    SuppressionReport rep;
    rep.order = suppression_order(seq, tol);
    rep.residuals.reserve(max_order + 1);
    rep.lambda.reserve(max_order + 1);
    for (int m = 0; m <= max_order; ++m) {
        rep.residuals.push_back(moment_residual(seq, m));
        rep.lambda.push_back(lambda_factor(seq, m));
    }
    return rep;
}

void write_schedule(std::ostream& os, const PulseSequence& seq) {
    check_valid(seq);
    char buf[64];
    os << "# label = " << seq.label << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", seq.total_time);
    os << "# total_time_s = " << buf << "\n";
    os << "index,time_s\n";
    for (std::size_t i = 0; i < seq.pulse_times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", seq.pulse_times[i]);
        os << (i + 1) << "," << buf << "\n";
    }
}

}  // namespace uddmag
