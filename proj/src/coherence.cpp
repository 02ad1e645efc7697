#include "uddmag/coherence.hpp"

#include <cmath>
#include <stdexcept>

namespace uddmag {

CoherencePoint coherence_time(const DephasingModel& model) {
    if (!(model.tau_c > 0.0)) throw std::domain_error("model needs tau_c > 0");
    CoherencePoint pt;
    pt.pulses = 0;
    if (model.rates.empty()) {
        pt.t2 = model.tau_c;
        pt.capped = true;  // information loss only via the bath itself
        return pt;
    }
    const double g_at_cap = decay_exponent(model, model.tau_c) - 1.0;
    if (g_at_cap <= 0.0) {
        pt.t2 = model.tau_c;
        pt.capped = g_at_cap < 0.0;  // root strictly beyond the ceiling
        return pt;
    }
    // sum is strictly increasing in t; bisect to 1e-12 relative width
    double lo = 0.0;
    double hi = model.tau_c;
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (decay_exponent(model, mid) > 1.0)
            hi = mid;
        else
            lo = mid;
    }
    pt.t2 = 0.5 * (lo + hi);
    pt.capped = false;
    return pt;
}

std::vector<CoherencePoint> coherence_curve(const std::vector<int>& pulse_counts,
                                            const NoiseEnvironment& env, double gamma) {
    if (pulse_counts.empty()) throw std::invalid_argument("pulse_counts must be non-empty");
    std::vector<CoherencePoint> curve;
    curve.reserve(pulse_counts.size());
    for (int n : pulse_counts) {
        if (n < 0) throw std::invalid_argument("pulse counts must be >= 0");
        const PulseSequence seq = udd(n, 1.0);  // lambda depends only on tau_k/tau
        const int trunc = choose_truncation(seq, env, gamma, env.tau_c);
        CoherencePoint pt = coherence_time(modified_model(seq, env, gamma, trunc));
        pt.pulses = n;
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace uddmag
