// coherence.hpp — coherence times under pulse sequences (Fig.-2(b)-style curves)

#pragma once

#include "uddmag/dephasing.hpp"

#include <vector>

namespace uddmag {

struct CoherencePoint {
    int pulses = 0;
    double t2 = 0.0;      // coherence time [s], always <= tau_c
    bool capped = false;  // true iff the uncapped root exceeds tau_c
};

/// Unique positive root of sum_k (Gamma_k t)^(2k+2) - 1 = 0, clamped to
/// tau_c. Bisection to 1e-12 relative width; information lost to the bath
/// itself cannot be recovered, so the ceiling is hard. A model with no rates
/// returns the capped point at tau_c.
CoherencePoint coherence_time(const DephasingModel& model);

/// One point per pulse count (udd sequences; 0 = free induction).
/// t2 is monotone non-decreasing in the count for the default bath model.
std::vector<CoherencePoint> coherence_curve(const std::vector<int>& pulse_counts,
                                            const NoiseEnvironment& env, double gamma);

}  // namespace uddmag
