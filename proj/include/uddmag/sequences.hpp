// sequences.hpp — pi-pulse sequences, moment residuals, suppression diagnostics

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uddmag {

/// Ordered pi-pulse instants over an interrogation window (0, total_time).
struct PulseSequence {
    double total_time = 0.0;          // interrogation time tau [s]
    std::vector<double> pulse_times;  // strictly increasing, interior to (0, tau)
    std::string label = "custom";     // hahn | udd(n) | cdd(l) | custom
};

/// Validated custom sequence (times strictly increasing and interior).
PulseSequence make_sequence(double total_time, std::vector<double> pulse_times,
                            std::string label = "custom");

/// n pulses at tau sin^2(pi k / (2n+2)), k = 1..n. n = 0 gives the empty
/// sequence (free induction). Times are mirrored so tau_k + tau_{n+1-k} = tau
/// holds exactly.
PulseSequence udd(int n, double tau);

/// Single pulse at tau/2; identical timing to udd(1, tau).
PulseSequence hahn(double tau);

/// Concatenated decoupling: level-l switching pattern [f_{l-1}, -f_{l-1}]
/// starting from f_0 = +1, coincident pulses cancelled pairwise. Pulse count
/// grows exponentially with level (1, 2, 5, 10, 21, ...). Levels beyond
/// max_level throw resource_error.
PulseSequence cdd(int level, double tau, int max_level = 20);

/// Normalized moment residual of order m:
///   r_m = -(m+1)/tau^(m+1) * integral_0^tau f(t) t^m dt
/// with f the switching function starting at +1. Evaluated segment-by-segment.
/// Zero means the order-m Taylor term is fully suppressed; the empty sequence
/// gives r_m = -1 (bare integral, no suppression).
double moment_residual(const PulseSequence& seq, int m);

/// Suppression factor applied to the Taylor coefficient a_j:
///   lambda_j = 2 sum_k (-1)^k (tau_k/tau)^(j+1) + (-1)^(P+1)
/// Equals moment_residual(seq, j) analytically (independent code path), and
/// |lambda_j| <= 1 always. Depends only on the time fractions tau_k/tau.
double lambda_factor(const PulseSequence& seq, int j);

/// Largest n with |moment_residual(seq, m)| < tol for all m <= n; -1 if the
/// m = 0 residual already fails. The scan is capped at the pulse count: a
/// P-pulse sequence never reports suppression beyond order P (for large-n UDD
/// the true residuals sit below double-precision noise).
int suppression_order(const PulseSequence& seq, double tol = 1e-9);

/// Switching function f(t) = (-1)^(#pulses at or before t), f(0) = +1.
/// t outside [0, total_time] throws std::domain_error.
double switching_function(const PulseSequence& seq, double t);

/// LHS of the UDD suppression identity, 2 sum_{k=1}^{n+1} (-1)^(k-1)
/// sin^(2m)(pi k / (2n+4)), defined for any m >= 1.
double udd_identity_sum(int n, int m);

/// Checks udd_identity_sum(n, m) == (-1)^n to within 1e-10. Requires
/// 1 <= m <= n+1 (the identity's proof needs m <= N-1); throws otherwise.
bool verify_identity(int n, int m);

/// Moment diagnostics over orders 0..max_order.
struct SuppressionReport {
    std::vector<double> residuals;  // r_0 .. r_max_order
    int order = -1;                 // suppression_order at tol
    std::vector<double> lambda;     // lambda_0 .. lambda_max_order
};

SuppressionReport make_report(const PulseSequence& seq, double tol = 1e-9,
                              int max_order = 8);

/// Plain-text schedule: header lines with label and total_time_s, then one
/// line per pulse, columns "index,time_s", 17 significant digits.
void write_schedule(std::ostream& os, const PulseSequence& seq);

}  // namespace uddmag
