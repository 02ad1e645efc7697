// dephasing.hpp — Taylor-regime dephasing rates and decoherence envelopes

#pragma once

#include "uddmag/bath.hpp"
#include "uddmag/sequences.hpp"

#include <vector>

namespace uddmag {

/// Family of rates Gamma_k defining the product-of-stretched-exponentials
/// envelope prod_k exp[-(Gamma_k t)^(2k+2)].
struct DephasingModel {
    struct Rate {
        int order = 0;        // Taylor order k
        double gamma_k = 0.0; // Gamma_k [1/s], > 0
    };
    std::vector<Rate> rates;  // ascending order, lowest unsuppressed first
    int start_order = 0;      // lowest order with nonzero rate
    int truncation_order = 0; // highest retained order
    double tau_c = 0.0;       // bath correlation time [s]
};

/// Dephasing rate Gamma_j = ((gamma sigma_j / sqrt(2)) / (j+1))^(1/(j+1));
/// zero input gives zero rate. Evaluated in log space.
double gamma_rate(double sigma_j, int j, double gamma);

/// Model for sigma_j directly from the environment (no pulse sequence):
/// orders 0..truncation.
DephasingModel free_induction_model(const NoiseEnvironment& env, double gamma,
                                    int truncation);

/// Sequence-modified model: sigma_j -> |lambda_j(seq)| sigma_j, orders with
/// lambda_j = 0 omitted, start_order = suppression_order(seq) + 1. The
/// truncation parameter is the highest retained order and must be >= start.
/// Orders whose envelope contribution at t = tau_c falls below 1e-18 are
/// dropped (resolution floor of the double-precision product).
DephasingModel modified_model(const PulseSequence& seq, const NoiseEnvironment& env,
                              double gamma, int truncation);

/// Adaptive truncation: retains orders until (Gamma_k t_max)^(2k+2) < 1e-18,
/// hard cap of 64 retained orders. Returns the order to pass as truncation.
int choose_truncation(const PulseSequence& seq, const NoiseEnvironment& env,
                      double gamma, double t_max);

/// Model with explicit rates, for oracle tests and rate-scaling studies.
DephasingModel make_model(std::vector<DephasingModel::Rate> rates, double tau_c);

/// sum_k (Gamma_k t)^(2k+2), each term through exp((2k+2) log(Gamma_k t)).
double decay_exponent(const DephasingModel& model, double t);

/// Envelope prod_k exp[-(Gamma_k t)^(2k+2)], = 1 at t = 0, in (0, 1],
/// monotone non-increasing. Asserted for t within the Taylor window.
double envelope(const DephasingModel& model, double t);

/// exp[-(Gamma_s t)^(2s+2)] with s the start order only.
double leading_order_envelope(const DephasingModel& model, double t);

}  // namespace uddmag
