#pragma once

namespace pbb84 {

/// Combine the noiseless-detector click probabilities (f_zero: correct
/// detector only, f_one: wrong detector only, f_dc: both) with per-detector
/// dark counts into the conditional error rate among clicks. Double clicks
/// count as half an error (random bit assignment).
double qber_dark_combination(double f_zero, double f_one, double f_dc, double eps_b,
                             double gain);

struct GllpResult {
    double rate;
    double e1;
};

/// One-way GLLP lower bound
///   R = q p_acc { (Q - p_multi)[1 - H(E1)] - Q f_ec H(E) },
/// with E1 = E / (1 - p_multi/Q). The rate is clamped to zero when negative,
/// when p_multi >= Q, or when E1 >= 1/2.
GllpResult gllp_rate(double q_efficiency, double f_ec, double p_acc, double gain,
                     double qber, double p_multi);

} // namespace pbb84
