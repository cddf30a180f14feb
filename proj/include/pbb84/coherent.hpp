#pragma once

#include "pbb84/channel.hpp"
#include "pbb84/math.hpp"

namespace pbb84::coherent {

/// Operating point of the coherent-light passive transmitter: mean photon
/// number mu of the post-selected output pulse and acceptance half-margin
/// omega (radians). Only the product mu = upsilon * t of source intensity and
/// tap transmittance enters the model.
struct CoherentPassiveParams {
    double mu = 0.1;
    double omega = 0.0;

    static CoherentPassiveParams from_source(double upsilon, double tap_transmittance,
                                             double omega_v) {
        return {upsilon * tap_transmittance, omega_v};
    }
};

struct CoherentRateBreakdown {
    double p_acc = 0.0;
    double gain = 0.0;
    double qber = 0.0;
    double p_multi = 0.0;
    double e1 = 1.0;
    double rate = 0.0;
};

/// Probability that a measured polarization angle falls inside one of the
/// four accepted arcs: 1 - 4 omega / pi. Throws outside [0, pi/4].
double acceptance_probability(double omega);

/// Gain Q = 1 - (1 - eps_B)^2 exp(-mu eta_sys); independent of the measured
/// angle and of Bob's basis.
double gain(double mu, const LinkParams& link);

/// Error rate of the signal conditioned on measured angle theta inside the
/// horizontal acceptance arc (dark counts included, double clicks half-weight).
double qber_theta(double theta, double mu, const LinkParams& link);

/// QBER averaged over the accepted arc. The integrand is even in theta, so the
/// wrap-around arc folds to [0, pi/4 - omega] and the integral is doubled.
/// At omega = pi/4 the arc collapses and the theta = 0 value is returned.
double qber_average(const CoherentPassiveParams& params, const LinkParams& link,
                    const QuadratureSpec& spec = {});

/// Poissonian two-or-more-photon probability 1 - e^-mu (1 + mu).
double p_multi_poisson(double mu);

/// Full GLLP breakdown for the passive transmitter at the given link.
CoherentRateBreakdown key_rate(const CoherentPassiveParams& params, const LinkParams& link);

struct CoherentOptimum {
    double mu = 0.0;
    double omega = 0.0;
    double rate = 0.0;
};

/// Maximize key_rate over (mu, omega); mu is scanned on a logarithmic grid in
/// [1e-4, 1] so the shrinking long-distance optimum stays resolved. Returns a
/// zero-rate sentinel when no positive rate exists.
CoherentOptimum optimize(double distance_km, const LinkParams& link);

/// Active-source baseline: the same signal at perfect alignment (theta = 0)
/// with every pulse kept (p_acc = 1).
CoherentRateBreakdown active_wcp_rate(double mu, const LinkParams& link);

struct ActiveWcpOptimum {
    double mu = 0.0;
    double rate = 0.0;
};

ActiveWcpOptimum optimize_active(double distance_km, const LinkParams& link);

} // namespace pbb84::coherent
