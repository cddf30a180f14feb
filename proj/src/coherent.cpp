#include "pbb84/coherent.hpp"

#include <cmath>
#include <numbers>

#include "pbb84/rate.hpp"

namespace pbb84::coherent {

namespace {

constexpr double kPi = std::numbers::pi;

struct ThetaClicks {
    double f_zero, f_one, f_dc;
};

// Click probabilities of the noiseless detection layer for a Poissonian pulse
// of mean mu polarized at angle theta from the measured-basis axis. The pulse
// splits into independent Poissonians of mean mu cos^2(theta/2) on the matched
// mode and mu sin^2(theta/2) on the crossed one; expm1 keeps the aligned and
// anti-aligned limits exact.
ThetaClicks theta_clicks(double theta, double mu, double eta) {
    const double x = eta * mu;
    const double crossed = 0.5 * x * (1.0 - std::cos(theta));
    const double matched = 0.5 * x * (1.0 + std::cos(theta));
    const double f_zero = -std::exp(-crossed) * std::expm1(-matched);
    const double f_one = -std::exp(-matched) * std::expm1(-crossed);
    const double f_dc = std::expm1(-matched) * std::expm1(-crossed);
    return {f_zero, f_one, f_dc};
}

} // namespace

double acceptance_probability(double omega) {
    if (!(omega >= 0.0 && omega <= kPi / 4.0)) {
        throw std::domain_error("acceptance_probability: omega outside [0, pi/4]");
    }
    return 1.0 - 4.0 * omega / kPi;
}

double gain(double mu, const LinkParams& link) {
    if (mu < 0.0) throw std::domain_error("gain: mu must be >= 0");
    const double one_minus = 1.0 - link.epsilon_bob;
    return 1.0 - one_minus * one_minus * std::exp(-mu * eta_sys(link));
}

double qber_theta(double theta, double mu, const LinkParams& link) {
    if (mu < 0.0) throw std::domain_error("qber_theta: mu must be >= 0");
    const double q = gain(mu, link);
    ThetaClicks c = theta_clicks(theta, mu, eta_sys(link));
    return qber_dark_combination(c.f_zero, c.f_one, c.f_dc, link.epsilon_bob, q);
}

double qber_average(const CoherentPassiveParams& params, const LinkParams& link,
                    const QuadratureSpec& spec) {
    if (!(params.omega >= 0.0 && params.omega <= kPi / 4.0)) {
        throw std::domain_error("qber_average: omega outside [0, pi/4]");
    }
    const double half_arc = kPi / 4.0 - params.omega;
    if (half_arc <= 0.0) {
        return qber_theta(0.0, params.mu, link); // collapsed interval
    }
    // E_theta is even in theta, so integrate half the arc and normalize.
    double integral = integrate([&](double th) { return qber_theta(th, params.mu, link); },
                                0.0, half_arc, spec);
    return integral / half_arc;
}

double p_multi_poisson(double mu) {
    if (mu < 0.0) throw std::domain_error("p_multi_poisson: mu must be >= 0");
    return 1.0 - std::exp(-mu) * (1.0 + mu);
}

CoherentRateBreakdown key_rate(const CoherentPassiveParams& params, const LinkParams& link) {
    CoherentRateBreakdown b;
    b.p_acc = acceptance_probability(params.omega);
    b.gain = gain(params.mu, link);
    b.p_multi = p_multi_poisson(params.mu);
    if (b.gain <= 0.0) {
        b.qber = 0.0;
        return b;
    }
    b.qber = qber_average(params, link);
    GllpResult g = gllp_rate(link.q_efficiency, link.f_ec, b.p_acc, b.gain, b.qber, b.p_multi);
    b.e1 = g.e1;
    b.rate = g.rate;
    return b;
}

CoherentOptimum optimize(double distance_km, const LinkParams& link) {
    const LinkParams at = link.at_distance(distance_km);
    auto neg_rate = [&](double log_mu, double omega) {
        return -key_rate({std::pow(10.0, log_mu), omega}, at).rate;
    };
    Min2Result m = minimize_2d(neg_rate, {-4.0, 0.0, 0.0, kPi / 4.0});
    if (!(m.value < 0.0)) {
        return {0.0, 0.0, 0.0}; // no positive rate anywhere on the box
    }
    return {std::pow(10.0, m.x), m.y, -m.value};
}

CoherentRateBreakdown active_wcp_rate(double mu, const LinkParams& link) {
    CoherentRateBreakdown b;
    b.p_acc = 1.0;
    b.gain = gain(mu, link);
    b.p_multi = p_multi_poisson(mu);
    if (b.gain <= 0.0) {
        b.qber = 0.0;
        return b;
    }
    b.qber = qber_theta(0.0, mu, link);
    GllpResult g = gllp_rate(link.q_efficiency, link.f_ec, 1.0, b.gain, b.qber, b.p_multi);
    b.e1 = g.e1;
    b.rate = g.rate;
    return b;
}

ActiveWcpOptimum optimize_active(double distance_km, const LinkParams& link) {
    const LinkParams at = link.at_distance(distance_km);
    auto neg_rate = [&](double log_mu) {
        return -active_wcp_rate(std::pow(10.0, log_mu), at).rate;
    };
    Min1Result m = minimize_scalar(neg_rate, -4.0, 0.0);
    if (!(m.value < 0.0)) return {0.0, 0.0};
    return {std::pow(10.0, m.x), -m.value};
}

} // namespace pbb84::coherent
