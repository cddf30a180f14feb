#pragma once

#include "pbb84/errors.hpp"

namespace pbb84 {

/// Fiber/free-space link and protocol constants shared by every scenario.
/// eta_bob folds the transmittance of Bob's optics together with his detector
/// efficiency; epsilon_bob is his per-detector, per-gate dark-count
/// probability. q_efficiency is the basis-sifting factor (1/2 for standard
/// BB84) and f_ec the error-correction inefficiency.
struct LinkParams {
    double alpha_db_per_km = 0.2;
    double distance_km = 0.0;
    double eta_bob = 0.1;
    double epsilon_bob = 1e-6;
    double q_efficiency = 0.5;
    double f_ec = 1.22;

    LinkParams at_distance(double d_km) const {
        LinkParams out = *this;
        out.distance_km = d_km;
        return out;
    }

    void validate() const;
};

/// Threshold single-photon detector: efficiency plus dark-count probability.
struct DetectorParams {
    double eta_det = 1.0;
    double epsilon_dark = 0.0;

    void validate() const;
};

/// Channel transmittance 10^(-alpha d / 10).
double eta_channel(double alpha_db_per_km, double distance_km);

/// Overall transmittance eta_channel * eta_bob.
double eta_sys(const LinkParams& link);

/// No-click probability of a threshold detector fed n photons:
/// (1 - epsilon_dark) (1 - eta_det)^n.
double threshold_no_click(int n, const DetectorParams& det);

/// Bob-side response to the Fock input |n,m> (n photons in the measured
/// polarization mode, m in the orthogonal one), with loss folded in through
/// eta_sys and dark counts applied per detector. The four outcomes are:
/// no click, click only on the matched detector, click only on the wrong
/// detector, and double click. They always sum to one.
struct BobPovm {
    double p_vac;
    double p_zero;
    double p_one;
    double p_double;
};

BobPovm bob_povm_coefficients(int n, int m, double eta_sys, double eps_b);

} // namespace pbb84
