#include "pbb84/channel.hpp"

#include <cmath>
#include <string>

namespace pbb84 {

namespace {

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0,1]");
    }
}

} // namespace

void LinkParams::validate() const {
    if (!(alpha_db_per_km >= 0.0)) throw ConfigError("link.alpha must be >= 0");
    if (!(distance_km >= 0.0)) throw ConfigError("link.distance must be >= 0");
    require_unit(eta_bob, "link.eta_bob");
    require_unit(epsilon_bob, "link.eps_bob");
    if (!(q_efficiency > 0.0 && q_efficiency <= 1.0)) {
        throw ConfigError("link.q must lie in (0,1]");
    }
    if (!(f_ec >= 1.0)) throw ConfigError("link.f_ec must be >= 1");
}

void DetectorParams::validate() const {
    require_unit(eta_det, "detector.eta_det");
    require_unit(epsilon_dark, "detector.epsilon_dark");
}

double eta_channel(double alpha_db_per_km, double distance_km) {
    if (alpha_db_per_km < 0.0 || distance_km < 0.0) {
        throw std::domain_error("eta_channel: alpha and distance must be >= 0");
    }
    return std::pow(10.0, -alpha_db_per_km * distance_km / 10.0);
}

double eta_sys(const LinkParams& link) {
    return eta_channel(link.alpha_db_per_km, link.distance_km) * link.eta_bob;
}

double threshold_no_click(int n, const DetectorParams& det) {
    if (n < 0) throw std::domain_error("threshold_no_click: n must be >= 0");
    return (1.0 - det.epsilon_dark) * std::pow(1.0 - det.eta_det, n);
}

BobPovm bob_povm_coefficients(int n, int m, double eta_sys_v, double eps_b) {
    if (n < 0 || m < 0) throw std::domain_error("bob_povm_coefficients: photon counts must be >= 0");
    const double miss_n = std::pow(1.0 - eta_sys_v, n);
    const double miss_m = std::pow(1.0 - eta_sys_v, m);
    const double f_vac = miss_n * miss_m;
    const double f_zero = (1.0 - miss_n) * miss_m;
    const double f_one = (1.0 - miss_m) * miss_n;
    const double one_minus = 1.0 - eps_b;

    BobPovm p;
    p.p_vac = one_minus * one_minus * f_vac;
    p.p_zero = one_minus * eps_b * f_vac + one_minus * f_zero;
    p.p_one = one_minus * eps_b * f_vac + one_minus * f_one;
    p.p_double = 1.0 - (p.p_vac + p.p_zero + p.p_one);
    return p;
}

} // namespace pbb84
