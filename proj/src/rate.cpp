#include "pbb84/rate.hpp"

#include <algorithm>
#include <stdexcept>

#include "pbb84/math.hpp"

namespace pbb84 {

double qber_dark_combination(double f_zero, double f_one, double f_dc, double eps_b,
                             double gain) {
    if (gain <= 0.0) {
        throw std::domain_error("qber: gain must be positive");
    }
    double num = eps_b * (eps_b - 1.0) * f_zero + (2.0 + eps_b * (eps_b - 3.0)) * f_one +
                 (1.0 + eps_b * (eps_b - 2.0)) * f_dc + eps_b * (2.0 - eps_b);
    return num / (2.0 * gain);
}

GllpResult gllp_rate(double q_efficiency, double f_ec, double p_acc, double gain,
                     double qber, double p_multi) {
    GllpResult out{0.0, 1.0};
    if (gain <= 0.0 || p_acc <= 0.0) return out;
    if (p_multi >= gain) return out; // all detections attributable to multiphotons
    out.e1 = qber / (1.0 - p_multi / gain);
    if (out.e1 >= 0.5) return out;
    double r = q_efficiency * p_acc *
               ((gain - p_multi) * (1.0 - binary_entropy(out.e1)) -
                gain * f_ec * binary_entropy(std::clamp(qber, 0.0, 1.0)));
    out.rate = std::max(r, 0.0);
    return out;
}

} // namespace pbb84
