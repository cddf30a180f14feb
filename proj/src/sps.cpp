#include "pbb84/sps.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "pbb84/math.hpp"
#include "pbb84/rate.hpp"

namespace pbb84::sps {

namespace {

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 31> t{};
        t[0] = 1.0;
        for (int i = 1; i <= 30; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table[n];
}

double fc2(int x, int y, int z) {
    double f = static_cast<double>(f_comb(x, y, z));
    return f * f;
}

} // namespace

void SourceDistribution::validate() const {
    if (probs.empty()) throw ConfigError("source.p must not be empty");
    double total = 0.0;
    for (double v : probs) {
        if (!(v >= 0.0)) throw ConfigError("source.p entries must be >= 0");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("source.p must sum to 1 within 1e-12");
    }
}

void SpsPassiveParams::validate() const {
    dist.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("sps.t must lie in [0,1]");
    if (!(eta_a >= 0.0 && eta_a <= 1.0)) throw ConfigError("sps.eta_a must lie in [0,1]");
    if (!(eps_a >= 0.0 && eps_a <= 1.0)) throw ConfigError("sps.eps_a must lie in [0,1]");
}

double u_coeff(int n, const SpsPassiveParams& params) {
    if (n < 0) throw std::domain_error("u_coeff: n must be >= 0");
    const BinomialTable& binom = BinomialTable::shared();
    const double miss = (1.0 - params.eta_a) * (1.0 - params.t);
    double sum = 0.0;
    for (int k = n; k <= params.dist.nmax(); ++k) {
        sum += params.dist.p(k) * static_cast<double>(binom(k, k - n)) *
               std::pow(miss, k - n);
    }
    return (1.0 - params.eps_a) * std::pow(params.t, n) * sum;
}

double q_coeff(int n, const SpsPassiveParams& params) {
    if (n < 0) throw std::domain_error("q_coeff: n must be >= 0");
    const BinomialTable& binom = BinomialTable::shared();
    double sum = 0.0;
    for (int k = n; k <= params.dist.nmax(); ++k) {
        double bracket = 1.0 - (1.0 - params.eps_a) * std::pow(1.0 - params.eta_a, k - n);
        sum += params.dist.p(k) * static_cast<double>(binom(k, k - n)) *
               std::pow(1.0 - params.t, k - n) * bracket;
    }
    return std::pow(params.t, n) * sum;
}

double sigma_trace(int n, int m, int k, int l, double eta_det, double eps_a) {
    if (n < 0 || m < 0 || k < 0 || l < 0) {
        throw std::domain_error("sigma_trace: indices must be >= 0");
    }
    const double miss = 1.0 - eta_det;
    const double pref = (1.0 - eps_a) * std::ldexp(1.0, -(n + m)) * std::ldexp(1.0, -2 * (k + l)) /
                        (factorial(n) * factorial(m) * factorial(k) * factorial(l));
    double total = 0.0;
    for (int w = 0; w <= k + l; ++w) {
        const double fw = fc2(w, k, l);
        if (fw == 0.0) continue;
        for (int r = 0; r <= w + n; ++r) {
            const double fr = fc2(r, w, n);
            if (fr == 0.0) continue;
            for (int s = 0; s <= k + l + m - w; ++s) {
                const double fs = fc2(s, k + l - w, m);
                if (fs == 0.0) continue;
                const double h = factorial(r) * factorial(s) * factorial(w + n - r) *
                                 factorial(k + l + m - w - s);
                total += std::pow(miss, r + s) * fw * fr * fs * h;
            }
        }
    }
    return pref * total;
}

OutputWeights output_photon_weights(const SpsPassiveParams& params) {
    const int nmax = params.dist.nmax();
    OutputWeights out;
    out.max_total = 4 * nmax;
    out.w.assign(static_cast<std::size_t>(out.max_total + 1) * (out.max_total + 1), 0.0);

    std::vector<double> us(nmax + 1), qs(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        us[n] = u_coeff(n, params);
        qs[n] = q_coeff(n, params);
    }
    const double miss = 1.0 - params.eta_a;

    for (int n = 0; n <= nmax; ++n) {
        for (int m = 0; m <= nmax; ++m) {
            for (int k = 0; k <= nmax; ++k) {
                for (int l = 0; l <= nmax; ++l) {
                    const double weight = us[n] * qs[m] * qs[k] * qs[l];
                    if (weight == 0.0) continue;
                    const double pref =
                        weight * (1.0 - params.eps_a) * std::ldexp(1.0, -(n + m)) *
                        std::ldexp(1.0, -2 * (k + l)) /
                        (factorial(n) * factorial(m) * factorial(k) * factorial(l));
                    for (int w = 0; w <= k + l; ++w) {
                        const double fw = fc2(w, k, l);
                        if (fw == 0.0) continue;
                        for (int r = 0; r <= w + n; ++r) {
                            const double fr = fc2(r, w, n);
                            if (fr == 0.0) continue;
                            for (int s = 0; s <= k + l + m - w; ++s) {
                                const double fs = fc2(s, k + l - w, m);
                                if (fs == 0.0) continue;
                                const double h = factorial(r) * factorial(s) *
                                                 factorial(w + n - r) *
                                                 factorial(k + l + m - w - s);
                                out.at(w + n - r, k + l + m - w - s) +=
                                    pref * std::pow(miss, r + s) * fw * fr * fs * h;
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

double OutputWeights::sum() const {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

double normalization(const SpsPassiveParams& params) {
    return output_photon_weights(params).sum();
}

double acceptance_probability(const SpsPassiveParams& params) {
    return 4.0 * normalization(params);
}

namespace {

struct ClickFractions {
    double n;
    double f_vac, f_zero, f_one, f_dc; // normalized by n
    double p00, p01, p10;              // output photon-number populations
};

ClickFractions click_fractions(const OutputWeights& weights, double eta_sys_v) {
    ClickFractions out{};
    out.n = weights.sum();
    if (out.n <= 0.0) return out;
    double vac = 0.0, zero = 0.0, one = 0.0, dc = 0.0;
    for (int a = 0; a <= weights.max_total; ++a) {
        const double miss_a = std::pow(1.0 - eta_sys_v, a);
        for (int b = 0; b <= weights.max_total - a; ++b) {
            const double wv = weights.at(a, b);
            if (wv == 0.0) continue;
            const double miss_b = std::pow(1.0 - eta_sys_v, b);
            vac += wv * miss_a * miss_b;
            zero += wv * (1.0 - miss_a) * miss_b;
            one += wv * miss_a * (1.0 - miss_b);
            dc += wv * (1.0 - miss_a) * (1.0 - miss_b);
        }
    }
    out.f_vac = vac / out.n;
    out.f_zero = zero / out.n;
    out.f_one = one / out.n;
    out.f_dc = dc / out.n;
    out.p00 = weights.at(0, 0) / out.n;
    out.p01 = weights.at(0, 1) / out.n;
    out.p10 = weights.at(1, 0) / out.n;
    return out;
}

} // namespace

double sps_gain(const SpsPassiveParams& params, const LinkParams& link) {
    ClickFractions c = click_fractions(output_photon_weights(params), eta_sys(link));
    if (c.n <= 0.0) return 0.0;
    const double one_minus = 1.0 - link.epsilon_bob;
    return 1.0 - one_minus * one_minus * c.f_vac;
}

double sps_qber(const SpsPassiveParams& params, const LinkParams& link) {
    ClickFractions c = click_fractions(output_photon_weights(params), eta_sys(link));
    if (c.n <= 0.0) throw std::domain_error("sps_qber: no accepted signal (N = 0)");
    const double one_minus = 1.0 - link.epsilon_bob;
    const double q = 1.0 - one_minus * one_minus * c.f_vac;
    return qber_dark_combination(c.f_zero, c.f_one, c.f_dc, link.epsilon_bob, q);
}

double sps_p_multi(const SpsPassiveParams& params) {
    ClickFractions c = click_fractions(output_photon_weights(params), 0.0);
    if (c.n <= 0.0) return 0.0;
    return 1.0 - c.p00 - c.p01 - c.p10;
}

SpsRateBreakdown sps_key_rate(const SpsPassiveParams& params, const LinkParams& link) {
    SpsRateBreakdown b;
    ClickFractions c = click_fractions(output_photon_weights(params), eta_sys(link));
    b.normalization = c.n;
    if (c.n <= 0.0) return b;
    b.p_acc = 4.0 * c.n;
    const double one_minus = 1.0 - link.epsilon_bob;
    b.gain = 1.0 - one_minus * one_minus * c.f_vac;
    b.p_multi = 1.0 - c.p00 - c.p01 - c.p10;
    if (b.gain <= 0.0) return b;
    b.qber = qber_dark_combination(c.f_zero, c.f_one, c.f_dc, link.epsilon_bob, b.gain);
    GllpResult g = gllp_rate(link.q_efficiency, link.f_ec, b.p_acc, b.gain, b.qber, b.p_multi);
    b.e1 = g.e1;
    b.rate = g.rate;
    return b;
}

SpsOptimum optimize_t(double distance_km, const SourceDistribution& dist, double eta_a,
                      double eps_a, const LinkParams& link) {
    const LinkParams at = link.at_distance(distance_km);
    auto neg_rate = [&](double t) {
        return -sps_key_rate({t, dist, eta_a, eps_a}, at).rate;
    };
    Min1Result m = minimize_scalar(neg_rate, 1e-3, 1.0 - 1e-3, 200);
    if (!(m.value < 0.0)) return {0.0, 0.0};
    return {m.x, -m.value};
}

PhotonStats photon_stats(const SourceDistribution& dist) {
    double n_bar = 0.0;
    double pair = 0.0;
    for (int n = 0; n <= dist.nmax(); ++n) {
        n_bar += n * dist.p(n);
        pair += static_cast<double>(n) * (n - 1) * dist.p(n);
    }
    if (n_bar <= 0.0) {
        throw std::domain_error("photon_stats: g2 undefined for a vacuum source");
    }
    return {n_bar, pair / (n_bar * n_bar)};
}

SpsRateBreakdown active_sps_rate(const SourceDistribution& dist, double tau,
                                 const LinkParams& link) {
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw std::domain_error("active_sps_rate: tau must lie in (0,1]");
    }
    const int nmax = dist.nmax();
    const BinomialTable& binom = BinomialTable::shared();
    std::vector<double> attenuated(nmax + 1, 0.0);
    for (int n = 0; n <= nmax; ++n) {
        for (int k = n; k <= nmax; ++k) {
            attenuated[n] += dist.p(k) * static_cast<double>(binom(k, n)) *
                             std::pow(tau, n) * std::pow(1.0 - tau, k - n);
        }
    }
    const double eta = eta_sys(link);
    double f_vac = 0.0, f_zero = 0.0, p_multi = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        const double miss = std::pow(1.0 - eta, n);
        f_vac += attenuated[n] * miss;
        f_zero += attenuated[n] * (1.0 - miss);
        if (n >= 2) p_multi += attenuated[n];
    }
    SpsRateBreakdown b;
    b.normalization = 1.0;
    b.p_acc = 1.0;
    const double one_minus = 1.0 - link.epsilon_bob;
    b.gain = 1.0 - one_minus * one_minus * f_vac;
    b.p_multi = p_multi;
    if (b.gain <= 0.0) return b;
    b.qber = qber_dark_combination(f_zero, 0.0, 0.0, link.epsilon_bob, b.gain);
    GllpResult g = gllp_rate(link.q_efficiency, link.f_ec, 1.0, b.gain, b.qber, b.p_multi);
    b.e1 = g.e1;
    b.rate = g.rate;
    return b;
}

ActiveSpsOptimum optimize_tau(double distance_km, const SourceDistribution& dist,
                              const LinkParams& link) {
    const LinkParams at = link.at_distance(distance_km);
    auto neg_rate = [&](double tau) { return -active_sps_rate(dist, tau, at).rate; };
    Min1Result m = minimize_scalar(neg_rate, 1e-3, 1.0, 400);
    if (!(m.value < 0.0)) return {1.0, 0.0};
    return {m.x, -m.value};
}

} // namespace pbb84::sps
