#pragma once

#include <vector>

#include "pbb84/channel.hpp"

namespace pbb84::sps {

/// Photon-number distribution p_0..p_nmax of one source. All four sources of
/// the passive transmitter share the same distribution. The support is finite,
/// so every photon-number sum in this module terminates exactly.
struct SourceDistribution {
    std::vector<double> probs;

    SourceDistribution() : probs{1.0} {}
    explicit SourceDistribution(std::vector<double> p) : probs(std::move(p)) {}

    static SourceDistribution ideal() { return SourceDistribution({0.0, 1.0}); }
    static SourceDistribution vacuum() { return SourceDistribution({1.0}); }

    int nmax() const { return static_cast<int>(probs.size()) - 1; }
    double p(int n) const { return (n >= 0 && n <= nmax()) ? probs[n] : 0.0; }

    void validate() const; // nonnegative entries summing to 1 within 1e-12
};

/// Four-source passive transmitter: tap transmittance t plus the shared
/// efficiency / dark-count figures of Alice's five threshold detectors.
struct SpsPassiveParams {
    double t = 0.25;
    SourceDistribution dist = SourceDistribution::ideal();
    double eta_a = 1.0;
    double eps_a = 1e-6;

    void validate() const;
};

struct SpsRateBreakdown {
    double normalization = 0.0;
    double p_acc = 0.0;
    double gain = 0.0;
    double qber = 0.0;
    double p_multi = 0.0;
    double e1 = 1.0;
    double rate = 0.0;
};

struct PhotonStats {
    double n_bar;
    double g2;
};

/// Weight that the silent-monitor source transmits n photons while its
/// monitor detector stays dark.
double u_coeff(int n, const SpsPassiveParams& params);

/// Weight that a clicking-monitor source transmits n photons while its
/// monitor detector fires.
double q_coeff(int n, const SpsPassiveParams& params);

/// Trace of the (unnormalized) network state reached by (n,m,k,l) transmitted
/// photons, conditioned on the balanced-combiner monitor staying dark; equal
/// for every choice of silent signal detector.
double sigma_trace(int n, int m, int k, int l, double eta_det, double eps_a);

/// Joint weight of finding (a, b) photons in the (matched, orthogonal)
/// polarization modes of the conditional output. Entries sum to the
/// normalization N; dividing by N gives the output photon-number distribution.
struct OutputWeights {
    int max_total = 0;                 // 4 * nmax
    std::vector<double> w;             // (max_total+1)^2, row-major in (a, b)

    double at(int a, int b) const { return w[static_cast<std::size_t>(a) * (max_total + 1) + b]; }
    double& at(int a, int b) { return w[static_cast<std::size_t>(a) * (max_total + 1) + b]; }
    double sum() const;
};

OutputWeights output_photon_weights(const SpsPassiveParams& params);

/// Probability N of one specific accepted click pattern (three monitors fire,
/// one stays dark, the combiner monitor stays dark).
double normalization(const SpsPassiveParams& params);

/// Probability that the transmitter post-selects a pulse: 4N.
double acceptance_probability(const SpsPassiveParams& params);

double sps_gain(const SpsPassiveParams& params, const LinkParams& link);

/// Throws std::domain_error when the gain vanishes.
double sps_qber(const SpsPassiveParams& params, const LinkParams& link);

/// Probability that the accepted output carries two or more photons.
double sps_p_multi(const SpsPassiveParams& params);

SpsRateBreakdown sps_key_rate(const SpsPassiveParams& params, const LinkParams& link);

struct SpsOptimum {
    double t = 0.0;
    double rate = 0.0;
};

/// Maximize sps_key_rate over the tap transmittance t in (0,1).
SpsOptimum optimize_t(double distance_km, const SourceDistribution& dist, double eta_a,
                      double eps_a, const LinkParams& link);

/// Mean photon number and normalized second-order correlation of a source.
PhotonStats photon_stats(const SourceDistribution& dist);

/// Active baseline: the source distribution attenuated by a beamsplitter of
/// transmittance tau, deterministic polarization, every pulse kept.
SpsRateBreakdown active_sps_rate(const SourceDistribution& dist, double tau,
                                 const LinkParams& link);

struct ActiveSpsOptimum {
    double tau = 1.0;
    double rate = 0.0;
};

ActiveSpsOptimum optimize_tau(double distance_km, const SourceDistribution& dist,
                              const LinkParams& link);

} // namespace pbb84::sps
