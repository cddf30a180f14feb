#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pbb84/channel.hpp"
#include "pbb84/math.hpp"
#include "pbb84/sps.hpp"

namespace pbb84::fock {

/// Occupation-number basis of `mode_count` bosonic modes truncated at
/// `photon_cap` total photons, enumerated in a fixed lexicographic order.
struct FockSpace {
    int mode_count = 0;
    int photon_cap = 0;
    std::vector<std::vector<int>> states;

    static FockSpace create(int mode_count, int photon_cap);

    int dim() const { return static_cast<int>(states.size()); }
    int index_of(std::span<const int> occupation) const;
};

/// Dense density operator on a truncated Fock space. This representation is
/// deliberately brute force: it exists to validate closed-form results, not
/// to be fast.
class DensityOperator {
public:
    DensityOperator(FockSpace space, Eigen::MatrixXcd matrix);

    static DensityOperator vacuum(int mode_count);
    static DensityOperator photon_number_mixture(const sps::SourceDistribution& dist);

    const FockSpace& space() const { return space_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Eigen::MatrixXcd& matrix() { return matrix_; }

    double trace() const { return matrix_.trace().real(); }
    double population(std::span<const int> occupation) const;
    double hermiticity_defect() const;
    /// Smallest eigenvalue of the Hermitian part (negative values signal a
    /// non-physical state beyond roundoff).
    double min_eigenvalue() const;
    void scale(double factor) { matrix_ *= factor; }

private:
    FockSpace space_;
    Eigen::MatrixXcd matrix_;
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Rewrite two modes through a 2x2 unitary of creation-operator coefficients:
/// old_a^dag = U(0,0) new_a^dag + U(0,1) new_b^dag, and likewise for old_b.
/// Photon number is conserved, so the truncation cap is never exceeded.
DensityOperator apply_mode_transform(const DensityOperator& rho, int mode_a, int mode_b,
                                     const Eigen::Matrix2cd& coeffs);

/// Two-mode beamsplitter with real amplitudes: sqrt(t) transmitted into
/// mode_a, sqrt(1-t) reflected into mode_b.
DensityOperator apply_beamsplitter(const DensityOperator& rho, int mode_a, int mode_b,
                                   double transmittance);

struct MeasureResult {
    DensityOperator state;  // conditioned and with the measured modes traced out
    double probability;
};

/// Threshold-detector POVM on one mode; the mode is traced out afterwards.
MeasureResult measure_threshold(const DensityOperator& rho, int mode, const DetectorParams& det,
                                bool click);

/// Threshold detector watching several modes at once (a rail with both
/// polarizations): clicks unless every watched mode is empty.
MeasureResult measure_threshold(const DensityOperator& rho, std::span<const int> modes,
                                const DetectorParams& det, bool click);

// --- network description -------------------------------------------------

enum class Pol { H, V, L, R };
enum class Basis { Linear, Circular };

/// Outcome required of each of Alice's five threshold detectors;
/// true = click.
struct ClickPattern {
    bool d_h = true, d_v = true, d_l = true, d_r = true;
    bool d = false;

    static ClickPattern silent(Pol j);
    bool monitor(Pol p) const;
};

struct SourceInput {
    std::string mode;
    sps::SourceDistribution dist;
};
struct LossyTap {
    std::string mode;
    double transmittance;
    DetectorParams monitor;
    bool monitor_click;
};
struct BasisRotation {
    std::string mode_a, mode_b; // renamed to the rotated labels
    std::string new_a, new_b;
    Eigen::Matrix2cd coeffs;
};
struct BalancedCombiner {
    std::string mode_a, mode_b; // mode_a keeps the kept beam, mode_b the monitored one
};
struct ThresholdMonitor {
    std::vector<std::string> modes;
    DetectorParams det;
    bool click;
};

using NetworkElement =
    std::variant<SourceInput, LossyTap, BasisRotation, BalancedCombiner, ThresholdMonitor>;

/// Ordered element list plus the pair of mode names that form the output.
struct NetworkSpec {
    std::vector<NetworkElement> elements;
    std::array<std::string, 2> output_modes;
};

/// The four-source transmitter: each source passes a tap of transmittance t
/// whose reflected arm feeds its monitor; same-basis pairs share a rail; the
/// cross-basis rail is rewritten in the output basis; the two rails merge on
/// a balanced combiner whose second output pair feeds the final monitor.
NetworkSpec transmitter_network(const sps::SpsPassiveParams& params, const ClickPattern& pattern,
                                Basis output_basis);

struct SimulationResult {
    DensityOperator output;   // normalized when probability > 0
    double probability;
};

/// Execute a network element list. Throws ConfigError on references to
/// unknown modes or out-of-range transmittances.
SimulationResult run_network(const NetworkSpec& spec);

/// Conditional output state (silent detector's polarization mode first) and
/// the probability of the corresponding accepted click pattern.
SimulationResult simulate_fig4(const sps::SpsPassiveParams& params, Pol silent);

/// Closed-form comparables extracted from a simulated output state by
/// composing with Bob's measurement layer built from first principles.
struct OracleQuantities {
    double normalization;
    double gain;
    double qber;
    double p_multi;
};

OracleQuantities oracle_quantities(const sps::SpsPassiveParams& params, const LinkParams& link,
                                   Pol silent);

/// Integrate the single-photon projector over the accepted arcs of the linear
/// and of the circular basis pair and compare both against the common
/// identity-proportional value; returns the largest entry-wise deviation.
double check_basis_independence(double omega, const QuadratureSpec& spec = {});

} // namespace pbb84::fock
