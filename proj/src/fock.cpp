#include "pbb84/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace pbb84::fock {

namespace {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 31> t{};
        t[0] = 1.0;
        for (int i = 1; i <= 30; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table[n];
}

void enumerate(int modes, int cap, std::vector<int>& prefix,
               std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == modes) {
        out.push_back(prefix);
        return;
    }
    for (int n = 0; n <= cap; ++n) {
        prefix.push_back(n);
        enumerate(modes, cap - n, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

FockSpace FockSpace::create(int mode_count, int photon_cap) {
    if (mode_count < 1 || photon_cap < 0) {
        throw std::domain_error("FockSpace: need mode_count >= 1 and photon_cap >= 0");
    }
    FockSpace space;
    space.mode_count = mode_count;
    space.photon_cap = photon_cap;
    std::vector<int> prefix;
    enumerate(mode_count, photon_cap, prefix, space.states);
    return space;
}

int FockSpace::index_of(std::span<const int> occupation) const {
    if (static_cast<int>(occupation.size()) != mode_count) return -1;
    // Lexicographic rank; spaces are tiny, binary search keeps this simple.
    auto it = std::lower_bound(states.begin(), states.end(), occupation,
                               [](const std::vector<int>& a, std::span<const int> b) {
                                   return std::lexicographical_compare(a.begin(), a.end(),
                                                                       b.begin(), b.end());
                               });
    if (it == states.end() || !std::equal(it->begin(), it->end(), occupation.begin())) return -1;
    return static_cast<int>(it - states.begin());
}

DensityOperator::DensityOperator(FockSpace space, Eigen::MatrixXcd matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
        throw std::domain_error("DensityOperator: matrix does not match space dimension");
    }
}

DensityOperator DensityOperator::vacuum(int mode_count) {
    FockSpace space = FockSpace::create(mode_count, 0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(1, 1);
    m(0, 0) = 1.0;
    return {std::move(space), std::move(m)};
}

DensityOperator DensityOperator::photon_number_mixture(const sps::SourceDistribution& dist) {
    FockSpace space = FockSpace::create(1, dist.nmax());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (int n = 0; n <= dist.nmax(); ++n) {
        int idx = space.index_of(std::array{n});
        m(idx, idx) = dist.p(n);
    }
    return {std::move(space), std::move(m)};
}

double DensityOperator::population(std::span<const int> occupation) const {
    int idx = space_.index_of(occupation);
    return idx < 0 ? 0.0 : matrix_(idx, idx).real();
}

double DensityOperator::hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    Eigen::MatrixXcd herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    return solver.eigenvalues().minCoeff();
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    FockSpace space = FockSpace::create(a.space().mode_count + b.space().mode_count,
                                        a.space().photon_cap + b.space().photon_cap);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    std::vector<int> row(space.mode_count), col(space.mode_count);
    const int ma = a.space().mode_count;
    for (int i1 = 0; i1 < a.space().dim(); ++i1) {
        for (int j1 = 0; j1 < a.space().dim(); ++j1) {
            Complex va = a.matrix()(i1, j1);
            if (va == Complex{}) continue;
            for (int i2 = 0; i2 < b.space().dim(); ++i2) {
                for (int j2 = 0; j2 < b.space().dim(); ++j2) {
                    Complex vb = b.matrix()(i2, j2);
                    if (vb == Complex{}) continue;
                    std::copy(a.space().states[i1].begin(), a.space().states[i1].end(), row.begin());
                    std::copy(b.space().states[i2].begin(), b.space().states[i2].end(), row.begin() + ma);
                    std::copy(a.space().states[j1].begin(), a.space().states[j1].end(), col.begin());
                    std::copy(b.space().states[j2].begin(), b.space().states[j2].end(), col.begin() + ma);
                    m(space.index_of(row), space.index_of(col)) += va * vb;
                }
            }
        }
    }
    return {std::move(space), std::move(m)};
}

DensityOperator apply_mode_transform(const DensityOperator& rho, int mode_a, int mode_b,
                                     const Eigen::Matrix2cd& coeffs) {
    const FockSpace& space = rho.space();
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= space.mode_count ||
        mode_b >= space.mode_count) {
        throw std::domain_error("apply_mode_transform: modes must be distinct and in range");
    }
    if ((coeffs * coeffs.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::domain_error("apply_mode_transform: coefficient matrix must be unitary");
    }
    // Expand (U00 a' + U01 b')^na (U10 a' + U11 b')^nb |0> per basis column.
    std::vector<Eigen::Triplet<Complex>> triplets;
    std::vector<int> target(space.mode_count);
    for (int colidx = 0; colidx < space.dim(); ++colidx) {
        const std::vector<int>& occ = space.states[colidx];
        const int na = occ[mode_a];
        const int nb = occ[mode_b];
        const BinomialTable& binom = BinomialTable::shared();
        for (int i = 0; i <= na; ++i) {
            for (int j = 0; j <= nb; ++j) {
                Complex amp = std::pow(coeffs(0, 0), i) * std::pow(coeffs(0, 1), na - i) *
                              std::pow(coeffs(1, 0), j) * std::pow(coeffs(1, 1), nb - j);
                amp *= static_cast<double>(binom(na, i)) * static_cast<double>(binom(nb, j));
                const int pa = i + j;
                const int pb = (na - i) + (nb - j);
                amp *= std::sqrt(factorial(pa) * factorial(pb) / (factorial(na) * factorial(nb)));
                if (amp == Complex{}) continue;
                target = occ;
                target[mode_a] = pa;
                target[mode_b] = pb;
                triplets.emplace_back(space.index_of(target), colidx, amp);
            }
        }
    }
    SparseC t(space.dim(), space.dim());
    t.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::MatrixXcd out = t * rho.matrix() * t.adjoint();
    return {space, std::move(out)};
}

DensityOperator apply_beamsplitter(const DensityOperator& rho, int mode_a, int mode_b,
                                   double transmittance) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw std::domain_error("apply_beamsplitter: transmittance outside [0,1]");
    }
    const double tau = std::sqrt(transmittance);
    const double refl = std::sqrt(1.0 - transmittance);
    Eigen::Matrix2cd coeffs;
    coeffs << tau, refl, -refl, tau;
    return apply_mode_transform(rho, mode_a, mode_b, coeffs);
}

MeasureResult measure_threshold(const DensityOperator& rho, std::span<const int> modes,
                                const DetectorParams& det, bool click) {
    const FockSpace& space = rho.space();
    for (int m : modes) {
        if (m < 0 || m >= space.mode_count) {
            throw std::domain_error("measure_threshold: mode out of range");
        }
    }
    std::vector<int> keep;
    for (int m = 0; m < space.mode_count; ++m) {
        if (std::find(modes.begin(), modes.end(), m) == modes.end()) keep.push_back(m);
    }
    if (keep.empty()) throw std::domain_error("measure_threshold: cannot measure every mode");

    FockSpace out_space = FockSpace::create(static_cast<int>(keep.size()), space.photon_cap);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_space.dim(), out_space.dim());
    double probability = 0.0;
    std::vector<int> rk(keep.size()), ck(keep.size());
    for (int i = 0; i < space.dim(); ++i) {
        const std::vector<int>& ri = space.states[i];
        for (int j = 0; j < space.dim(); ++j) {
            Complex v = rho.matrix()(i, j);
            if (v == Complex{}) continue;
            const std::vector<int>& cj = space.states[j];
            bool matched = true;
            int total = 0;
            for (int m : modes) {
                if (ri[m] != cj[m]) {
                    matched = false;
                    break;
                }
                total += ri[m];
            }
            if (!matched) continue; // off-diagonal in the measured modes dies under the trace
            double w = threshold_no_click(total, det);
            if (click) w = 1.0 - w;
            for (std::size_t s = 0; s < keep.size(); ++s) {
                rk[s] = ri[keep[s]];
                ck[s] = cj[keep[s]];
            }
            out(out_space.index_of(rk), out_space.index_of(ck)) += w * v;
            if (i == j) probability += (w * v).real();
        }
    }
    return {DensityOperator{std::move(out_space), std::move(out)}, probability};
}

MeasureResult measure_threshold(const DensityOperator& rho, int mode, const DetectorParams& det,
                                bool click) {
    std::array<int, 1> modes{mode};
    return measure_threshold(rho, modes, det, click);
}

// --- network assembly -----------------------------------------------------

ClickPattern ClickPattern::silent(Pol j) {
    ClickPattern p;
    switch (j) {
        case Pol::H: p.d_h = false; break;
        case Pol::V: p.d_v = false; break;
        case Pol::L: p.d_l = false; break;
        case Pol::R: p.d_r = false; break;
    }
    return p;
}

bool ClickPattern::monitor(Pol p) const {
    switch (p) {
        case Pol::H: return d_h;
        case Pol::V: return d_v;
        case Pol::L: return d_l;
        case Pol::R: return d_r;
    }
    return true;
}

namespace {

// Creation-operator rewrites between the linear (H,V) and circular (L,R)
// polarization mode pairs:
//   L^dag = [(1+i) H^dag + (1-i) V^dag]/2,  R^dag = [(1-i) H^dag + (1+i) V^dag]/2.
Eigen::Matrix2cd circular_to_linear() {
    Eigen::Matrix2cd m;
    const Complex p{0.5, 0.5}, q{0.5, -0.5};
    m << p, q, q, p;
    return m;
}

Eigen::Matrix2cd linear_to_circular() { return circular_to_linear().adjoint(); }

} // namespace

NetworkSpec transmitter_network(const sps::SpsPassiveParams& params, const ClickPattern& pattern,
                                Basis output_basis) {
    const DetectorParams det{params.eta_a, params.eps_a};
    NetworkSpec spec;
    for (Pol p : {Pol::H, Pol::V, Pol::L, Pol::R}) {
        const char* name = (p == Pol::H) ? "H" : (p == Pol::V) ? "V" : (p == Pol::L) ? "L" : "R";
        spec.elements.push_back(SourceInput{name, params.dist});
        spec.elements.push_back(LossyTap{name, params.t, det, pattern.monitor(p)});
    }
    if (output_basis == Basis::Linear) {
        spec.elements.push_back(BasisRotation{"L", "R", "cross_1", "cross_2", circular_to_linear()});
        spec.elements.push_back(BalancedCombiner{"H", "cross_1"});
        spec.elements.push_back(BalancedCombiner{"V", "cross_2"});
        spec.elements.push_back(ThresholdMonitor{{"cross_1", "cross_2"}, det, pattern.d});
        spec.output_modes = {"H", "V"};
    } else {
        spec.elements.push_back(BasisRotation{"H", "V", "cross_1", "cross_2", linear_to_circular()});
        spec.elements.push_back(BalancedCombiner{"cross_1", "L"});
        spec.elements.push_back(BalancedCombiner{"cross_2", "R"});
        spec.elements.push_back(ThresholdMonitor{{"L", "R"}, det, pattern.d});
        spec.output_modes = {"cross_1", "cross_2"};
    }
    return spec;
}

namespace {

struct Register {
    std::optional<DensityOperator> rho;
    std::vector<std::string> names;
    double probability = 1.0;
    bool dead = false; // a conditioning step had probability zero

    int index(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return static_cast<int>(i);
        }
        throw ConfigError("network references unknown mode '" + name + "'");
    }
};

struct ElementRunner {
    Register& reg;

    void operator()(const SourceInput& e) {
        DensityOperator source = DensityOperator::photon_number_mixture(e.dist);
        reg.rho = reg.rho ? tensor(*reg.rho, source) : std::move(source);
        reg.names.push_back(e.mode);
    }

    void operator()(const LossyTap& e) {
        if (reg.dead) return;
        if (!(e.transmittance >= 0.0 && e.transmittance <= 1.0)) {
            throw ConfigError("tap transmittance outside [0,1]");
        }
        int idx = reg.index(e.mode);
        reg.rho = tensor(*reg.rho, DensityOperator::vacuum(1));
        int anc = static_cast<int>(reg.names.size());
        reg.rho = apply_beamsplitter(*reg.rho, idx, anc, e.transmittance);
        MeasureResult r = measure_threshold(*reg.rho, anc, e.monitor, e.monitor_click);
        reg.probability *= r.probability;
        if (r.probability <= 0.0) {
            reg.dead = true;
            return;
        }
        r.state.scale(1.0 / r.probability);
        reg.rho = std::move(r.state);
    }

    void operator()(const BasisRotation& e) {
        if (reg.dead) return;
        int a = reg.index(e.mode_a);
        int b = reg.index(e.mode_b);
        reg.rho = apply_mode_transform(*reg.rho, a, b, e.coeffs);
        reg.names[a] = e.new_a;
        reg.names[b] = e.new_b;
    }

    void operator()(const BalancedCombiner& e) {
        if (reg.dead) return;
        reg.rho = apply_beamsplitter(*reg.rho, reg.index(e.mode_a), reg.index(e.mode_b), 0.5);
        // mode_a keeps the transmitted beam; mode_b becomes the monitored arm
    }

    void operator()(const ThresholdMonitor& e) {
        if (reg.dead) return;
        std::vector<int> modes;
        for (const std::string& name : e.modes) modes.push_back(reg.index(name));
        MeasureResult r = measure_threshold(*reg.rho, modes, e.det, e.click);
        reg.probability *= r.probability;
        if (r.probability <= 0.0) {
            reg.dead = true;
            return;
        }
        r.state.scale(1.0 / r.probability);
        reg.rho = std::move(r.state);
        std::sort(modes.begin(), modes.end(), std::greater<>());
        for (int m : modes) reg.names.erase(reg.names.begin() + m);
    }
};

DensityOperator reorder_to(const DensityOperator& rho, const std::vector<std::string>& names,
                           std::span<const std::string> wanted) {
    std::vector<int> order;
    for (const std::string& w : wanted) {
        auto it = std::find(names.begin(), names.end(), w);
        if (it == names.end()) throw ConfigError("network output references unknown mode '" + w + "'");
        order.push_back(static_cast<int>(it - names.begin()));
    }
    if (order.size() != names.size()) {
        throw ConfigError("network output must name every remaining mode");
    }
    const FockSpace& space = rho.space();
    FockSpace out_space = FockSpace::create(space.mode_count, space.photon_cap);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(out_space.dim(), out_space.dim());
    std::vector<int> row(space.mode_count), col(space.mode_count);
    for (int i = 0; i < space.dim(); ++i) {
        for (int j = 0; j < space.dim(); ++j) {
            Complex v = rho.matrix()(i, j);
            if (v == Complex{}) continue;
            for (std::size_t s = 0; s < order.size(); ++s) {
                row[s] = space.states[i][order[s]];
                col[s] = space.states[j][order[s]];
            }
            m(out_space.index_of(row), out_space.index_of(col)) = v;
        }
    }
    return {std::move(out_space), std::move(m)};
}

} // namespace

SimulationResult run_network(const NetworkSpec& spec) {
    Register reg;
    ElementRunner runner{reg};
    for (const NetworkElement& e : spec.elements) {
        std::visit(runner, e);
        if (reg.dead) {
            return {DensityOperator::vacuum(2), 0.0};
        }
    }
    if (!reg.rho) {
        throw ConfigError("network produced no modes");
    }
    std::vector<std::string> wanted(spec.output_modes.begin(), spec.output_modes.end());
    return {reorder_to(*reg.rho, reg.names, wanted), reg.probability};
}

SimulationResult simulate_fig4(const sps::SpsPassiveParams& params, Pol silent) {
    params.validate();
    Basis basis = (silent == Pol::H || silent == Pol::V) ? Basis::Linear : Basis::Circular;
    NetworkSpec spec = transmitter_network(params, ClickPattern::silent(silent), basis);
    if (silent == Pol::V || silent == Pol::R) {
        std::swap(spec.output_modes[0], spec.output_modes[1]); // silent polarization first
    }
    return run_network(spec);
}

OracleQuantities oracle_quantities(const sps::SpsPassiveParams& params, const LinkParams& link,
                                   Pol silent) {
    SimulationResult sim = simulate_fig4(params, silent);
    OracleQuantities out{sim.probability, 0.0, 0.0, 0.0};
    if (sim.probability <= 0.0) return out;
    const double eta = eta_sys(link);
    double p_vac = 0.0, p_one = 0.0, p_dc = 0.0;
    double low = 0.0;
    const FockSpace& space = sim.output.space();
    for (int i = 0; i < space.dim(); ++i) {
        const double pop = sim.output.matrix()(i, i).real();
        if (pop == 0.0) continue;
        const int a = space.states[i][0];
        const int b = space.states[i][1];
        BobPovm povm = bob_povm_coefficients(a, b, eta, link.epsilon_bob);
        p_vac += pop * povm.p_vac;
        p_one += pop * povm.p_one;
        p_dc += pop * povm.p_double;
        if (a + b <= 1) low += pop;
    }
    out.gain = 1.0 - p_vac;
    out.qber = (p_one + 0.5 * p_dc) / out.gain;
    out.p_multi = 1.0 - low;
    return out;
}

double check_basis_independence(double omega, const QuadratureSpec& spec) {
    constexpr double kPi = std::numbers::pi;
    if (!(omega >= 0.0 && omega <= kPi / 4.0)) {
        throw std::domain_error("check_basis_independence: omega outside [0, pi/4]");
    }
    const double half_arc = kPi / 4.0 - omega;

    // Single-photon projector entries in the +-45 mode basis:
    // |1_theta> = (a_+^dag + e^{i theta} a_-^dag)/sqrt(2) |vac>.
    auto accumulate = [&](double center, Eigen::Matrix2cd& m) {
        if (half_arc <= 0.0) return;
        double a = center - half_arc;
        double b = center + half_arc;
        double diag = integrate([](double) { return 0.5; }, a, b, spec);
        double re = integrate([](double th) { return 0.5 * std::cos(th); }, a, b, spec);
        double im = integrate([](double th) { return 0.5 * std::sin(th); }, a, b, spec);
        m(0, 0) += Complex{diag, 0.0};
        m(1, 1) += Complex{diag, 0.0};
        m(0, 1) += Complex{re, -im};
        m(1, 0) += Complex{re, im};
    };

    Eigen::Matrix2cd linear = Eigen::Matrix2cd::Zero();
    accumulate(0.0, linear);      // horizontal arc
    accumulate(kPi, linear);      // vertical arc
    Eigen::Matrix2cd circular = Eigen::Matrix2cd::Zero();
    accumulate(kPi / 2.0, circular);
    accumulate(3.0 * kPi / 2.0, circular);

    // Both pair-sums must equal ((pi - 4 omega)/2) * identity; note the full
    // circle integrates to pi * identity, fixing the constant.
    Eigen::Matrix2cd target = (kPi - 4.0 * omega) / 2.0 * Eigen::Matrix2cd::Identity();
    double dev = (linear - target).cwiseAbs().maxCoeff();
    dev = std::max(dev, (circular - target).cwiseAbs().maxCoeff());
    dev = std::max(dev, (linear - circular).cwiseAbs().maxCoeff());
    return dev;
}

} // namespace pbb84::fock
