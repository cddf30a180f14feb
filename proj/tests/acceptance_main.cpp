// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Golden sweep CSVs are diffed against tests/golden; set
// PBB84_REGEN_GOLDEN=1 to rewrite them after an intentional change.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pbb84/channel.hpp"
#include "pbb84/coherent.hpp"
#include "pbb84/config.hpp"
#include "pbb84/engine.hpp"
#include "pbb84/fock.hpp"
#include "pbb84/sps.hpp"

using namespace pbb84;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << "\n";
    if (!pass) ++g_failures;
}

bool within(double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// --- criteria 1-3: coherent transmitter ------------------------------------

void coherent_criteria() {
    auto start = Clock::now();
    engine::SweepConfig passive = config::preset("coherent-passive");
    double cut_passive = engine::cutoff(passive);
    double elapsed = seconds_since(start);
    report(1, within(cut_passive, 67.5, 1.0) && elapsed < 60.0,
           "coherent passive cutoff " + fmt(cut_passive) + " km (target 67.5 +- 1.0), " +
               fmt(elapsed) + " s (< 60 s)");

    coherent::CoherentOptimum at_zero = coherent::optimize(0.0, passive.link);
    bool inset_zero = within(at_zero.mu, 0.084, 0.0084) && within(at_zero.omega, 0.365, 0.0365);
    coherent::CoherentOptimum near_cut = coherent::optimize(cut_passive - 0.5, passive.link);
    bool inset_cut = within(near_cut.mu, 4e-3, 0.15 * 4e-3) && within(near_cut.omega, 0.76, 0.15 * 0.76);
    report(2, inset_zero && inset_cut,
           "optimized endpoints: mu(0)=" + fmt(at_zero.mu) + ", omega(0)=" + fmt(at_zero.omega) +
               "; near cutoff mu=" + fmt(near_cut.mu) + ", omega=" + fmt(near_cut.omega));

    engine::SweepConfig active = config::preset("coherent-active");
    double cut_active = engine::cutoff(active);
    report(3, std::abs(cut_active - cut_passive) <= 1.5,
           "active cutoff " + fmt(cut_active) + " km vs passive " + fmt(cut_passive) +
               " km (|diff| <= 1.5)");
}

// --- criterion 4: SPS cutoffs ----------------------------------------------

void sps_cutoff_criteria() {
    struct Case {
        const char* preset;
        double target;
    };
    const Case cases[] = {
        {"sps-ideal-a100", 201.7},
        {"sps-ideal-a50", 179.3},
        {"sps-ideal-a10", 162.5},
        {"sps-ideal-active", 203.0},
    };
    bool all = true;
    std::string detail;
    for (const Case& c : cases) {
        double cut = engine::cutoff(config::preset(c.preset));
        bool ok = within(cut, c.target, 2.0);
        all = all && ok;
        detail += std::string(c.preset) + "=" + fmt(cut) + " (target " + fmt(c.target) + "+-2) ";
    }
    report(4, all, detail);
}

// --- criterion 5: photon statistics -----------------------------------------

void stats_criterion() {
    sps::PhotonStats low = sps::photon_stats(sps::SourceDistribution({0.0099, 0.9882, 0.0019}));
    sps::PhotonStats high = sps::photon_stats(sps::SourceDistribution({0.2, 0.785, 0.015}));
    bool ok = within(low.n_bar, 0.992, 5e-4) && within(low.g2, 0.0039, 5e-5) &&
              within(high.n_bar, 0.815, 5e-4) && within(high.g2, 0.0452, 5e-5);
    report(5, ok,
           "n_bar=" + fmt(low.n_bar) + ", g2=" + fmt(low.g2) + "; n_bar=" + fmt(high.n_bar) +
               ", g2=" + fmt(high.g2) + " (printed-precision match)");
}

// --- criterion 6: active-SPS slope changes ----------------------------------

double slope_change_distance(const sps::SourceDistribution& dist, double hi) {
    LinkParams link;
    auto attenuating = [&](double d) {
        sps::ActiveSpsOptimum opt = sps::optimize_tau(d, dist, link);
        return opt.rate > 0.0 && opt.tau < 0.9999;
    };
    double lo = 0.0;
    if (attenuating(lo) || !attenuating(hi)) return -1.0;
    while (hi - lo > 0.05) {
        double mid = 0.5 * (lo + hi);
        if (attenuating(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void slope_change_criterion() {
    double low_vac = slope_change_distance(sps::SourceDistribution({0.0099, 0.9882, 0.0019}), 100.0);
    double high_vac = slope_change_distance(sps::SourceDistribution({0.2, 0.785, 0.015}), 60.0);
    bool ok = within(low_vac, 71.0, 3.0) && within(high_vac, 22.0, 3.0);
    report(6, ok,
           "optimal attenuation leaves tau=1 at " + fmt(low_vac) + " km (target 71+-3) and " +
               fmt(high_vac) + " km (target 22+-3)");
}

// --- criterion 7: oracle equivalence -----------------------------------------

void oracle_criterion() {
    auto start = Clock::now();
    engine::AuditReport audit = engine::audit_oracle();
    double elapsed = seconds_since(start);
    report(7, audit.pass() && audit.rows.size() >= 100 && elapsed < 300.0,
           "max |closed-form - oracle| = " + fmt(audit.max_deviation()) + " over " +
               std::to_string(audit.rows.size()) + " cells (<= 1e-9), " + fmt(elapsed) +
               " s (< 300 s)");
}

// --- criterion 8: property suites --------------------------------------------

void property_criterion() {
    bool ok = true;
    std::string detail;

    // u/q marginal identity to 1e-12
    double worst_marginal = 0.0;
    for (const sps::SourceDistribution& dist :
         {sps::SourceDistribution::ideal(), sps::SourceDistribution({0.0099, 0.9882, 0.0019}),
          sps::SourceDistribution({0.2, 0.785, 0.015})}) {
        for (double t : {0.1, 0.5, 0.9}) {
            for (double eta : {0.1, 1.0}) {
                for (double eps : {0.0, 1e-3}) {
                    sps::SpsPassiveParams params{t, dist, eta, eps};
                    double total = 0.0;
                    for (int n = 0; n <= dist.nmax(); ++n) {
                        total += sps::u_coeff(n, params) + sps::q_coeff(n, params);
                    }
                    worst_marginal = std::max(worst_marginal, std::abs(total - 1.0));
                }
            }
        }
    }
    ok = ok && worst_marginal <= 1e-12;
    detail += "sum(u+q)-1 max " + fmt(worst_marginal) + "; ";

    // Bob POVM completeness, exact
    bool povm_exact = true;
    for (int n = 0; n <= 5 && povm_exact; ++n) {
        for (int m = 0; m <= 5 && povm_exact; ++m) {
            for (double eta : {0.0, 0.3, 1.0}) {
                for (double eps : {0.0, 1e-6, 0.1}) {
                    BobPovm p = bob_povm_coefficients(n, m, eta, eps);
                    if (((p.p_vac + p.p_zero) + p.p_one) + p.p_double != 1.0) povm_exact = false;
                }
            }
        }
    }
    ok = ok && povm_exact;
    detail += std::string("povm sums exact: ") + (povm_exact ? "yes" : "no") + "; ";

    // basis independence at the named acceptance margins
    double worst_basis = 0.0;
    for (double omega : {0.0, 0.2, 0.365, 0.7}) {
        worst_basis = std::max(worst_basis, fock::check_basis_independence(omega));
    }
    ok = ok && worst_basis <= 1e-10;
    detail += "basis-independence max dev " + fmt(worst_basis) + "; ";

    // evenness of the angular error rate
    LinkParams link;
    bool even = true;
    for (double theta : {0.1, 0.5, 0.77}) {
        if (coherent::qber_theta(theta, 0.1, link) != coherent::qber_theta(-theta, 0.1, link)) {
            even = false;
        }
    }
    ok = ok && even;
    detail += std::string("E_theta even: ") + (even ? "yes" : "no") + "; ";

    // averaged QBER non-increasing in omega at eps_B = 0
    LinkParams clean;
    clean.epsilon_bob = 0.0;
    bool monotone = true;
    double prev = 1.0;
    for (double omega : {0.0, 0.2, 0.4, 0.6, 0.75}) {
        double e = coherent::qber_average({0.1, omega}, clean.at_distance(20.0));
        if (e > prev + 1e-15) monotone = false;
        prev = e;
    }
    ok = ok && monotone;
    detail += std::string("avg QBER monotone in omega: ") + (monotone ? "yes" : "no") + "; ";

    // one-laser scenario is exactly half the two-laser rate
    engine::SweepConfig two = config::preset("coherent-passive");
    two.grid_stop_km = 30.0;
    two.grid_step_km = 10.0;
    engine::SweepConfig one = two;
    one.scenario = engine::Scenario::CoherentOneLaser;
    std::vector<engine::RatePoint> p2 = engine::sweep(two);
    std::vector<engine::RatePoint> p1 = engine::sweep(one);
    bool halved = p1.size() == p2.size();
    for (std::size_t i = 0; halved && i < p1.size(); ++i) {
        if (p1[i].rate != 0.5 * p2[i].rate) halved = false;
    }
    ok = ok && halved;
    detail += std::string("one-laser rate exactly half: ") + (halved ? "yes" : "no");

    report(8, ok, detail);
}

// --- criterion 9: determinism -------------------------------------------------

void determinism_criterion() {
    engine::SweepConfig cfg = config::preset("coherent-passive");
    cfg.grid_stop_km = 25.0;
    cfg.grid_step_km = 5.0;
    std::string first = engine::to_csv(cfg.scenario, engine::sweep(cfg));
    std::string second = engine::to_csv(cfg.scenario, engine::sweep(cfg));
    report(9, first == second,
           "two sweep runs produce byte-identical CSV (" + std::to_string(first.size()) +
               " bytes)");
}

// --- golden curve regression ----------------------------------------------------

struct GoldenCase {
    const char* name;
    const char* preset;
    double stop, step;
};

const GoldenCase kGoldenCases[] = {
    {"coherent_passive.csv", "coherent-passive", 65.0, 5.0},
    {"sps_ideal_a50.csv", "sps-ideal-a50", 175.0, 25.0},
    {"sps_lowvac_active.csv", "sps-lowvac-active", 120.0, 20.0},
    {"sps_highvac_a100.csv", "sps-highvac-a100", 140.0, 20.0},
};

void golden_curves() {
    const bool regen = std::getenv("PBB84_REGEN_GOLDEN") != nullptr;
    bool all = true;
    std::string detail;
    for (const GoldenCase& c : kGoldenCases) {
        engine::SweepConfig cfg = config::preset(c.preset);
        cfg.grid_stop_km = c.stop;
        cfg.grid_step_km = c.step;
        std::vector<engine::RatePoint> points = engine::sweep(cfg);
        std::string csv = engine::to_csv(cfg.scenario, points);
        std::string path = std::string(PBB84_GOLDEN_DIR) + "/" + c.name;
        if (regen) {
            std::ofstream out(path, std::ios::binary);
            out << csv;
            detail += std::string(c.name) + " regenerated; ";
            continue;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            all = false;
            detail += std::string(c.name) + " missing; ";
            continue;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        std::vector<engine::RatePoint> golden = engine::parse_csv(ss.str());
        bool match = golden.size() == points.size();
        for (std::size_t i = 0; match && i < points.size(); ++i) {
            if (points[i].distance_km != golden[i].distance_km) match = false;
            double rate_tol = 1e-6 * std::max(std::abs(golden[i].rate), 1e-12);
            if (std::abs(points[i].rate - golden[i].rate) > rate_tol) match = false;
            for (std::size_t j = 0; match && j < points[i].params.size(); ++j) {
                double span = std::max(std::abs(golden[i].params[j]), 1e-6);
                if (std::abs(points[i].params[j] - golden[i].params[j]) > 0.01 * span) match = false;
            }
        }
        all = all && match;
        detail += std::string(c.name) + (match ? " ok; " : " DIFFERS; ");
    }
    report(10, all, "golden curves: " + detail);
}

} // namespace

int main() {
    std::cout.setf(std::ios::unitbuf); // keep progress visible under ctest
    auto start = Clock::now();
    coherent_criteria();
    sps_cutoff_criteria();
    stats_criterion();
    slope_change_criterion();
    oracle_criterion();
    property_criterion();
    determinism_criterion();
    golden_curves();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(g_failures))
              << " (total " << fmt(seconds_since(start)) << " s)\n";
    return g_failures == 0 ? 0 : 1;
}
