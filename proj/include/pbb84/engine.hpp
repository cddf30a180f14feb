#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbb84/channel.hpp"
#include "pbb84/sps.hpp"

namespace pbb84::engine {

enum class Scenario {
    CoherentPassive,
    CoherentActive,
    CoherentOneLaser,
    SpsPassive,
    SpsActive,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name); // throws ConfigError

/// Everything one run needs: scenario, link constants, source parameters and
/// the distance grid. Fixed-parameter runs use mu/omega (coherent), t
/// (sps-passive) or tau (sps-active) directly; optimized runs ignore them.
struct SweepConfig {
    Scenario scenario = Scenario::CoherentPassive;
    LinkParams link;
    double grid_start_km = 0.0;
    double grid_stop_km = 100.0;
    double grid_step_km = 1.0;
    bool optimize = true;

    double mu = 0.1;
    double omega = 0.35;

    sps::SourceDistribution dist = sps::SourceDistribution::ideal();
    double eta_a = 1.0;
    double eps_a = 1e-6;
    double t = 0.25;
    double tau = 1.0;

    void validate() const; // throws ConfigError naming the offending field
};

struct RateBreakdownRow {
    double p_acc = 0.0;
    double gain = 0.0;
    double qber = 0.0;
    double p_multi = 0.0;
    double e1 = 1.0;
};

/// One distance sample: the rate, the (possibly optimized) scenario
/// parameters in the column order of param_column_names, and the breakdown.
struct RatePoint {
    double distance_km = 0.0;
    double rate = 0.0;
    std::vector<double> params;
    RateBreakdownRow breakdown;
};

std::vector<std::string> param_column_names(Scenario s);

/// Evaluate the configured scenario on the distance grid.
std::vector<RatePoint> sweep(const SweepConfig& config);

/// Evaluate a single distance (the scenario's optimizer when
/// config.optimize is set).
RatePoint evaluate_point(const SweepConfig& config, double distance_km);

/// Largest distance with positive rate, resolved to 0.01 km by bisection
/// after a grid march. Returns 0 when the rate is nonpositive already at the
/// grid start; the search is bounded by grid_stop_km.
double cutoff(const SweepConfig& config);

/// CSV with a mandatory header and round-trip-exact decimal doubles.
std::string to_csv(Scenario scenario, const std::vector<RatePoint>& points);
std::vector<RatePoint> parse_csv(const std::string& text); // throws ConfigError

// --- oracle audit ----------------------------------------------------------

struct AuditGrid {
    std::vector<sps::SourceDistribution> dists;
    std::vector<double> ts;
    std::vector<double> eta_as;
    std::vector<double> eps_as;
    std::vector<double> eta_sys_values;
    std::vector<double> eps_bs;

    static AuditGrid standard(); // >= 100 comparison cells, nmax <= 2
};

struct AuditRow {
    int dist_index = 0;
    double t = 0.0, eta_a = 0.0, eps_a = 0.0, eta_sys_v = 0.0, eps_b = 0.0;
    double dev_n = 0.0, dev_gain = 0.0, dev_qber = 0.0, dev_p_multi = 0.0;

    double max_dev() const;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    double threshold = 1e-9;

    double max_deviation() const;
    bool pass() const { return max_deviation() <= threshold; }
};

/// Compare the closed-form N, Q, E, p_multi against the Fock-space oracle on
/// every grid cell.
AuditReport audit_oracle(const AuditGrid& grid = AuditGrid::standard());

void write_audit_report(std::ostream& os, const AuditReport& report);

} // namespace pbb84::engine
