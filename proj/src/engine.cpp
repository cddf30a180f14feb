#include "pbb84/engine.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pbb84/coherent.hpp"
#include "pbb84/fock.hpp"
#include "pbb84/math.hpp"

namespace pbb84::engine {

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::CoherentPassive: return "coherent-passive";
        case Scenario::CoherentActive: return "coherent-active";
        case Scenario::CoherentOneLaser: return "coherent-one-laser";
        case Scenario::SpsPassive: return "sps-passive";
        case Scenario::SpsActive: return "sps-active";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::CoherentPassive, Scenario::CoherentActive,
                       Scenario::CoherentOneLaser, Scenario::SpsPassive, Scenario::SpsActive}) {
        if (scenario_name(s) == name) return s;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

void SweepConfig::validate() const {
    link.validate();
    if (!(grid_step_km > 0.0)) throw ConfigError("grid.step must be > 0");
    if (grid_start_km < 0.0) throw ConfigError("grid.start must be >= 0");
    switch (scenario) {
        case Scenario::CoherentPassive:
        case Scenario::CoherentOneLaser:
            if (!optimize) {
                if (!(mu > 0.0)) throw ConfigError("coherent.mu must be > 0");
                if (!(omega >= 0.0 && omega <= std::atan(1.0))) {
                    throw ConfigError("coherent.omega must lie in [0, pi/4]");
                }
            }
            break;
        case Scenario::CoherentActive:
            if (!optimize && !(mu > 0.0)) throw ConfigError("coherent.mu must be > 0");
            break;
        case Scenario::SpsPassive:
            sps::SpsPassiveParams{t, dist, eta_a, eps_a}.validate();
            break;
        case Scenario::SpsActive:
            dist.validate();
            if (!optimize && !(tau > 0.0 && tau <= 1.0)) {
                throw ConfigError("sps.tau must lie in (0,1]");
            }
            break;
    }
}

std::vector<std::string> param_column_names(Scenario s) {
    switch (s) {
        case Scenario::CoherentPassive:
        case Scenario::CoherentOneLaser: return {"mu", "omega"};
        case Scenario::CoherentActive: return {"mu"};
        case Scenario::SpsPassive: return {"t"};
        case Scenario::SpsActive: return {"tau"};
    }
    return {};
}

namespace {

RateBreakdownRow row_from(const coherent::CoherentRateBreakdown& b) {
    return {b.p_acc, b.gain, b.qber, b.p_multi, b.e1};
}

RateBreakdownRow row_from(const sps::SpsRateBreakdown& b) {
    return {b.p_acc, b.gain, b.qber, b.p_multi, b.e1};
}

} // namespace

RatePoint evaluate_point(const SweepConfig& config, double distance_km) {
    const LinkParams at = config.link.at_distance(distance_km);
    RatePoint point;
    point.distance_km = distance_km;
    switch (config.scenario) {
        case Scenario::CoherentPassive:
        case Scenario::CoherentOneLaser: {
            coherent::CoherentPassiveParams p{config.mu, config.omega};
            if (config.optimize) {
                coherent::CoherentOptimum opt = coherent::optimize(distance_km, config.link);
                p = {opt.mu, opt.omega};
                if (opt.rate <= 0.0) {
                    point.params = {opt.mu, opt.omega};
                    return point;
                }
            }
            coherent::CoherentRateBreakdown b = coherent::key_rate(p, at);
            point.params = {p.mu, p.omega};
            point.breakdown = row_from(b);
            point.rate = b.rate;
            if (config.scenario == Scenario::CoherentOneLaser) {
                point.rate = 0.5 * b.rate; // half the pulses are blocked
            }
            return point;
        }
        case Scenario::CoherentActive: {
            double mu = config.mu;
            if (config.optimize) {
                coherent::ActiveWcpOptimum opt = coherent::optimize_active(distance_km, config.link);
                mu = opt.mu;
                if (opt.rate <= 0.0) {
                    point.params = {mu};
                    return point;
                }
            }
            coherent::CoherentRateBreakdown b = coherent::active_wcp_rate(mu, at);
            point.params = {mu};
            point.breakdown = row_from(b);
            point.rate = b.rate;
            return point;
        }
        case Scenario::SpsPassive: {
            double t = config.t;
            if (config.optimize) {
                sps::SpsOptimum opt =
                    sps::optimize_t(distance_km, config.dist, config.eta_a, config.eps_a, config.link);
                t = opt.t;
                if (opt.rate <= 0.0) {
                    point.params = {t};
                    return point;
                }
            }
            sps::SpsRateBreakdown b =
                sps::sps_key_rate({t, config.dist, config.eta_a, config.eps_a}, at);
            point.params = {t};
            point.breakdown = row_from(b);
            point.rate = b.rate;
            return point;
        }
        case Scenario::SpsActive: {
            double tau = config.tau;
            if (config.optimize) {
                sps::ActiveSpsOptimum opt = sps::optimize_tau(distance_km, config.dist, config.link);
                tau = opt.tau;
                if (opt.rate <= 0.0) {
                    point.params = {tau};
                    return point;
                }
            }
            sps::SpsRateBreakdown b = sps::active_sps_rate(config.dist, tau, at);
            point.params = {tau};
            point.breakdown = row_from(b);
            point.rate = b.rate;
            return point;
        }
    }
    throw ConfigError("unhandled scenario");
}

std::vector<RatePoint> sweep(const SweepConfig& config) {
    config.validate();
    std::vector<RatePoint> points;
    const double span = config.grid_stop_km - config.grid_start_km;
    if (span < 0.0) return points; // empty grid
    const long count = static_cast<long>(std::floor(span / config.grid_step_km + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
        double d = config.grid_start_km + static_cast<double>(i) * config.grid_step_km;
        points.push_back(evaluate_point(config, d));
    }
    return points;
}

double cutoff(const SweepConfig& config) {
    config.validate();
    if (config.grid_stop_km < config.grid_start_km) return 0.0;
    auto rate_at = [&](double d) { return evaluate_point(config, d).rate; };
    double d = config.grid_start_km;
    if (!(rate_at(d) > 0.0)) return 0.0;
    double lo = d;
    double hi = -1.0;
    while (d < config.grid_stop_km) {
        d = std::min(d + config.grid_step_km, config.grid_stop_km);
        if (rate_at(d) > 0.0) {
            lo = d;
        } else {
            hi = d;
            break;
        }
    }
    if (hi < 0.0) return config.grid_stop_km; // still positive at the grid end
    return find_zero_crossing(rate_at, lo, hi, 0.01);
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v); // shortest round-trip form
    out.append(buf, res.ptr);
}

double parse_double(std::string_view field) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw ConfigError("csv: malformed numeric field '" + std::string(field) + "'");
    }
    return v;
}

} // namespace

std::string to_csv(Scenario scenario, const std::vector<RatePoint>& points) {
    std::string out = "distance_km,rate";
    for (const std::string& name : param_column_names(scenario)) {
        out += "," + name;
    }
    out += ",p_acc,gain,qber,p_multi,e1\n";
    for (const RatePoint& p : points) {
        append_double(out, p.distance_km);
        out.push_back(',');
        append_double(out, p.rate);
        for (double v : p.params) {
            out.push_back(',');
            append_double(out, v);
        }
        for (double v : {p.breakdown.p_acc, p.breakdown.gain, p.breakdown.qber,
                         p.breakdown.p_multi, p.breakdown.e1}) {
            out.push_back(',');
            append_double(out, v);
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<RatePoint> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("csv: missing header");
    int columns = 1;
    for (char c : line) columns += (c == ',');
    const int n_params = columns - 7; // distance, rate, params..., 5 breakdown fields
    if (n_params < 0) throw ConfigError("csv: too few columns");

    std::vector<RatePoint> points;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view sv = line;
        while (true) {
            auto pos = sv.find(',');
            fields.push_back(sv.substr(0, pos));
            if (pos == std::string_view::npos) break;
            sv.remove_prefix(pos + 1);
        }
        if (static_cast<int>(fields.size()) != columns) {
            throw ConfigError("csv: row has wrong number of fields");
        }
        RatePoint p;
        p.distance_km = parse_double(fields[0]);
        p.rate = parse_double(fields[1]);
        for (int i = 0; i < n_params; ++i) p.params.push_back(parse_double(fields[2 + i]));
        p.breakdown.p_acc = parse_double(fields[2 + n_params]);
        p.breakdown.gain = parse_double(fields[3 + n_params]);
        p.breakdown.qber = parse_double(fields[4 + n_params]);
        p.breakdown.p_multi = parse_double(fields[5 + n_params]);
        p.breakdown.e1 = parse_double(fields[6 + n_params]);
        points.push_back(std::move(p));
    }
    return points;
}

AuditGrid AuditGrid::standard() {
    AuditGrid g;
    g.dists = {sps::SourceDistribution::ideal(),
               sps::SourceDistribution({0.0099, 0.9882, 0.0019})};
    g.ts = {0.1, 0.25, 0.5, 0.75, 0.9};
    g.eta_as = {0.1, 0.5, 1.0};
    g.eps_as = {0.0, 1e-6, 1e-3};
    g.eta_sys_values = {1e-4, 0.05};
    g.eps_bs = {0.0, 1e-6};
    return g;
}

double AuditRow::max_dev() const {
    return std::max(std::max(dev_n, dev_gain), std::max(dev_qber, dev_p_multi));
}

double AuditReport::max_deviation() const {
    double m = 0.0;
    for (const AuditRow& r : rows) m = std::max(m, r.max_dev());
    return m;
}

AuditReport audit_oracle(const AuditGrid& grid) {
    AuditReport report;
    for (std::size_t di = 0; di < grid.dists.size(); ++di) {
        for (double t : grid.ts) {
            for (double eta_a : grid.eta_as) {
                for (double eps_a : grid.eps_as) {
                    sps::SpsPassiveParams params{t, grid.dists[di], eta_a, eps_a};
                    const double n_closed = sps::normalization(params);
                    const double pm_closed = n_closed > 0.0 ? sps::sps_p_multi(params) : 0.0;
                    // The simulated output state does not depend on the link,
                    // so reuse it across the (eta_sys, eps_b) subgrid.
                    fock::SimulationResult sim = fock::simulate_fig4(params, fock::Pol::H);
                    for (double eta_sys_v : grid.eta_sys_values) {
                        for (double eps_b : grid.eps_bs) {
                            LinkParams link;
                            link.alpha_db_per_km = 0.0;
                            link.eta_bob = eta_sys_v;
                            link.epsilon_bob = eps_b;
                            AuditRow row;
                            row.dist_index = static_cast<int>(di);
                            row.t = t;
                            row.eta_a = eta_a;
                            row.eps_a = eps_a;
                            row.eta_sys_v = eta_sys_v;
                            row.eps_b = eps_b;
                            row.dev_n = std::abs(n_closed - sim.probability);
                            if (sim.probability > 0.0) {
                                double p_vac = 0.0, p_one = 0.0, p_dc = 0.0, low = 0.0;
                                const fock::FockSpace& space = sim.output.space();
                                for (int i = 0; i < space.dim(); ++i) {
                                    double pop = sim.output.matrix()(i, i).real();
                                    if (pop == 0.0) continue;
                                    BobPovm povm = bob_povm_coefficients(
                                        space.states[i][0], space.states[i][1], eta_sys_v, eps_b);
                                    p_vac += pop * povm.p_vac;
                                    p_one += pop * povm.p_one;
                                    p_dc += pop * povm.p_double;
                                    if (space.states[i][0] + space.states[i][1] <= 1) low += pop;
                                }
                                const double q_oracle = 1.0 - p_vac;
                                row.dev_gain = std::abs(sps::sps_gain(params, link) - q_oracle);
                                row.dev_p_multi = std::abs(pm_closed - (1.0 - low));
                                if (q_oracle > 0.0) {
                                    row.dev_qber = std::abs(sps::sps_qber(params, link) -
                                                            (p_one + 0.5 * p_dc) / q_oracle);
                                }
                            }
                            report.rows.push_back(row);
                        }
                    }
                }
            }
        }
    }
    return report;
}

void write_audit_report(std::ostream& os, const AuditReport& report) {
    os << "cells," << report.rows.size() << "\n";
    os << "threshold," << report.threshold << "\n";
    os << "max_deviation," << report.max_deviation() << "\n";
    os << "dist_index,t,eta_a,eps_a,eta_sys,eps_b,dev_n,dev_gain,dev_qber,dev_p_multi\n";
    for (const AuditRow& r : report.rows) {
        os << r.dist_index << ',' << r.t << ',' << r.eta_a << ',' << r.eps_a << ','
           << r.eta_sys_v << ',' << r.eps_b << ',' << r.dev_n << ',' << r.dev_gain << ','
           << r.dev_qber << ',' << r.dev_p_multi << "\n";
    }
}

} // namespace pbb84::engine
