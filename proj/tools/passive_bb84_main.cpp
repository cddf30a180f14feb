// Command-line front end: distance sweeps, cutoff search, per-distance
// optimization, oracle audits and source statistics, all driven by presets
// and/or a key-value config file. CSV goes to stdout or --out.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pbb84/config.hpp"
#include "pbb84/engine.hpp"
#include "pbb84/errors.hpp"
#include "pbb84/sps.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitAuditFailure = 3;

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (key = value with [sections])");
    cmd->add_option("--preset", opts.preset_name, "Named preset to start from");
    cmd->add_option("--out", opts.out_path, "Write output to this file instead of stdout");
}

pbb84::engine::SweepConfig resolve(const CommonOpts& opts) {
    pbb84::engine::SweepConfig cfg;
    if (!opts.preset_name.empty()) {
        cfg = pbb84::config::preset(opts.preset_name);
    }
    if (!opts.config_path.empty()) {
        cfg = pbb84::config::load_config_file(cfg, opts.config_path);
    }
    cfg.validate();
    return cfg;
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw pbb84::ConfigError("cannot open output file '" + opts.out_path + "'");
    out << text;
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v); // shortest round-trip form
    return std::string(buf, res.ptr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secret-key rates for passive BB84 transmitters"};
    app.require_subcommand(1);

    CommonOpts sweep_opts, cutoff_opts, optimize_opts, audit_opts, stats_opts;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Rate vs distance as CSV");
    add_common(sweep_cmd, sweep_opts);
    CLI::App* cutoff_cmd = app.add_subcommand("cutoff", "Largest distance with positive rate");
    add_common(cutoff_cmd, cutoff_opts);
    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "Optimized operating point at the grid start distance");
    add_common(optimize_cmd, optimize_opts);
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "Check closed forms against the Fock-space oracle");
    add_common(audit_cmd, audit_opts);
    CLI::App* stats_cmd = app.add_subcommand("stats", "Photon statistics of the configured source");
    add_common(stats_cmd, stats_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) {
            auto cfg = resolve(sweep_opts);
            emit(sweep_opts, pbb84::engine::to_csv(cfg.scenario, pbb84::engine::sweep(cfg)));
        } else if (cutoff_cmd->parsed()) {
            auto cfg = resolve(cutoff_opts);
            emit(cutoff_opts, "cutoff_km\n" + format_double(pbb84::engine::cutoff(cfg)) + "\n");
        } else if (optimize_cmd->parsed()) {
            auto cfg = resolve(optimize_opts);
            cfg.optimize = true;
            auto point = pbb84::engine::evaluate_point(cfg, cfg.grid_start_km);
            emit(optimize_opts, pbb84::engine::to_csv(cfg.scenario, {point}));
        } else if (audit_cmd->parsed()) {
            if (!audit_opts.config_path.empty() || !audit_opts.preset_name.empty()) {
                resolve(audit_opts); // validate, the audit grid itself is fixed
            }
            auto report = pbb84::engine::audit_oracle();
            std::ostringstream os;
            pbb84::engine::write_audit_report(os, report);
            emit(audit_opts, os.str());
            if (!report.pass()) {
                std::cerr << "audit: max deviation " << report.max_deviation()
                          << " exceeds threshold " << report.threshold << "\n";
                return kExitAuditFailure;
            }
        } else if (stats_cmd->parsed()) {
            auto cfg = resolve(stats_opts);
            auto stats = pbb84::sps::photon_stats(cfg.dist);
            emit(stats_opts,
                 "n_bar,g2\n" + format_double(stats.n_bar) + "," + format_double(stats.g2) + "\n");
        }
    } catch (const pbb84::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pbb84::NonConvergenceError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
