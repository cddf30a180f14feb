#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pbb84/config.hpp"
#include "pbb84/engine.hpp"
#include "pbb84/math.hpp"
#include "pbb84/rate.hpp"

using namespace pbb84;
using namespace pbb84::engine;

TEST_CASE("config text round-trips through the parser") {
    SweepConfig cfg = config::preset("sps-lowvac-a50");
    cfg.grid_step_km = 2.5;
    std::string text = config::to_config_text(cfg);
    SweepConfig parsed = config::apply_config_text(SweepConfig{}, text);
    CHECK(parsed.scenario == cfg.scenario);
    CHECK(parsed.eta_a == cfg.eta_a);
    CHECK(parsed.grid_step_km == cfg.grid_step_km);
    CHECK(parsed.dist.probs == cfg.dist.probs);
}

TEST_CASE("config errors carry the offending key") {
    CHECK_THROWS_WITH_AS(config::apply_config_text(SweepConfig{}, "bogus = 1\n"),
                         "config: unknown key 'bogus'", ConfigError);
    CHECK_THROWS_AS(config::apply_config_text(SweepConfig{}, "[link]\nalpha = fast\n"),
                    ConfigError);
    CHECK_THROWS_AS(config::preset("no-such-preset"), ConfigError);
    SweepConfig bad = config::preset("coherent-passive");
    bad.grid_step_km = 0.0;
    CHECK_THROWS_WITH_AS(bad.validate(), "grid.step must be > 0", ConfigError);
}

TEST_CASE("comments and sections parse") {
    SweepConfig cfg = config::apply_config_text(SweepConfig{},
                                                "# full run\n"
                                                "scenario = sps-active\n"
                                                "[grid]\n"
                                                "start = 5 # km\n"
                                                "stop = 9\n"
                                                "[source]\n"
                                                "p = 0.2, 0.785, 0.015\n");
    CHECK(cfg.scenario == Scenario::SpsActive);
    CHECK(cfg.grid_start_km == 5.0);
    CHECK(cfg.dist.probs.size() == 3);
    CHECK(cfg.dist.probs[1] == 0.785);
}

TEST_CASE("sweep emits one point per grid distance and respects empty grids") {
    SweepConfig cfg = config::preset("coherent-passive");
    cfg.optimize = false;
    cfg.mu = 0.08;
    cfg.omega = 0.36;
    cfg.grid_start_km = 0.0;
    cfg.grid_stop_km = 5.0;
    cfg.grid_step_km = 1.0;
    std::vector<RatePoint> points = sweep(cfg);
    REQUIRE(points.size() == 6);
    CHECK(points.front().distance_km == 0.0);
    CHECK(points.back().distance_km == 5.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].rate <= points[i - 1].rate + 1e-15);
    }

    cfg.grid_stop_km = cfg.grid_start_km;
    CHECK(sweep(cfg).size() == 1);
}

TEST_CASE("csv round-trip reproduces every field exactly") {
    SweepConfig cfg = config::preset("sps-ideal-a100");
    cfg.optimize = false;
    cfg.t = 0.25;
    cfg.grid_stop_km = 4.0;
    cfg.grid_step_km = 2.0;
    std::vector<RatePoint> points = sweep(cfg);
    std::string csv = to_csv(cfg.scenario, points);
    std::vector<RatePoint> parsed = parse_csv(csv);
    REQUIRE(parsed.size() == points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(parsed[i].distance_km == points[i].distance_km);
        CHECK(parsed[i].rate == points[i].rate);
        REQUIRE(parsed[i].params.size() == points[i].params.size());
        for (std::size_t j = 0; j < points[i].params.size(); ++j) {
            CHECK(parsed[i].params[j] == points[i].params[j]);
        }
        CHECK(parsed[i].breakdown.p_acc == points[i].breakdown.p_acc);
        CHECK(parsed[i].breakdown.gain == points[i].breakdown.gain);
        CHECK(parsed[i].breakdown.qber == points[i].breakdown.qber);
        CHECK(parsed[i].breakdown.p_multi == points[i].breakdown.p_multi);
        CHECK(parsed[i].breakdown.e1 == points[i].breakdown.e1);
    }
    CHECK_THROWS_AS(parse_csv("not,a,header\n1,2,x\n"), ConfigError);
}

TEST_CASE("sweep output is byte-identical across runs") {
    SweepConfig cfg = config::preset("coherent-passive");
    cfg.grid_stop_km = 10.0;
    cfg.grid_step_km = 5.0;
    std::string first = to_csv(cfg.scenario, sweep(cfg));
    std::string second = to_csv(cfg.scenario, sweep(cfg));
    CHECK(first == second);
}

TEST_CASE("one-laser rate is exactly half of the two-laser rate") {
    SweepConfig two = config::preset("coherent-passive");
    two.grid_stop_km = 20.0;
    two.grid_step_km = 10.0;
    SweepConfig one = two;
    one.scenario = Scenario::CoherentOneLaser;
    std::vector<RatePoint> rp2 = sweep(two);
    std::vector<RatePoint> rp1 = sweep(one);
    REQUIRE(rp1.size() == rp2.size());
    for (std::size_t i = 0; i < rp1.size(); ++i) {
        CHECK(rp1[i].rate == 0.5 * rp2[i].rate); // exact halving, bit for bit
    }
}

TEST_CASE("breakdown columns reproduce the rate formula") {
    SweepConfig cfg = config::preset("sps-lowvac-a50");
    cfg.grid_stop_km = 30.0;
    cfg.grid_step_km = 15.0;
    for (const RatePoint& p : sweep(cfg)) {
        GllpResult g = gllp_rate(cfg.link.q_efficiency, cfg.link.f_ec, p.breakdown.p_acc,
                                 p.breakdown.gain, p.breakdown.qber, p.breakdown.p_multi);
        CHECK(p.rate == doctest::Approx(g.rate).epsilon(1e-12));
    }
}

TEST_CASE("gllp rate is non-increasing in the error rate") {
    double previous = 1.0;
    for (double qber : {0.0, 0.01, 0.03, 0.06, 0.09, 0.2, 0.4}) {
        GllpResult g = gllp_rate(0.5, 1.22, 0.8, 1e-3, qber, 1e-4);
        CHECK(g.rate <= previous);
        previous = g.rate;
    }
}

TEST_CASE("optimized sweep rates never increase with distance") {
    SweepConfig cfg = config::preset("coherent-passive");
    cfg.grid_stop_km = 60.0;
    cfg.grid_step_km = 15.0;
    std::vector<RatePoint> points = sweep(cfg);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].rate <= points[i - 1].rate + 1e-12);
    }

    SweepConfig sps_cfg = config::preset("sps-lowvac-a50");
    sps_cfg.grid_stop_km = 150.0;
    sps_cfg.grid_step_km = 30.0;
    points = sweep(sps_cfg);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].rate <= points[i - 1].rate + 1e-12);
    }
}

TEST_CASE("cutoff collapses under extreme loss and dies with a dead receiver") {
    SweepConfig opaque = config::preset("coherent-passive");
    opaque.link.alpha_db_per_km = 1000.0;
    opaque.grid_stop_km = 10.0;
    CHECK(cutoff(opaque) <= 0.01); // d = 0 itself is lossless, so only ~0 remains

    SweepConfig dead = config::preset("coherent-passive");
    dead.link.eta_bob = 0.0;
    dead.link.epsilon_bob = 0.0; // gain is identically zero
    dead.grid_stop_km = 10.0;
    CHECK(cutoff(dead) == 0.0);
}

TEST_CASE("audit grid has enough cells and the report flags corruption") {
    AuditGrid grid = AuditGrid::standard();
    std::size_t cells = grid.dists.size() * grid.ts.size() * grid.eta_as.size() *
                        grid.eps_as.size() * grid.eta_sys_values.size() * grid.eps_bs.size();
    CHECK(cells >= 100);

    AuditReport report;
    AuditRow clean;
    report.rows.push_back(clean);
    CHECK(report.pass());
    AuditRow corrupt;
    corrupt.dev_qber = 3e-7; // injected fault: a perturbed closed-form value
    report.rows.push_back(corrupt);
    CHECK(report.max_deviation() == doctest::Approx(3e-7));
    CHECK_FALSE(report.pass());

    std::ostringstream os;
    write_audit_report(os, report);
    CHECK(os.str().find("max_deviation,3e-07") != std::string::npos);
}

TEST_CASE("audit on a reduced grid stays under the oracle threshold") {
    AuditGrid grid;
    grid.dists = {sps::SourceDistribution({0.0099, 0.9882, 0.0019})};
    grid.ts = {0.25};
    grid.eta_as = {0.5};
    grid.eps_as = {1e-6};
    grid.eta_sys_values = {0.05};
    grid.eps_bs = {1e-6};
    AuditReport report = audit_oracle(grid);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.max_deviation() <= 1e-9);
    CHECK(report.pass());
}
