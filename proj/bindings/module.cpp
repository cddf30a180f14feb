#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbb84/channel.hpp"
#include "pbb84/coherent.hpp"
#include "pbb84/config.hpp"
#include "pbb84/engine.hpp"
#include "pbb84/fock.hpp"
#include "pbb84/math.hpp"
#include "pbb84/sps.hpp"

namespace py = pybind11;

using namespace pbb84;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Secret-key rates and operating points for passive BB84 transmitters";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
    py::register_exception<BracketError>(m, "BracketError", PyExc_ValueError);

    // math
    m.def("binary_entropy", &binary_entropy, py::arg("x"),
          "Binary Shannon entropy with the 0 log 0 = 0 convention.");
    m.def("f_comb", &f_comb, py::arg("x"), py::arg("y"), py::arg("z"),
          "Alternating binomial sum used by the passive-source coefficients.");

    // link / detectors
    py::class_<LinkParams>(m, "LinkParams")
        .def(py::init([](double alpha, double distance, double eta_bob, double eps_bob, double q,
                         double f_ec) {
                 return LinkParams{alpha, distance, eta_bob, eps_bob, q, f_ec};
             }),
             py::arg("alpha") = 0.2, py::arg("distance") = 0.0, py::arg("eta_bob") = 0.1,
             py::arg("eps_bob") = 1e-6, py::arg("q") = 0.5, py::arg("f_ec") = 1.22)
        .def_readwrite("alpha", &LinkParams::alpha_db_per_km)
        .def_readwrite("distance", &LinkParams::distance_km)
        .def_readwrite("eta_bob", &LinkParams::eta_bob)
        .def_readwrite("eps_bob", &LinkParams::epsilon_bob)
        .def_readwrite("q", &LinkParams::q_efficiency)
        .def_readwrite("f_ec", &LinkParams::f_ec)
        .def("at_distance", &LinkParams::at_distance, py::arg("distance_km"));

    m.def("eta_channel", &eta_channel, py::arg("alpha"), py::arg("distance_km"));
    m.def("eta_sys", &eta_sys, py::arg("link"));
    m.def(
        "threshold_no_click",
        [](int n, double eta_det, double eps_dark) {
            return threshold_no_click(n, DetectorParams{eta_det, eps_dark});
        },
        py::arg("n"), py::arg("eta_det"), py::arg("eps_dark") = 0.0);
    m.def(
        "bob_povm_coefficients",
        [](int n, int mm, double eta, double eps_b) {
            BobPovm p = bob_povm_coefficients(n, mm, eta, eps_b);
            return py::make_tuple(p.p_vac, p.p_zero, p.p_one, p.p_double);
        },
        py::arg("n"), py::arg("m"), py::arg("eta_sys"), py::arg("eps_b"),
        "Diagonal POVM response (no click, correct, wrong, double) for |n,m>.");

    // coherent transmitter
    py::class_<coherent::CoherentRateBreakdown>(m, "CoherentRateBreakdown")
        .def_readonly("p_acc", &coherent::CoherentRateBreakdown::p_acc)
        .def_readonly("gain", &coherent::CoherentRateBreakdown::gain)
        .def_readonly("qber", &coherent::CoherentRateBreakdown::qber)
        .def_readonly("p_multi", &coherent::CoherentRateBreakdown::p_multi)
        .def_readonly("e1", &coherent::CoherentRateBreakdown::e1)
        .def_readonly("rate", &coherent::CoherentRateBreakdown::rate);

    m.def("coherent_acceptance_probability", &coherent::acceptance_probability, py::arg("omega"));
    m.def(
        "coherent_gain", [](double mu, const LinkParams& l) { return coherent::gain(mu, l); },
        py::arg("mu"), py::arg("link"));
    m.def(
        "coherent_qber_theta",
        [](double theta, double mu, const LinkParams& l) { return coherent::qber_theta(theta, mu, l); },
        py::arg("theta"), py::arg("mu"), py::arg("link"));
    m.def(
        "coherent_qber_average",
        [](double mu, double omega, const LinkParams& l) {
            return coherent::qber_average({mu, omega}, l);
        },
        py::arg("mu"), py::arg("omega"), py::arg("link"));
    m.def("p_multi_poisson", &coherent::p_multi_poisson, py::arg("mu"));
    m.def(
        "coherent_key_rate",
        [](double mu, double omega, const LinkParams& l) {
            return coherent::key_rate({mu, omega}, l);
        },
        py::arg("mu"), py::arg("omega"), py::arg("link"));
    m.def(
        "coherent_optimize",
        [](double d, const LinkParams& l) {
            coherent::CoherentOptimum o = coherent::optimize(d, l);
            return py::make_tuple(o.mu, o.omega, o.rate);
        },
        py::arg("distance_km"), py::arg("link"), "Returns (mu, omega, rate).");
    m.def(
        "active_wcp_rate",
        [](double mu, const LinkParams& l) { return coherent::active_wcp_rate(mu, l); },
        py::arg("mu"), py::arg("link"));

    // SPS transmitter
    py::class_<sps::SourceDistribution>(m, "SourceDistribution")
        .def(py::init<std::vector<double>>(), py::arg("probs"))
        .def_static("ideal", &sps::SourceDistribution::ideal)
        .def_readonly("probs", &sps::SourceDistribution::probs)
        .def("nmax", &sps::SourceDistribution::nmax);

    py::class_<sps::SpsRateBreakdown>(m, "SpsRateBreakdown")
        .def_readonly("normalization", &sps::SpsRateBreakdown::normalization)
        .def_readonly("p_acc", &sps::SpsRateBreakdown::p_acc)
        .def_readonly("gain", &sps::SpsRateBreakdown::gain)
        .def_readonly("qber", &sps::SpsRateBreakdown::qber)
        .def_readonly("p_multi", &sps::SpsRateBreakdown::p_multi)
        .def_readonly("e1", &sps::SpsRateBreakdown::e1)
        .def_readonly("rate", &sps::SpsRateBreakdown::rate);

    py::class_<sps::PhotonStats>(m, "PhotonStats")
        .def_readonly("n_bar", &sps::PhotonStats::n_bar)
        .def_readonly("g2", &sps::PhotonStats::g2);

    m.def(
        "sps_u_coeff",
        [](int n, double t, const sps::SourceDistribution& dist, double eta_a, double eps_a) {
            return sps::u_coeff(n, {t, dist, eta_a, eps_a});
        },
        py::arg("n"), py::arg("t"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"));
    m.def(
        "sps_q_coeff",
        [](int n, double t, const sps::SourceDistribution& dist, double eta_a, double eps_a) {
            return sps::q_coeff(n, {t, dist, eta_a, eps_a});
        },
        py::arg("n"), py::arg("t"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"));
    m.def("sigma_trace", &sps::sigma_trace, py::arg("n"), py::arg("m"), py::arg("k"), py::arg("l"),
          py::arg("eta_det"), py::arg("eps_a"));
    m.def(
        "sps_normalization",
        [](double t, const sps::SourceDistribution& dist, double eta_a, double eps_a) {
            return sps::normalization({t, dist, eta_a, eps_a});
        },
        py::arg("t"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"));
    m.def(
        "sps_key_rate",
        [](double t, const sps::SourceDistribution& dist, double eta_a, double eps_a,
           const LinkParams& l) { return sps::sps_key_rate({t, dist, eta_a, eps_a}, l); },
        py::arg("t"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"), py::arg("link"));
    m.def(
        "sps_optimize_t",
        [](double d, const sps::SourceDistribution& dist, double eta_a, double eps_a,
           const LinkParams& l) {
            sps::SpsOptimum o = sps::optimize_t(d, dist, eta_a, eps_a, l);
            return py::make_tuple(o.t, o.rate);
        },
        py::arg("distance_km"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"),
        py::arg("link"), "Returns (t, rate).");
    m.def("photon_stats", &sps::photon_stats, py::arg("dist"));
    m.def("active_sps_rate", &sps::active_sps_rate, py::arg("dist"), py::arg("tau"),
          py::arg("link"));
    m.def(
        "sps_optimize_tau",
        [](double d, const sps::SourceDistribution& dist, const LinkParams& l) {
            sps::ActiveSpsOptimum o = sps::optimize_tau(d, dist, l);
            return py::make_tuple(o.tau, o.rate);
        },
        py::arg("distance_km"), py::arg("dist"), py::arg("link"), "Returns (tau, rate).");

    // oracle
    m.def("check_basis_independence",
          [](double omega) { return fock::check_basis_independence(omega); }, py::arg("omega"));
    m.def(
        "oracle_quantities",
        [](double t, const sps::SourceDistribution& dist, double eta_a, double eps_a,
           const LinkParams& l) {
            fock::OracleQuantities q =
                fock::oracle_quantities({t, dist, eta_a, eps_a}, l, fock::Pol::H);
            return py::make_tuple(q.normalization, q.gain, q.qber, q.p_multi);
        },
        py::arg("t"), py::arg("dist"), py::arg("eta_a"), py::arg("eps_a"), py::arg("link"),
        "Brute-force Fock-space values (N, gain, qber, p_multi).");

    // engine
    py::enum_<engine::Scenario>(m, "Scenario")
        .value("COHERENT_PASSIVE", engine::Scenario::CoherentPassive)
        .value("COHERENT_ACTIVE", engine::Scenario::CoherentActive)
        .value("COHERENT_ONE_LASER", engine::Scenario::CoherentOneLaser)
        .value("SPS_PASSIVE", engine::Scenario::SpsPassive)
        .value("SPS_ACTIVE", engine::Scenario::SpsActive);

    py::class_<engine::SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("scenario", &engine::SweepConfig::scenario)
        .def_readwrite("link", &engine::SweepConfig::link)
        .def_readwrite("grid_start_km", &engine::SweepConfig::grid_start_km)
        .def_readwrite("grid_stop_km", &engine::SweepConfig::grid_stop_km)
        .def_readwrite("grid_step_km", &engine::SweepConfig::grid_step_km)
        .def_readwrite("optimize", &engine::SweepConfig::optimize)
        .def_readwrite("mu", &engine::SweepConfig::mu)
        .def_readwrite("omega", &engine::SweepConfig::omega)
        .def_readwrite("dist", &engine::SweepConfig::dist)
        .def_readwrite("eta_a", &engine::SweepConfig::eta_a)
        .def_readwrite("eps_a", &engine::SweepConfig::eps_a)
        .def_readwrite("t", &engine::SweepConfig::t)
        .def_readwrite("tau", &engine::SweepConfig::tau);

    py::class_<engine::RateBreakdownRow>(m, "RateBreakdownRow")
        .def_readonly("p_acc", &engine::RateBreakdownRow::p_acc)
        .def_readonly("gain", &engine::RateBreakdownRow::gain)
        .def_readonly("qber", &engine::RateBreakdownRow::qber)
        .def_readonly("p_multi", &engine::RateBreakdownRow::p_multi)
        .def_readonly("e1", &engine::RateBreakdownRow::e1);

    py::class_<engine::RatePoint>(m, "RatePoint")
        .def_readonly("distance_km", &engine::RatePoint::distance_km)
        .def_readonly("rate", &engine::RatePoint::rate)
        .def_readonly("params", &engine::RatePoint::params)
        .def_readonly("breakdown", &engine::RatePoint::breakdown);

    m.def("sweep", &engine::sweep, py::arg("config"));
    m.def("cutoff", &engine::cutoff, py::arg("config"));
    m.def("to_csv", &engine::to_csv, py::arg("scenario"), py::arg("points"));
    m.def("preset", &config::preset, py::arg("name"));
    m.def("preset_names", &config::preset_names);

    m.attr("__version__") = "0.1.0";
}
