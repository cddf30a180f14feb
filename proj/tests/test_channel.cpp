#include <doctest.h>

#include <cmath>
#include <vector>

#include "pbb84/channel.hpp"

using namespace pbb84;

TEST_CASE("eta_channel follows the dB law") {
    CHECK(eta_channel(0.2, 0.0) == 1.0);
    CHECK(eta_channel(0.2, 50.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(eta_channel(0.2, 100.0) == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("eta_channel is multiplicative over concatenated spans") {
    for (double d1 : {0.0, 3.7, 42.0}) {
        for (double d2 : {1.0, 19.5, 140.0}) {
            CHECK(eta_channel(0.2, d1 + d2) ==
                  doctest::Approx(eta_channel(0.2, d1) * eta_channel(0.2, d2)).epsilon(1e-14));
        }
    }
}

TEST_CASE("eta_sys multiplies channel and apparatus transmittance") {
    LinkParams link;
    link.eta_bob = 0.1;
    CHECK(eta_sys(link.at_distance(0.0)) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(eta_sys(link.at_distance(50.0)) == doctest::Approx(0.01).epsilon(1e-14));
    link.eta_bob = 0.0;
    CHECK(eta_sys(link.at_distance(10.0)) == 0.0);
}

TEST_CASE("threshold_no_click values and monotonicity") {
    CHECK(threshold_no_click(0, {0.3, 0.0}) == 1.0);
    CHECK(threshold_no_click(1, {1.0, 0.0}) == 0.0);
    CHECK(threshold_no_click(3, {1.0, 0.0}) == 0.0);
    CHECK(threshold_no_click(2, {0.5, 1e-6}) == doctest::Approx(0.24999975).epsilon(1e-12));

    // non-increasing in n, eta and eps
    for (int n = 0; n < 6; ++n) {
        CHECK(threshold_no_click(n + 1, {0.4, 1e-3}) <= threshold_no_click(n, {0.4, 1e-3}));
    }
    CHECK(threshold_no_click(2, {0.6, 1e-3}) <= threshold_no_click(2, {0.4, 1e-3}));
    CHECK(threshold_no_click(2, {0.4, 1e-2}) <= threshold_no_click(2, {0.4, 1e-3}));
}

TEST_CASE("bob povm edge coefficients") {
    BobPovm vac = bob_povm_coefficients(0, 0, 0.3, 0.0);
    CHECK(vac.p_vac == 1.0);
    CHECK(vac.p_zero == 0.0);
    CHECK(vac.p_one == 0.0);
    CHECK(vac.p_double == 0.0);

    BobPovm matched = bob_povm_coefficients(1, 0, 1.0, 0.0);
    CHECK(matched.p_vac == 0.0);
    CHECK(matched.p_zero == 1.0);
    CHECK(matched.p_one == 0.0);
    CHECK(matched.p_double == 0.0);

    BobPovm both = bob_povm_coefficients(1, 1, 1.0, 0.0);
    CHECK(both.p_vac == 0.0);
    CHECK(both.p_zero == 0.0);
    CHECK(both.p_one == 0.0);
    CHECK(both.p_double == 1.0);
}

TEST_CASE("bob povm completeness holds exactly across a parameter grid") {
    std::vector<double> etas{0.0, 1e-4, 0.1, 0.5, 0.97, 1.0};
    std::vector<double> epss{0.0, 1e-6, 1e-3, 0.2};
    for (int n = 0; n <= 6; ++n) {
        for (int m = 0; m <= 6; ++m) {
            for (double eta : etas) {
                for (double eps : epss) {
                    BobPovm p = bob_povm_coefficients(n, m, eta, eps);
                    CHECK(p.p_vac >= 0.0);
                    CHECK(p.p_zero >= 0.0);
                    CHECK(p.p_one >= 0.0);
                    CHECK(p.p_double >= -1e-16);
                    CHECK(p.p_vac <= 1.0);
                    CHECK(p.p_zero <= 1.0);
                    CHECK(p.p_one <= 1.0);
                    CHECK(p.p_double <= 1.0);
                    CHECK(((p.p_vac + p.p_zero) + p.p_one) + p.p_double == 1.0);
                }
            }
        }
    }
}

TEST_CASE("link validation names broken fields") {
    LinkParams bad;
    bad.f_ec = 0.9;
    CHECK_THROWS_WITH_AS(bad.validate(), "link.f_ec must be >= 1", ConfigError);
    LinkParams bad2;
    bad2.q_efficiency = 0.0;
    CHECK_THROWS_AS(bad2.validate(), ConfigError);
}
