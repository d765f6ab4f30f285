#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwre/testfn.hpp"
#include "test_util.hpp"

using namespace rwre;
using namespace rwre::testfn;

namespace {
// Independent long-double evaluation of the radial profiles.
double tfa_alt(double r, double delta, int d) {
    const long double rl = r, dl = delta;
    const long double e = expl(-dl * logl(rl)) / dl;
    if (d == 2) return static_cast<double>(-logl(rl) * expl(e));
    return static_cast<double>(expl((2.0L - d) * logl(rl)) * expl(-e));
}
double tfb_alt(double r, double delta, int d) {
    const long double rl = r, dl = delta;
    const long double e = expl(-dl * logl(rl)) / dl;
    if (d == 2) return static_cast<double>(-logl(rl) * expl(-e));
    return static_cast<double>(expl((2.0L - d) * logl(rl)) * expl(e));
}
}  // namespace

TEST_CASE("mfh: frozen values and domain errors") {
    CHECK(mfh(0.0, 5.0) == 0.0);
    CHECK(mfh(2.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mfh(4.0, 2.0) == doctest::Approx(4.0 + 4.0 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(mfh(1.0, 0.0), ConfigError);
}

TEST_CASE("u_profile: frozen values, strict decrease") {
    CHECK(u_profile(1.0, 2) == 0.0);
    CHECK(u_profile(2.0, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u_profile(std::exp(1.0), 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(u_profile(0.0, 2), ConfigError);
    for (double r = 1.0; r < 40.0; r += 0.7) {
        CHECK(u_profile(r + 0.5, 2) < u_profile(r, 2));
        CHECK(u_profile(r + 0.5, 3) < u_profile(r, 3));
    }
}

TEST_CASE("radial profiles: frozen values and independent reimplementation") {
    CHECK(tfa_bar(1.0, 0.5, 3) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(tfa_bar(1.0, 0.5, 2) == 0.0);
    CHECK(tfa_bar(1e5, 0.5, 3) / std::pow(1e5, -1.0) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK_THROWS_AS(tfa_bar(-1.0, 0.5, 2), ConfigError);
    CHECK_THROWS_AS(tfb_bar(1.0, 0.0, 2), ConfigError);

    for (int d : {2, 3}) {
        for (double delta : {0.2, 0.5, 1.0}) {
            for (double r = 1.25; r < 200.0; r *= 1.7) {
                CHECK(tfa_bar(r, delta, d) ==
                      doctest::Approx(tfa_alt(r, delta, d)).epsilon(1e-12));
                CHECK(tfb_bar(r, delta, d) ==
                      doctest::Approx(tfb_alt(r, delta, d)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("eta: frozen values, radial decrease") {
    CHECK(eta_at(Site{}, 2.0, 2) == 1.0);
    CHECK(eta_at(Site{1, 0}, 2.0, 2) == doctest::Approx(0.25).epsilon(1e-15));
    for (int k = 0; k < 20; ++k)
        CHECK(eta_bar(k + 1.0, 1.7) < eta_bar(static_cast<double>(k), 1.7));
}

TEST_CASE("verify_radial_lemma: d=3 all searched checks pass on [10,100]") {
    std::vector<double> grid;
    for (double r = 10; r <= 100; r += 2.5) grid.push_back(r);
    const auto rep = verify_radial_lemma(0.2, 3, grid);
    CHECK(rep.all_pass);
    CHECK(rep.fd_consistent);
    CHECK(rep.threshold_radius == 10.0);
    CHECK(rep.check("a_decreasing").holds_on_grid);
    CHECK(rep.check("b_decreasing").holds_on_grid);
    CHECK(rep.check("a_derivative_sandwich").holds_on_grid);
    CHECK(rep.check("b_derivative_sandwich").holds_on_grid);
    CHECK(rep.check("a_laplacian_sign").holds_on_grid);
    CHECK(rep.check("b_laplacian_sign").holds_on_grid);
    CHECK(rep.check("dk_bounds").holds_on_grid);
    // the explicit-window forms hold only beyond desk scale; thresholds reported
    CHECK_FALSE(rep.check("b_explicit_window").holds_on_grid);
    // finite-difference derivative matches the closed-form a'(r) r^{d-1} ratio
    const auto& sand = rep.check("a_derivative_sandwich");
    CHECK(sand.found_lo > 0.0);
    CHECK(sand.found_hi < 1.0);
}

TEST_CASE("verify_radial_lemma: d=2 the b-profile checks hold on [10,100]") {
    std::vector<double> grid;
    for (double r = 10; r <= 100; r += 2.5) grid.push_back(r);
    const auto rep = verify_radial_lemma(0.2, 2, grid);
    CHECK(rep.check("b_decreasing").holds_on_grid);
    CHECK(rep.check("b_derivative_sandwich").holds_on_grid);
    CHECK(rep.check("dk_bounds").holds_on_grid);
    // the a-profile is increasing at this (d, delta) until far beyond the grid
    CHECK_FALSE(rep.check("a_decreasing").holds_on_grid);
    CHECK(rep.check("a_decreasing").witness_radius == 10.0);
}

TEST_CASE("verify_radial_lemma: degenerate grid near r = 1 reports the failing radius") {
    const std::vector<double> grid = {1.05, 1.2, 1.5, 2.0};
    const auto rep = verify_radial_lemma(0.2, 2, grid);
    CHECK_FALSE(rep.check("a_laplacian_sign").holds_on_grid);
    CHECK(rep.check("a_laplacian_sign").witness_radius == 1.05);
}

TEST_CASE("verify_exponential_lemma: constant law d=2 at R=64") {
    std::vector<Environment> envs = {testutil::const_env(2)};
    const auto rep = verify_exponential_lemma(envs, 64.0);
    REQUIRE(rep.alpha_found.has_value());
    REQUIRE(rep.A_found.has_value());
    REQUIRE(rep.A3_found.has_value());
    CHECK(*rep.alpha_found >= 0.1);
    CHECK(rep.margin1 <= 0.0);
    CHECK(rep.origin_identity == doctest::Approx(std::exp(-*rep.A_found) - 1.0));
    CHECK(rep.origin_identity > -1.0);
    CHECK(*rep.A3_found * *rep.A3_found <= 64.0);
    CHECK(rep.margin3 > 0.0);

    // alpha above the found threshold violates the first display somewhere
    VerifierConfig big;
    big.alpha_grid = {0.9};
    const auto fail = verify_exponential_lemma(envs, 64.0, big);
    CHECK_FALSE(fail.alpha_found.has_value());
    CHECK(!fail.witness.empty());
}

TEST_CASE("verify_exponential_lemma: seeded environments at kappa=0.2") {
    std::vector<Environment> envs;
    for (int k = 0; k < 10; ++k) envs.push_back(testutil::make_env(2, 0.2, 4000 + k));
    const auto rep = verify_exponential_lemma(envs, 64.0);
    CHECK(rep.alpha_found.has_value());
    CHECK(rep.A_found.has_value());
    CHECK(rep.A3_found.has_value());
}

TEST_CASE("verify_eta_lemma: constant law theta=1 origin value, seeded kappa=0.1") {
    // constant law d=2 at kappa=1/4: L eta(0) = -1/2 >= -1
    std::vector<Environment> cenvs = {testutil::const_env(2)};
    const auto crep = verify_eta_lemma(cenvs, 0.25);
    CHECK(crep.theta == doctest::Approx(1.0));
    REQUIRE(crep.C0_found.has_value());
    CHECK(crep.worst_inside == doctest::Approx(-0.5));
    CHECK(crep.worst_inside >= -1.0);

    std::vector<Environment> envs;
    for (int k = 0; k < 10; ++k) envs.push_back(testutil::make_env(2, 0.1, 8800 + k));
    const auto rep = verify_eta_lemma(envs, 0.1);
    REQUIRE(rep.C0_found.has_value());
    CHECK(rep.worst_outside >= 0.0);
    CHECK(rep.worst_inside >= -1.0);
}

TEST_CASE("assemble_h: interfaces and the generator identity") {
    const Environment env = testutil::make_env(2, 0.1, 606);
    const double R = 32.0, R0 = 4.0, alpha = 0.1, delta = 1.0;
    const auto as = assemble_h(env, R, R0, alpha, delta);
    CHECK(as.h3_at(R + 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(as.interface_r0 <= 1e-12 * (1.0 + std::abs(as.h2_at(R0))));
    CHECK(as.interface_rhalf <= 1e-12 * (1.0 + std::abs(as.h2_at(R / 2.0))));
    CHECK(as.generator_identity <= 2e-11);
    // outside-of-construction guard
    CHECK_THROWS_AS(assemble_h(env, 6.0, 4.0, 0.1, 1.0), ConfigError);
    // at d=2 and small delta the a-profile increases: degenerate, rejected
    CHECK_THROWS_AS(assemble_h(env, 32.0, 4.0, 0.1, 0.2), ConfigError);
}

TEST_CASE("assemble_ell: interfaces and the generator identity") {
    const Environment env = testutil::make_env(2, 0.1, 607);
    const double R = 32.0, R0 = 4.0, gamma = 4.0, delta = 0.2;
    const double theta = 1.0 / (4.0 * env.kappa());
    const auto as = assemble_ell(env, R, R0, gamma, theta, delta);
    CHECK(as.ell3_at(R) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(as.interface_r0 <= 1e-12 * (1.0 + std::abs(as.ell2_at(R0))));
    CHECK(as.interface_rhalf <= 1e-12 * (1.0 + std::abs(as.ell2_at(R / 2.0))));
    CHECK(as.generator_identity <= 2e-11);
}

TEST_CASE("verify_comparison: constant law d=2 at R=64, R0=8") {
    const Environment cenv = testutil::const_env(2);
    const double theta = 1.0;  // kappa = 1/4
    const auto rep = verify_comparison(cenv, 64.0, 8.0, 1.0, theta, theta * theta);
    REQUIRE(rep.alpha_found.has_value());
    CHECK(rep.min_margin_h >= 0.0);          // G_R <= h pointwise
    CHECK(rep.h2_ge_h3_margin >= -1e-12);    // ordering on the outer annulus (roundoff at the interface)
    CHECK(rep.ell2_le_ell3_margin >= -1e-12); // ell ordering on the outer annulus
    CHECK(rep.c_fit > 0.0);                  // H_R >= c ell with a positive c
}

TEST_CASE("green_envelope_stats: s exponent arithmetic and finite statistics") {
    const Environment cenv = testutil::const_env(3);  // kappa = 1/6, s = 2
    const Field g = green_ball(cenv, 16.0, {Site{}});
    const auto st = green_envelope_stats(cenv, 16.0, g, 1.0 / 6.0);
    CHECK(st.s_exponent == doctest::Approx(2.0));
    CHECK(st.H_up > 0.0);
    CHECK(std::isfinite(st.H_up));
    CHECK(st.H_low > 0.0);
    CHECK(std::isfinite(st.H_low));
    CHECK(st.ratio_min > 0.0);
    CHECK(st.ratio_max >= st.ratio_min);

    const Environment env = testutil::make_env(2, 0.1, 11);  // s = 5 at kappa = 0.1
    const Field g2 = green_ball(env, 8.0, {Site{}});
    const auto st2 = green_envelope_stats(env, 8.0, g2, 0.1);
    CHECK(st2.s_exponent == doctest::Approx(5.0));
    CHECK(st2.ratio_min > 0.0);
}
