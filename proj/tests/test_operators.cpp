#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwre/montecarlo.hpp"
#include "rwre/solver.hpp"
#include "rwre/testfn.hpp"
#include "test_util.hpp"

using namespace rwre;

TEST_CASE("second_difference: constant, quadratic, linear, out of support") {
    auto dom = ball_sites(Site{}, 4.0, 2);
    const Field c = Field::from_function(dom, [](const Site&) { return 3.25; });
    const Field q = Field::from_function(dom, [](const Site& x) { return double(x[0]) * x[0]; });
    const Field l = Field::from_function(dom, [](const Site& x) { return double(x[0]); });
    CHECK(second_difference(c, Site{}, 0) == 0.0);
    CHECK(second_difference(q, Site{1, 1}, 0) == 2.0);
    CHECK(second_difference(l, Site{0, 1}, 0) == 0.0);
    CHECK(second_difference(l, Site{0, 1}, 1) == 0.0);
    CHECK_THROWS_AS(second_difference(q, Site{4, 0}, 0), OutOfSupportError);
}

TEST_CASE("apply_generator: constants, |x|^2 martingale identity, eta at the origin") {
    const Environment env = testutil::make_env(2, 0.1, 31);
    auto dom = ball_sites(Site{}, 5.0, 2);
    const Field c = Field::from_function(dom, [](const Site&) { return -2.0; });
    const Field sq = Field::from_function(dom, [](const Site& x) { return x.norm2sq(2); });
    auto inner = ball_sites(Site{}, 3.0, 2);
    for (const Site& x : inner->sites()) {
        CHECK(apply_generator(env, c, x) == 0.0);
        CHECK(apply_generator(env, sq, x) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const Environment cenv = testutil::const_env(2);
    const Field etaf =
        Field::from_function(dom, [](const Site& x) { return testfn::eta_at(x, 1.0, 2); });
    CHECK(apply_generator(cenv, etaf, Site{}) == doctest::Approx(-0.5));
}

TEST_CASE("apply_adjoint: constant environment") {
    const Environment cenv = testutil::const_env(2);
    auto dom = ball_sites(Site{}, 4.0, 2);
    const Field rho = Field::from_function(dom, [](const Site&) { return 1.0; });
    const Field vconst = Field::from_function(dom, [](const Site&) { return 7.0; });
    CHECK(apply_adjoint(cenv, rho, vconst, Site{}) == 0.0);
    // omega*(x,y) = omega(y,x) when rho == 1; rows sum to 1
    double row = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int dv : {+1, -1}) row += cenv.transition_probability(Site{}.shifted(i, dv), Site{});
    CHECK(row == doctest::Approx(1.0));
    const Field bad = Field::from_function(dom, [](const Site&) { return 0.0; });
    CHECK_THROWS(apply_adjoint(cenv, bad, vconst, Site{}));
}

TEST_CASE("dirichlet_solve: constant boundary, singleton exit, dense oracle at R=6") {
    const Environment env = testutil::make_env(2, 0.1, 77);

    auto dom = ball_sites(Site{}, 4.0, 2);
    const Field u = dirichlet_solve(
        env, dom, [](const Site&) { return 0.0; }, [](const Site&) { return 4.5; }, {});
    for (const Site& x : dom->sites()) CHECK(u.at(x) == doctest::Approx(4.5).epsilon(1e-12));

    auto s1 = ball_sites(Site{}, 1.0, 2);
    const Field one = dirichlet_solve(
        env, s1, [](const Site&) { return -1.0; }, [](const Site&) { return 0.0; }, {});
    CHECK(one.at(Site{}) == doctest::Approx(1.0).epsilon(1e-13));

    auto dom6 = ball_sites(Site{}, 6.0, 2);
    auto rhs = [](const Site& x) { return 0.1 * x[0] - 0.03 * x[1]; };
    auto bc = [](const Site& x) { return std::sin(0.3 * x[0]) + 0.2 * x[1]; };
    SolveStats st;
    SolverConfig cfg;
    cfg.tol = 1e-13;
    const Field v = dirichlet_solve(env, dom6, rhs, bc, cfg, &st);
    CHECK(st.residual <= 1e-13);
    const Field oracle = testutil::dense_dirichlet_oracle(env, dom6, rhs, bc);
    for (const Site& x : dom6->sites()) CHECK(v.at(x) == doctest::Approx(oracle.at(x)).epsilon(1e-9));
}

TEST_CASE("dirichlet_solve rejects non-ball domains and reports non-convergence") {
    const Environment env = testutil::make_env(2, 0.1, 3);
    auto torus = LatticeDomain::torus(4, 2);
    CHECK_THROWS_AS(dirichlet_solve(
                        env, torus, [](const Site&) { return 0.0; },
                        [](const Site&) { return 0.0; }, {}),
                    DomainError);
    SolverConfig cfg;
    cfg.max_iters = 2;  // way too few for R=8
    cfg.tol = 1e-12;
    CHECK_THROWS_AS(expected_exit_time(env, 8.0, cfg), SolverError);
}

TEST_CASE("SOR over-relaxation converges with the stall safeguard") {
    const Environment env = testutil::make_env(2, 0.1, 404);
    SolverConfig cfg;
    cfg.relaxation = 1.9;
    cfg.tol = 1e-12;
    SolveStats plain, sor;
    expected_exit_time(env, 24.0, {}, &plain);
    const Field u = expected_exit_time(env, 24.0, cfg, &sor);
    CHECK(sor.residual <= 1e-12);
    CHECK(sor.iterations < plain.iterations);
}

TEST_CASE("green_ball: singleton mass, dense oracle on the 9-site ball, nonnegativity") {
    const Environment env = testutil::make_env(2, 0.1, 8);
    const Field g1 = green_ball(env, 1.0, {Site{}});
    CHECK(g1.at(Site{}) == doctest::Approx(1.0).epsilon(1e-13));

    const Environment cenv = testutil::const_env(2);
    SolverConfig cfg;
    cfg.tol = 1e-13;
    const Field g2 = green_ball(cenv, 2.0, {Site{}}, cfg);
    auto dom2 = g2.domain_ptr();
    const Field oracle = testutil::dense_dirichlet_oracle(
        cenv, dom2, [](const Site& x) { return x == Site{} ? -1.0 : 0.0; },
        [](const Site&) { return 0.0; });
    for (const Site& x : dom2->sites())
        CHECK(g2.at(x) == doctest::Approx(oracle.at(x)).epsilon(1e-12));

    const Field g3 = green_ball(env, 9.0, {Site{1, 1}});
    for (double v : g3.interior_values()) CHECK(v >= 0.0);
    CHECK_THROWS_AS(green_ball(env, 3.0, {Site{5, 5}}), DomainError);
}

TEST_CASE("green_ball is omega-harmonic off the source") {
    const Environment env = testutil::make_env(2, 0.12, 21);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const Field g = green_ball(env, 7.0, {Site{}}, cfg);
    for (const Site& x : g.domain().sites()) {
        if (x == Site{}) continue;
        CHECK(std::abs(apply_generator(env, g, x)) <= 1e-12 * (1.0 + g.max_abs()));
    }
}

TEST_CASE("expected_exit_time: singleton, martingale sandwich, MC cross-check") {
    const Environment cenv = testutil::const_env(2);
    const Field t1 = expected_exit_time(cenv, 1.0);
    CHECK(t1.at(Site{}) == doctest::Approx(1.0));

    const Field t6 = expected_exit_time(cenv, 6.0);
    CHECK(t6.at(Site{}) >= 36.0 - 1e-9);
    CHECK(t6.at(Site{}) <= 49.0 + 1e-9);

    const Environment env = testutil::make_env(2, 0.1, 55);
    const Field te = expected_exit_time(env, 6.0);
    for (const Site& x : te.domain().sites()) {
        const double r2 = x.norm2sq(2);
        CHECK(te.at(x) >= 36.0 - r2 - 1e-9);
        CHECK(te.at(x) <= 49.0 - r2 + 1e-9);
    }

    std::vector<double> samples;
    for (int k = 0; k < 100000; ++k)
        samples.push_back(static_cast<double>(
            first_exit(env, Site{}, 6.0, rng::draw_u64(9000, 0, static_cast<std::uint64_t>(k),
                                                       rng::STREAM_GENERIC))
                .steps));
    const auto ms = testutil::mean_stderr(samples);
    CHECK(std::abs(ms.mean - te.at(Site{})) <= 4.0 * ms.stderr_);
}

TEST_CASE("maximum principle and linearity") {
    const Environment env = testutil::make_env(2, 0.1, 91);
    auto dom = ball_sites(Site{}, 8.0, 2);
    auto bc = [](const Site& x) { return std::cos(0.7 * x[0]) - 0.3 * x[1]; };
    const Field u = dirichlet_solve(env, dom, [](const Site&) { return 0.0; }, bc, {});
    double bmin = 1e300, bmax = -1e300;
    for (const Site& z : dom->boundary()) {
        bmin = std::min(bmin, bc(z));
        bmax = std::max(bmax, bc(z));
    }
    for (const Site& x : dom->sites()) {
        CHECK(u.at(x) >= bmin - 1e-11);
        CHECK(u.at(x) <= bmax + 1e-11);
    }

    auto rhs1 = [](const Site& x) { return 0.05 * x[0]; };
    auto rhs2 = [](const Site& x) { return x == Site{1, 0} ? -1.0 : 0.0; };
    auto bc1 = [](const Site& x) { return 0.1 * x[1]; };
    auto bc2 = [](const Site&) { return 1.0; };
    const double a = 2.0, b = -0.5;
    const Field ua = dirichlet_solve(env, dom, rhs1, bc1, {});
    const Field ub = dirichlet_solve(env, dom, rhs2, bc2, {});
    const Field uc = dirichlet_solve(
        env, dom, [&](const Site& x) { return a * rhs1(x) + b * rhs2(x); },
        [&](const Site& x) { return a * bc1(x) + b * bc2(x); }, {});
    for (const Site& x : dom->sites())
        CHECK(std::abs(uc.at(x) - (a * ua.at(x) + b * ub.at(x))) <= 1e-11);
}

TEST_CASE("occupation decomposition: all-interior Green equals exit time") {
    const Environment env = testutil::make_env(2, 0.11, 13);
    auto dom = ball_sites(Site{}, 5.0, 2);
    std::vector<Site> everything = dom->sites();
    const Field g = green_ball(env, 5.0, everything);
    const Field te = expected_exit_time(env, 5.0);
    for (const Site& x : dom->sites()) CHECK(std::abs(g.at(x) - te.at(x)) <= 1e-11);
}

TEST_CASE("green_row agrees with the dense-oracle occupation measure") {
    const Environment env = testutil::make_env(2, 0.1, 624);
    const double R = 4.0;
    const Site y0{1, 1};
    const Field row = green_row(env, R, y0, 1e-14);
    // G_r(y0, x) as a function of x solves the transpose system; oracle by
    // dense solve of the primal system for each x via reciprocity is not
    // available, so check the defining identity instead:
    //   sum_y G(y0,y) omega(y,x) = G(y0,x) - delta_{x,y0}
    auto dom = row.domain_ptr();
    for (const Site& x : dom->sites()) {
        double acc = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int dv : {+1, -1}) {
                const Site y = x.shifted(i, dv);
                if (dom->find(y).region == Region::Interior)
                    acc += row.at(y) * env.site_weights(y)[i] / 2.0;
            }
        const double expect = row.at(x) - (x == y0 ? 1.0 : 0.0);
        CHECK(acc == doctest::Approx(expect).epsilon(1e-10));
    }
}
