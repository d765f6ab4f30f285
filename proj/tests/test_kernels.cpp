#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwre/experiments.hpp"
#include "rwre/kernels.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/special.hpp"
#include "rwre/testfn.hpp"
#include "test_util.hpp"

using namespace rwre;

namespace {
// Independent oracle for the constant-law continuous kernel at the origin:
// coordinates are independent rate-1/d walks, so
//   p_t(0,0) = prod_i e^{-t/d} I_0(t/d) = i0e(t/d)^d.
double srw_kernel_origin(double t, int d) {
    return std::pow(special::bessel_i0e(t / d), d);
}

// Continue a continuous-time slice by s (Chapman-Kolmogorov composition).
Grid evolve_slice(const Environment& env, const KernelSlice& ks, double s, double tol,
                  int radius) {
    Grid cur = box_grid(env.dim(), radius, ks.x0);
    Grid nxt = box_grid(env.dim(), radius, ks.x0);
    Grid acc = box_grid(env.dim(), radius, ks.x0);
    const GridWeights W = grid_weights(env, cur);
    for_each_inner(ks.field, [&](const Site& rel, std::int64_t k) {
        cur.at(rel) = ks.field.a[static_cast<std::size_t>(k)];
    });
    const auto pw = special::poisson_weights(s, tol);
    for (std::size_t n = 0; n < pw.p.size(); ++n) {
        grid_axpy(acc, cur, pw.p[n]);
        if (n + 1 < pw.p.size()) {
            mass_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }
    return acc;
}
}  // namespace

TEST_CASE("heat_kernel_discrete: point mass, one step, two steps") {
    const Environment env = testutil::make_env(2, 0.1, 5);
    const KernelSlice k0 = heat_kernel_discrete(env, Site{2, -1}, 0);
    CHECK(k0.prob(Site{2, -1}) == 1.0);
    CHECK(k0.deficit == 0.0);

    const KernelSlice k1 = heat_kernel_discrete(env, Site{2, -1}, 1);
    const DiagWeights w = env.site_weights(Site{2, -1});
    CHECK(k1.prob(Site{3, -1}) == doctest::Approx(w[0] / 2).epsilon(1e-15));
    CHECK(k1.prob(Site{2, 0}) == doctest::Approx(w[1] / 2).epsilon(1e-15));

    const Environment cenv = testutil::const_env(2);
    const KernelSlice k2 = heat_kernel_discrete(cenv, Site{}, 2);
    CHECK(k2.prob(Site{}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(k2.deficit <= 1e-15);
}

TEST_CASE("heat_kernel_continuous: point mass, mass accounting, Bessel oracle") {
    const Environment cenv = testutil::const_env(2);
    const KernelSlice k0 = heat_kernel_continuous(cenv, Site{}, 0.0, 1e-12);
    CHECK(k0.prob(Site{}) == 1.0);

    const KernelSlice k1 = heat_kernel_continuous(cenv, Site{}, 1.0, 1e-12);
    CHECK(inner_sum(k1.field) >= 1.0 - 1e-12);
    CHECK(k1.deficit <= 1e-12);
    CHECK(k1.prob(Site{}) == doctest::Approx(srw_kernel_origin(1.0, 2)).epsilon(1e-11));

    const Environment c3 = testutil::const_env(3);
    const KernelSlice k3 = heat_kernel_continuous(c3, Site{}, 2.5, 1e-10);
    CHECK(k3.prob(Site{}) == doctest::Approx(srw_kernel_origin(2.5, 3)).epsilon(1e-9));
    for_each_inner(k3.field, [&](const Site&, std::int64_t k) {
        CHECK(k3.field.a[static_cast<std::size_t>(k)] >= 0.0);
    });
}

TEST_CASE("truncation_radius: monotonicity and MC containment") {
    CHECK(truncation_radius(2.0, 1e-3) <= truncation_radius(4.0, 1e-3));
    CHECK(truncation_radius(16.0, 1e-3) < truncation_radius(64.0, 1e-3));
    CHECK(truncation_radius(4.0, 1e-3) < truncation_radius(4.0, 1e-6));
    CHECK(truncation_radius(0.0, 1e-4) == doctest::Approx(4.0 * std::log(1e4)));

    const Environment env = testutil::make_env(2, 0.1, 17);
    const double R = truncation_radius(25.0, 1e-3);
    long exits = 0;
    const long reps = 100000;
    for (long k = 0; k < reps; ++k) {
        const PathSample p = simulate_continuous(
            env, Site{}, 25.0, rng::draw_u64(31, 0, static_cast<std::uint64_t>(k), rng::STREAM_GENERIC));
        for (const Site& s : p.sites)
            if (s.norm2(2) >= R) {
                ++exits;
                break;
            }
    }
    CHECK(static_cast<double>(exits) / reps <= 2e-3);
}

TEST_CASE("semigroup_apply: constants, t=0, translation-invariant environment") {
    const Environment env = testutil::make_env(2, 0.1, 23);
    const Observable c = Observable::constant(3.7);
    CHECK(std::abs(semigroup_apply(env, c, 2.0, 1e-10) - 3.7) <= 1e-10 * 3.7 + 1e-12);

    const Observable z = Observable::weight_component(0);
    CHECK(semigroup_apply(env, z, 0.0, 1e-12) == env.site_weights(Site{})[0]);

    const Environment cenv = testutil::const_env(2);
    for (double t : {0.5, 2.0}) {
        CHECK(semigroup_apply(cenv, z, t, 1e-12) == doctest::Approx(0.5).epsilon(1e-11));
    }
}

TEST_CASE("potential_kernel: classical d=2 values and guards") {
    const Environment cenv = testutil::const_env(2);
    CHECK(potential_kernel(cenv, Site{}, 1e-3) == 0.0);
    CHECK(potential_kernel(cenv, Site{1, 0}, 1e-3) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(potential_kernel(cenv, Site{1, 1}, 1e-3) ==
          doctest::Approx(4.0 / M_PI).epsilon(1e-3 / (4.0 / M_PI)));

    const Environment c3 = testutil::const_env(3);
    CHECK_THROWS_AS(potential_kernel(c3, Site{1, 0, 0}, 1e-3), DimensionError);

    // random environment: A(0)=0 and A(e_1) finite positive
    const Environment env = testutil::make_env(2, 0.1, 44);
    const double a = potential_kernel(env, Site{1, 0}, 1e-2);
    CHECK(a > 0.0);
    CHECK(std::isfinite(a));
}

TEST_CASE("green_whole: series oracle, neighbor identity, monotone doubling values") {
    const Environment c3 = testutil::const_env(3);
    // independent oracle: G(0) = int_0^infty i0e(t/3)^3 dt with analytic tail
    const double T = 4000.0;
    const double head = special::adaptive_simpson(
        [](double t) { return std::pow(special::bessel_i0e(t / 3.0), 3); }, 0.0, T, 1e-9, 48);
    const double cpref = std::pow(3.0 / (2.0 * M_PI), 1.5);
    const double tail = cpref * (2.0 / std::sqrt(T) + (9.0 / 8.0) * (2.0 / 3.0) * std::pow(T, -1.5));
    const double oracle = head + tail;
    CHECK(oracle == doctest::Approx(1.5164).epsilon(2e-4));  // classical value 1.51639

    GreenWholeDetail det;
    const double g0 = green_whole(c3, Site{}, 1e-2, &det);
    CHECK(std::abs(g0 - oracle) <= 1e-2);
    for (std::size_t k = 0; k + 1 < det.ball_values.size(); ++k)
        CHECK(det.ball_values[k] <= det.ball_values[k + 1] + 1e-12);
    for (double v : det.ball_values) CHECK(v >= 0.0);

    GreenWholeDetail det1;
    const double g1 = green_whole(c3, Site{1, 0, 0}, 1e-2, &det1);
    CHECK(g0 - g1 == doctest::Approx(1.0).epsilon(1e-6));

    const Environment c2 = testutil::const_env(2);
    CHECK_THROWS_AS(green_whole(c2, Site{}, 1e-2), DimensionError);

    // random environment: finite, positive, monotone doubling values
    const Environment env = testutil::make_env(3, 0.1, 500);
    GreenWholeDetail rdet;
    const double gr = green_whole(env, Site{}, 5e-2, &rdet);
    CHECK(gr > 0.0);
    CHECK(std::isfinite(gr));
    for (std::size_t k = 0; k + 1 < rdet.ball_values.size(); ++k)
        CHECK(rdet.ball_values[k] <= rdet.ball_values[k + 1] + 1e-12);
}

TEST_CASE("time_integrated_kernel: zero horizon, small-T expansion, shape diagnostic") {
    const Environment env = testutil::make_env(2, 0.1, 12);
    CHECK(time_integrated_kernel(env, Site{}, 0.0, 1e-8) == 0.0);

    const double T = 0.01;
    const double v = time_integrated_kernel(env, Site{}, T, 1e-12);
    CHECK(std::abs(v - T) <= T * T);

    // d=2 constant law, R=16: the integrated kernel over [0, R^2] has the
    // profile 1 + log((R+1)/(|x|+1)) up to bounded ratios
    const Environment cenv = testutil::const_env(2);
    const double R = 16.0;
    const Grid f = time_integrated_field(cenv, R * R, 1e-6);
    double ratio_min = 1e300, ratio_max = 0.0;
    auto dom = ball_sites(Site{}, R, 2);
    for (const Site& x : dom->sites()) {
        const double shape = 1.0 + std::log((R + 1.0) / (x.norm2(2) + 1.0));
        const double ratio = f.at(x) / shape;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    CHECK(ratio_min > 0.0);
    CHECK(std::isfinite(ratio_max));
    CHECK(ratio_max / ratio_min < 20.0);  // single-constant envelope at desk scale
}

TEST_CASE("Chapman-Kolmogorov composition") {
    const Environment env = testutil::make_env(2, 0.1, 314);
    const double tol = 1e-9;
    for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
        const KernelSlice direct = heat_kernel_continuous(env, Site{}, t + s, tol);
        const KernelSlice base = heat_kernel_continuous(env, Site{}, t, tol);
        const Grid composed = evolve_slice(env, base, s, tol, direct.field.extent / 2);
        double worst = 0.0;
        for_each_inner(composed, [&](const Site& rel, std::int64_t k) {
            worst = std::max(worst, std::abs(composed.a[static_cast<std::size_t>(k)] -
                                             direct.prob(rel)));
        });
        CHECK(worst <= 10.0 * tol);
    }
}

TEST_CASE("forward equation on the torus: dp/dt matches the mass-step generator") {
    const Environment env = testutil::make_env(2, 0.1, 2718);
    const int L = 8;
    Grid delta = torus_grid(2, L);
    delta.at(Site{3, 3}) = 1.0;
    const GridWeights W = grid_weights(env, delta);

    auto kernel_at = [&](double t) {
        Grid cur = delta;
        Grid nxt = torus_grid(2, L);
        Grid acc = torus_grid(2, L);
        const auto pw = special::poisson_weights(t, 1e-14);
        for (std::size_t n = 0; n < pw.p.size(); ++n) {
            grid_axpy(acc, cur, pw.p[n]);
            if (n + 1 < pw.p.size()) {
                mass_step(cur, W, nxt);
                cur.a.swap(nxt.a);
            }
        }
        return acc;
    };

    const double t = 2.0;
    auto residual_at = [&](double h) {
        Grid up = kernel_at(t + h), dn = kernel_at(t - h), mid = kernel_at(t);
        Grid gen = torus_grid(2, L);
        mass_step(mid, W, gen);  // mid P
        double worst = 0.0;
        for_each_inner(mid, [&](const Site&, std::int64_t k) {
            const std::size_t kk = static_cast<std::size_t>(k);
            const double dd = (up.a[kk] - dn.a[kk]) / (2.0 * h);
            worst = std::max(worst, std::abs(dd - (gen.a[kk] - mid.a[kk])));
        });
        return worst;
    };
    const double r1 = residual_at(1e-2);
    const double r2 = residual_at(5e-3);
    CHECK(r1 < 1e-4);
    CHECK(r2 < 0.6 * r1);  // vanishes with h
}

TEST_CASE("kernel envelope statistics are finite and positive") {
    const Environment env = testutil::make_env(2, 0.1, 999);
    const auto st = experiments::kernel_envelope_stats(env, {1.0, 2.0, 4.0, 8.0}, 0.05, 1.0, 1e-8);
    CHECK(std::isfinite(st.sup_statistic));
    CHECK(st.sup_statistic > 0.0);
    CHECK(std::isfinite(st.low_statistic));
    CHECK(st.low_statistic > 0.0);
}
