#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rwre/kernels.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/solver.hpp"
#include "rwre/special.hpp"
#include "test_util.hpp"

using namespace rwre;

TEST_CASE("simulate_path: trivial length, nearest-neighbor steps, bit reproducibility") {
    const Environment env = testutil::make_env(2, 0.1, 1);
    const PathSample p0 = simulate_path(env, Site{3, 3}, 0, 42);
    CHECK(p0.sites.size() == 1);
    CHECK(p0.sites[0] == Site{3, 3});

    const PathSample a = simulate_path(env, Site{}, 500, 42);
    const PathSample b = simulate_path(env, Site{}, 500, 42);
    CHECK(a.sites == b.sites);
    for (std::size_t k = 1; k < a.sites.size(); ++k)
        CHECK((a.sites[k] - a.sites[k - 1]).norm1(2) == 1);
    const PathSample c = simulate_path(env, Site{}, 500, 43);
    CHECK(a.sites != c.sites);
}

TEST_CASE("martingale checks: E X_n = x0 and E|X_n - x0|^2 = n within 4 sigma") {
    const Environment env = testutil::make_env(2, 0.1, 777);
    const long reps = 100000;
    const long n = 16;
    std::vector<double> xs, ys, sq;
    for (long k = 0; k < reps; ++k) {
        const PathSample p = simulate_path(
            env, Site{}, n, rng::draw_u64(2025, 0, static_cast<std::uint64_t>(k), rng::STREAM_GENERIC));
        const Site& last = p.sites.back();
        xs.push_back(last[0]);
        ys.push_back(last[1]);
        sq.push_back(last.norm2sq(2));
    }
    const auto mx = testutil::mean_stderr(xs);
    const auto my = testutil::mean_stderr(ys);
    const auto msq = testutil::mean_stderr(sq);
    CHECK(std::abs(mx.mean) <= 4.0 * mx.stderr_);
    CHECK(std::abs(my.mean) <= 4.0 * my.stderr_);
    CHECK(std::abs(msq.mean - n) <= 4.0 * msq.stderr_);
}

TEST_CASE("simulate_continuous: trivial horizon, Poisson jump count, strictly increasing times") {
    const Environment env = testutil::make_env(2, 0.1, 9);
    const PathSample p0 = simulate_continuous(env, Site{1, 1}, 0.0, 5);
    CHECK(p0.sites.size() == 1);

    const double t = 12.0;
    const long reps = 100000;
    std::vector<double> counts;
    for (long k = 0; k < reps; ++k) {
        const PathSample p = simulate_continuous(
            env, Site{}, t, rng::draw_u64(77, 0, static_cast<std::uint64_t>(k), rng::STREAM_GENERIC));
        counts.push_back(static_cast<double>(p.sites.size() - 1));
        for (std::size_t j = 1; j < p.times.size(); ++j) CHECK(p.times[j] > p.times[j - 1]);
    }
    const auto mc = testutil::mean_stderr(counts);
    CHECK(std::abs(mc.mean - t) <= 4.0 * mc.stderr_);
}

TEST_CASE("position law at t=4 passes chi-square against the kernel at the 1% level") {
    const Environment env = testutil::make_env(2, 0.1, 31337);
    const double t = 4.0;
    const long reps = 20000;
    const KernelSlice ks = heat_kernel_continuous(env, Site{}, t, 1e-10);

    std::map<Site, long> counts;
    for (long k = 0; k < reps; ++k) {
        const PathSample p = simulate_continuous(
            env, Site{}, t, rng::draw_u64(1212, 0, static_cast<std::uint64_t>(k), rng::STREAM_GENERIC));
        counts[p.sites.back()] += 1;
    }
    // bins: kernel sites with expected count >= 5, remainder pooled
    double chi2 = 0.0;
    int bins = 0;
    double pooled_expected = static_cast<double>(reps);
    long pooled_observed = reps;
    for_each_inner(ks.field, [&](const Site& rel, std::int64_t k) {
        const double e = static_cast<double>(reps) * ks.field.a[static_cast<std::size_t>(k)];
        if (e >= 5.0) {
            const auto it = counts.find(rel);
            const double o = it == counts.end() ? 0.0 : static_cast<double>(it->second);
            chi2 += (o - e) * (o - e) / e;
            ++bins;
            pooled_expected -= e;
            pooled_observed -= static_cast<long>(o);
        }
    });
    if (pooled_expected > 5.0) {
        chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                pooled_expected;
        ++bins;
    }
    const double crit = special::chi2_quantile(0.99, bins - 1);
    CHECK(chi2 < crit);
}

TEST_CASE("first_exit: singleton ball, exit site lands on the discrete boundary, solver oracle") {
    const Environment env = testutil::make_env(2, 0.1, 20);
    const ExitSample e1 = first_exit(env, Site{}, 1.0, 3);
    CHECK(e1.steps == 1);

    auto dom = ball_sites(Site{}, 5.0, 2);
    std::vector<double> times;
    for (long k = 0; k < 40000; ++k) {
        const ExitSample e = first_exit(
            env, Site{}, 5.0, rng::draw_u64(66, 0, static_cast<std::uint64_t>(k), rng::STREAM_GENERIC));
        if (k < 2000) CHECK(dom->find(e.exit_site).region == Region::Boundary);
        times.push_back(static_cast<double>(e.steps));
    }
    const Field te = expected_exit_time(env, 5.0);
    const auto ms = testutil::mean_stderr(times);
    CHECK(std::abs(ms.mean - te.at(Site{})) <= 4.0 * ms.stderr_);
}

TEST_CASE("mc_green_estimate: degenerate cases and solver cross-validation") {
    const Environment env = testutil::make_env(2, 0.1, 303);
    const McEstimate one = mc_green_estimate(env, Site{}, 1.0, {Site{}}, 200, 5);
    CHECK(one.mean == 1.0);
    CHECK(one.stderr_ == 0.0);

    const McEstimate zero = mc_green_estimate(env, Site{}, 3.0, {Site{10, 10}}, 200, 5);
    CHECK(zero.mean == 0.0);

    const McEstimate est = mc_green_estimate(env, Site{}, 5.0, {Site{}}, 40000, 99);
    const Field g = green_ball(env, 5.0, {Site{}});
    CHECK(std::abs(est.mean - g.at(Site{})) <= 4.0 * est.stderr_);
}

TEST_CASE("env_process_integral: exact constants") {
    const Environment env = testutil::make_env(2, 0.1, 15);
    CHECK(env_process_integral(env, Observable::constant(1.0), 7.5, 1) == doctest::Approx(7.5).epsilon(1e-15));

    const Environment cenv = testutil::const_env(2);
    const Observable z = Observable::weight_component(0);
    CHECK(env_process_integral(cenv, z, 9.0, 2) == doctest::Approx(4.5).epsilon(1e-14));

    const double v = env_process_integral(env, z, 20.0, 3);
    CHECK(std::abs(v) <= 20.0 * z.bound);
}

TEST_CASE("fclt_sample: zero observable and basic sanity") {
    EnvironmentLaw law;
    law.dim = 2;
    law.kappa = 0.1;
    const FcltResult rz = fclt_sample(law, Observable::constant(0.0), 10.0, 50, 4, 0.0);
    for (double s : rz.samples) CHECK(s == 0.0);

    const FcltResult r = fclt_sample(law, Observable::weight_component(0), 50.0, 200, 4, 0.5);
    CHECK(r.samples.size() == 200);
    CHECK(std::isfinite(r.ks_statistic));
    CHECK(r.sample_sd > 0.0);
    // doubling t keeps the diffusive variance stable within a modest factor
    const FcltResult r2 = fclt_sample(law, Observable::weight_component(0), 100.0, 200, 4, 0.5);
    const double ratio = (r2.sample_sd * r2.sample_sd) / (r.sample_sd * r.sample_sd);
    CHECK(ratio > 0.4);
    CHECK(ratio < 2.5);
}
