#include "rwre/kernels.hpp"

#include <cmath>

#include "rwre/solver.hpp"
#include "rwre/special.hpp"

namespace rwre {

double truncation_radius(double t, double tol) {
    if (t < 0 || !(tol > 0.0) || tol >= 1.0)
        throw ConfigError("truncation_radius: need t >= 0 and tol in (0,1)");
    const double c1 = 4.0;
    const double lg = std::log(1.0 / tol);
    return c1 * std::max(std::sqrt(t * lg), lg);
}

KernelSlice heat_kernel_discrete(const Environment& env, const Site& x0, int n, int radius) {
    if (n < 0) throw ConfigError("heat_kernel_discrete: n >= 0 required");
    if (radius <= 0) radius = n + 1;
    KernelSlice out;
    out.x0 = x0;
    out.time = n;
    out.discrete = true;

    Grid cur = box_grid(env.dim(), radius, x0);
    Grid nxt = box_grid(env.dim(), radius, x0);
    const GridWeights W = grid_weights(env, cur);
    cur.at(Site{}) = 1.0;
    for (int k = 0; k < n; ++k) {
        mass_step(cur, W, nxt);
        cur.a.swap(nxt.a);
    }
    out.deficit = std::max(0.0, 1.0 - inner_sum(cur));
    out.field = std::move(cur);
    return out;
}

KernelSlice heat_kernel_continuous(const Environment& env, const Site& x0, double t, double tol) {
    if (t < 0) throw ConfigError("heat_kernel_continuous: t >= 0 required");
    const auto pw = special::poisson_weights(t, tol / 2.0);
    const int nmax = static_cast<int>(pw.p.size()) - 1;
    // Box radius nmax+1 makes the spatial truncation exact; if the Hoeffding
    // radius is smaller we use it and report the measured deficit.
    const int radius = std::min<int>(nmax + 1, std::max(4, static_cast<int>(
                                                  std::ceil(truncation_radius(t, tol / 2.0)))));
    KernelSlice out;
    out.x0 = x0;
    out.time = t;
    out.discrete = false;

    Grid cur = box_grid(env.dim(), radius, x0);
    Grid nxt = box_grid(env.dim(), radius, x0);
    Grid acc = box_grid(env.dim(), radius, x0);
    const GridWeights W = grid_weights(env, cur);
    cur.at(Site{}) = 1.0;
    for (int n = 0; n <= nmax; ++n) {
        grid_axpy(acc, cur, pw.p[static_cast<std::size_t>(n)]);
        if (n < nmax) {
            mass_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }
    out.deficit = std::max(0.0, 1.0 - inner_sum(acc));
    out.field = std::move(acc);
    return out;
}

std::vector<double> generator_trace(const Environment& env, const Site& base, int radius,
                                    int nsteps, const std::function<double(const Site&)>& init,
                                    const Site& read_site) {
    Grid cur = box_grid(env.dim(), radius, base);
    Grid nxt = box_grid(env.dim(), radius, base);
    const GridWeights W = grid_weights(env, cur);
    for_each_inner(cur, [&](const Site& rel, std::int64_t k) {
        cur.a[static_cast<std::size_t>(k)] = init(base + rel);
    });
    const Site rel = read_site - base;
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(nsteps) + 1);
    for (int n = 0;; ++n) {
        trace.push_back(cur.at(rel));
        if (n == nsteps) break;
        generator_step(cur, W, nxt);
        cur.a.swap(nxt.a);
    }
    return trace;
}

std::vector<std::vector<double>> generator_trace_multi(
    const Environment& env, const Site& base, int radius, int nsteps,
    const std::function<double(const Site&)>& init, const std::vector<Site>& read_sites) {
    Grid cur = box_grid(env.dim(), radius, base);
    Grid nxt = box_grid(env.dim(), radius, base);
    const GridWeights W = grid_weights(env, cur);
    for_each_inner(cur, [&](const Site& rel, std::int64_t k) {
        cur.a[static_cast<std::size_t>(k)] = init(base + rel);
    });
    std::vector<std::vector<double>> traces(read_sites.size());
    for (auto& t : traces) t.reserve(static_cast<std::size_t>(nsteps) + 1);
    for (int n = 0;; ++n) {
        for (std::size_t s = 0; s < read_sites.size(); ++s)
            traces[s].push_back(cur.at(read_sites[s] - base));
        if (n == nsteps) break;
        generator_step(cur, W, nxt);
        cur.a.swap(nxt.a);
    }
    return traces;
}

double semigroup_apply(const Environment& env, const Observable& zeta, double t, double tol) {
    if (t < 0) throw ConfigError("semigroup_apply: t >= 0 required");
    if (t == 0.0) return zeta.evaluate(env);
    const auto pw = special::poisson_weights(t, tol / 2.0);
    const int nmax = static_cast<int>(pw.p.size()) - 1;
    const int radius = nmax + 1;  // exact at the read-off site
    const auto tr = generator_trace(
        env, Site{}, radius, nmax,
        [&](const Site& x) { return zeta.evaluate(env, x); }, Site{});
    double acc = 0.0;
    for (int n = 0; n <= nmax; ++n) acc += pw.p[static_cast<std::size_t>(n)] * tr[static_cast<std::size_t>(n)];
    return acc;
}

double potential_kernel(const Environment& env, const Site& x, double tol) {
    if (env.dim() != 2) throw DimensionError("potential_kernel: defined for d = 2 only");
    if (!(tol > 0)) throw ConfigError("potential_kernel: tol > 0 required");
    const Site rel = x;
    if (rel == Site{}) return 0.0;

    const double T = std::max(rel.norm2sq(2), 1.0) / std::sqrt(tol);
    long m2 = std::max<long>(8, static_cast<long>(std::ceil(T)));
    if (m2 % 2 == 1) ++m2;
    const long m1 = m2 / 2;
    const int nsteps = static_cast<int>(2 * m2 - 1);
    int radius = nsteps + 1;
    for (int i = 0; i < 2; ++i) radius = std::max(radius, std::abs(rel[i]) + 2);

    Grid cur = box_grid(2, radius, Site{});
    Grid nxt = box_grid(2, radius, Site{});
    const GridWeights W = grid_weights(env, cur);
    cur.at(Site{}) = 1.0;  // v_n(y) = p_n(y, 0)

    double partial = 0.0, s1 = 0.0, s2 = 0.0;
    for (int n = 0; n <= nsteps; ++n) {
        partial += cur.at(Site{}) - cur.at(rel);
        if (n == 2 * m1 - 1) s1 = partial;
        if (n == 2 * m2 - 1) s2 = partial;
        if (n < nsteps) {
            generator_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }
    const double value = 2.0 * s2 - s1;
    if (std::abs(s2 - s1) > 50.0 * tol * (1.0 + std::abs(value)))
        throw SolverError("potential_kernel: tail estimate did not converge", std::abs(s2 - s1), nsteps);
    return value;
}

double green_whole(const Environment& env, const Site& x, double tol, GreenWholeDetail* detail) {
    if (env.dim() < 3) throw DimensionError("green_whole: defined for d >= 3 only");
    SolverConfig cfg;
    cfg.tol = 1e-12;
    cfg.relaxation = 1.6;
    double R = std::max(4.0, 2.0 * (x.norm2(env.dim()) + 1.0));
    GreenWholeDetail det;
    double prev_extr = 0.0;
    double value = 0.0;
    for (int k = 0;; ++k) {
        const double g = green_ball(env, R, {Site{}}, cfg).at(x);
        det.radii.push_back(R);
        det.ball_values.push_back(g);
        if (k >= 1) {
            const double extr = 2.0 * det.ball_values[static_cast<std::size_t>(k)] -
                                det.ball_values[static_cast<std::size_t>(k - 1)];
            if (k >= 2 && std::abs(extr - prev_extr) < tol / 2.0) {
                value = extr;
                break;
            }
            prev_extr = extr;
        }
        R *= 2.0;
        if (R > 512.0)
            throw SolverError("green_whole: doubling limit did not converge", std::abs(prev_extr), k);
    }
    det.value = value;
    if (detail != nullptr) *detail = det;
    return value;
}

Grid time_integrated_field(const Environment& env, double T, double tol) {
    if (T < 0) throw ConfigError("time_integrated_kernel: T >= 0 required");
    const auto w = special::poisson_integral_weights(T, tol);
    const int nmax = static_cast<int>(w.size()) - 1;
    const int radius = std::max(1, nmax + 1);
    Grid cur = box_grid(env.dim(), radius, Site{});
    Grid nxt = box_grid(env.dim(), radius, Site{});
    Grid acc = box_grid(env.dim(), radius, Site{});
    if (w.empty()) return acc;
    const GridWeights Wts = grid_weights(env, cur);
    cur.at(Site{}) = 1.0;  // v_n(y) = p_n(y, 0)
    for (int n = 0; n <= nmax; ++n) {
        grid_axpy(acc, cur, w[static_cast<std::size_t>(n)]);
        if (n < nmax) {
            generator_step(cur, Wts, nxt);
            cur.a.swap(nxt.a);
        }
    }
    return acc;
}

double time_integrated_kernel(const Environment& env, const Site& x, double T, double tol) {
    if (T == 0.0) return 0.0;
    const Grid f = time_integrated_field(env, T, tol);
    return f.inside(x) ? f.at(x) : 0.0;
}

}  // namespace rwre
