#include "rwre/experiments.hpp"

#include <cmath>

#include "rwre/grid.hpp"
#include "rwre/kernels.hpp"
#include "rwre/rng.hpp"
#include "rwre/testfn.hpp"

namespace rwre::experiments {

double effective_solution(HomogCase c, const std::array<double, MAX_DIM>& x, int d) {
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) n2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (n2 > 1.0 + 1e-12) throw ConfigError("effective_solution: |x| <= 1 required");
    switch (c) {
        case HomogCase::A: return x[0];
        case HomogCase::B: return n2 - 1.0;
        case HomogCase::C: return x[0] * x[0] - x[1] * x[1];
    }
    throw ConfigError("effective_solution: unknown case");
}

double homogenization_error(const Environment& env, double R, HomogCase c,
                            const SolverConfig& cfg) {
    if (!(R >= 2.0)) throw ConfigError("homogenization_error: R >= 2 required");
    const int d = env.dim();
    if (c == HomogCase::C && !env.law().exchangeable())
        throw ConfigError("homogenization_error: case C needs a coordinate-exchangeable law");
    auto dom = ball_sites(Site{}, R, d);

    auto gfun = [&](const Site& z) -> double {
        const double nz = z.norm2(d);
        switch (c) {
            case HomogCase::A: return z[0] / nz;
            case HomogCase::B: return 0.0;
            case HomogCase::C:
                return (double(z[0]) * z[0] - double(z[1]) * z[1]) / (nz * nz);
        }
        return 0.0;
    };
    auto rhsfun = [&](const Site&) -> double {
        // psi-tilde == 1 for the built-in cases; f == 1 for case B, 0 otherwise
        return c == HomogCase::B ? 1.0 / (R * R) : 0.0;
    };

    const Field u = dirichlet_solve(env, dom, rhsfun, gfun, cfg);
    double err = 0.0;
    for (const Site& x : dom->sites()) {
        std::array<double, MAX_DIM> xs{};
        for (int i = 0; i < d; ++i) xs[static_cast<std::size_t>(i)] = x[i] / R;
        err = std::max(err, std::abs(u.at(x) - effective_solution(c, xs, d)));
    }
    return err;
}

special::LineFit rate_fit(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw ConfigError("rate_fit: need >= 2 pairs");
    std::vector<double> lx, ly;
    for (const auto& [r, e] : pairs) {
        if (!(e > 0) || !(r > 0)) throw ConfigError("rate_fit: positive entries required");
        lx.push_back(std::log(r));
        ly.push_back(std::log(e));
    }
    return special::least_squares(lx, ly);
}

CorrectorGrowth corrector_growth(const Environment& env, const std::vector<double>& r_grid,
                                 const std::array<double, MAX_DIM>& a_bar,
                                 const SolverConfig& cfg) {
    const int d = env.dim();
    CorrectorGrowth out;
    std::vector<std::pair<double, double>> pairs;
    for (double R : r_grid) {
        auto dom = ball_sites(Site{}, R, d);
        double worst = 0.0;
        for (int i = 0; i < d; ++i) {
            const Field phi = dirichlet_solve(
                env, dom,
                [&](const Site& x) { return a_bar[static_cast<std::size_t>(i)] - env.site_weights(x)[i]; },
                [](const Site&) { return 0.0; }, cfg);
            for (double v : phi.interior_values()) worst = std::max(worst, std::abs(v));
        }
        out.radii.push_back(R);
        out.max_abs.push_back(worst);
        if (worst > 0) pairs.emplace_back(R, worst);
    }
    out.fitted_exponent = pairs.size() >= 2 ? rate_fit(pairs).slope : 0.0;
    return out;
}

double local_discrepancy(const Environment& env, const Site& x, double R0,
                         const Observable& zeta, double zeta_mean, const SolverConfig& cfg) {
    auto dom = ball_sites(x, R0, env.dim());
    const Field u = dirichlet_solve(
        env, dom,
        [&](const Site& y) { return -(zeta.evaluate(env, y) - zeta_mean); },
        [](const Site&) { return 0.0; }, cfg);
    return u.at(x);
}

BadPointCount count_bad_points(const Environment& env, double R, double R0, double delta,
                               double c_thresh, const std::vector<Observable>& zetas,
                               const std::vector<double>& zeta_means, double gamma,
                               const SolverConfig& cfg) {
    if (zetas.size() != zeta_means.size())
        throw ConfigError("count_bad_points: one mean per observable required");
    const int d = env.dim();
    auto window = ball_sites(Site{}, R - R0, d);
    BadPointCount out;
    out.window_sites = static_cast<long>(window->sites().size());
    for (const Site& x : window->sites()) {
        bool bad = false;
        for (std::size_t j = 0; j < zetas.size() && !bad; ++j) {
            const double thr = c_thresh * zetas[j].bound * std::pow(R0, 2.0 - delta);
            const double disc = local_discrepancy(env, x, R0, zetas[j], zeta_means[j], cfg);
            bad = std::abs(disc) > thr;
        }
        if (bad) ++out.count;
    }
    out.x_statistic = std::pow(R, -gamma) * std::pow(static_cast<double>(out.count), 1.0 / d);
    return out;
}

double vertical_derivative(const Environment& env, std::uint64_t aux_seed, const Site& y,
                           const std::function<double(const Environment&)>& functional) {
    const Environment envp = env.resample_site(y, aux_seed);
    return functional(envp) - functional(env);
}

double efron_stein_V(const Environment& env, std::uint64_t aux_seed,
                     const std::vector<Site>& sites,
                     const std::function<double(const Environment&)>& functional) {
    const double z0 = functional(env);
    double acc = 0.0;
    for (const Site& y : sites) {
        const std::uint64_t s = rng::draw_u64(aux_seed, rng::site_key(y.c.data(), env.dim()), 0,
                                              rng::STREAM_RESAMPLE);
        const Environment envp = env.resample_site(y, s);
        const double dz = functional(envp) - z0;
        acc += dz * dz;
    }
    return acc;
}

namespace {
// Poisson mixture sum_n pi_n(u) q_n over a finite trace.
double poisson_mix(const std::vector<double>& trace, double u) {
    if (u == 0.0) return trace.empty() ? 0.0 : trace[0];
    double pn = std::exp(-u);
    double acc = 0.0;
    for (std::size_t n = 0; n < trace.size(); ++n) {
        if (n > 0) pn *= u / static_cast<double>(n);
        acc += pn * trace[n];
    }
    return acc;
}
}  // namespace

DuhamelReport duhamel_check(const Environment& env, std::uint64_t aux_seed, const Site& y,
                            const Observable& zeta, double t, double quad_tol) {
    const int d = env.dim();
    const Environment envp = env.resample_site(y, aux_seed);
    const double ktol = std::min(quad_tol * 1e-2, 1e-9);
    const auto pw = special::poisson_weights(t, ktol);
    const int nmax = static_cast<int>(pw.p.size()) - 1;
    const Site x{};  // evaluation point of the vertical derivative

    // LHS: two semigroup evaluations at (t, x).
    auto zbar = [&](const Site& z) { return zeta.evaluate(env, z); };
    auto zbarp = [&](const Site& z) { return zeta.evaluate(envp, z); };
    const int rad_x = nmax + 1 + zeta.support_radius(d);
    const auto tr_v = generator_trace(env, x, rad_x, nmax, zbar, x);
    const auto tr_vp = generator_trace(envp, x, rad_x, nmax, zbarp, x);
    DuhamelReport rep;
    rep.lhs = poisson_mix(tr_vp, t) - poisson_mix(tr_v, t);

    // support term: sum_z p_t(x,z) [zeta(theta_z omega') - zeta(theta_z omega)],
    // nonzero only for z with y in z + Supp(zeta).
    {
        const KernelSlice ks = heat_kernel_continuous(env, x, t, ktol);
        double acc = 0.0;
        for (const Site& s : zeta.support) {
            const Site z = y - s;
            acc += ks.prob(z) * (zeta.evaluate(envp, z) - zeta.evaluate(env, z));
        }
        rep.term_support = acc;
    }

    // integral term: int_0^t p_{t-s}(x,y) * (1/2) sum_i dw_i nabla_i^2 vbar'(s,y) ds
    {
        int raxis = 0;
        for (int i = 0; i < d; ++i) raxis = std::max(raxis, std::abs((y - x)[i]));
        const auto tr_q = generator_trace(
            env, x, nmax + 1 + raxis,
            nmax, [&](const Site& z) { return z == y ? 1.0 : 0.0; }, x);  // q_n = p_n(x, y)

        std::vector<Site> reads = {y};
        for (int i = 0; i < d; ++i) {
            reads.push_back(y.shifted(i, +1));
            reads.push_back(y.shifted(i, -1));
        }
        const auto tr_r = generator_trace_multi(envp, y, nmax + 2 + zeta.support_radius(d), nmax,
                                                zbarp, reads);

        DiagWeights w0 = env.site_weights(y);
        DiagWeights w1 = envp.site_weights(y);
        std::array<double, MAX_DIM> dw{};
        for (int i = 0; i < d; ++i) dw[static_cast<std::size_t>(i)] = w1[i] - w0[i];

        auto integrand = [&](double s) {
            const double p = poisson_mix(tr_q, t - s);
            const double vy = poisson_mix(tr_r[0], s);
            double acc = 0.0;
            for (int i = 0; i < d; ++i) {
                const double vp = poisson_mix(tr_r[static_cast<std::size_t>(1 + 2 * i)], s);
                const double vm = poisson_mix(tr_r[static_cast<std::size_t>(2 + 2 * i)], s);
                acc += dw[static_cast<std::size_t>(i)] * (vp + vm - 2.0 * vy);
            }
            // the 1/2 is the generator normalization for sum-1 weights:
            // (d_y L) u = (1/2) sum_i (dw_i) nabla_i^2 u at y
            return p * 0.5 * acc;
        };
        rep.term_integral = special::adaptive_simpson(integrand, 0.0, t, quad_tol);
    }

    rep.rhs = rep.term_support + rep.term_integral;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

DecayCurve semigroup_decay(const EnvironmentLaw& law, const Observable& zeta,
                           const std::vector<double>& t_grid, long n_env, int L,
                           std::uint64_t seed, double kernel_tol, double rho_tol) {
    if (n_env < 30) throw ConfigError("semigroup_decay: n_env >= 30 required");
    if (t_grid.empty()) throw ConfigError("semigroup_decay: empty t grid");
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const auto pw_max = special::poisson_weights(t_max, kernel_tol / 2.0);
    const int nmax = static_cast<int>(pw_max.p.size()) - 1;
    const int d = law.dim;

    // Poisson weight table per grid time.
    std::vector<std::vector<double>> pi(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j)
        pi[j] = special::poisson_weights(t_grid[j], kernel_tol / 2.0).p;

    std::vector<double> rho0(static_cast<std::size_t>(n_env));
    std::vector<double> zeta0(static_cast<std::size_t>(n_env));
    std::vector<std::vector<double>> v(t_grid.size(),
                                       std::vector<double>(static_cast<std::size_t>(n_env)));
    for (long k = 0; k < n_env; ++k) {
        EnvironmentLaw lk = law;
        lk.master_seed = rng::draw_u64(seed, 0xDECA, static_cast<std::uint64_t>(k),
                                       rng::STREAM_GENERIC);
        const Environment env(lk);
        rho0[static_cast<std::size_t>(k)] =
            torus_invariant_measure(env, L, rho_tol).rho(Site{});
        zeta0[static_cast<std::size_t>(k)] = zeta.evaluate(env);
        const auto tr = generator_trace(
            env, Site{}, nmax + 1 + zeta.support_radius(d), nmax,
            [&](const Site& z) { return zeta.evaluate(env, z); }, Site{});
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            double acc = 0.0;
            const auto& pj = pi[j];
            for (std::size_t n = 0; n < pj.size() && n < tr.size(); ++n) acc += pj[n] * tr[n];
            v[j][static_cast<std::size_t>(k)] = acc;
        }
    }

    DecayCurve out;
    out.n_env = n_env;
    double wsum = 0.0, wz = 0.0;
    for (long k = 0; k < n_env; ++k) {
        wsum += rho0[static_cast<std::size_t>(k)];
        wz += rho0[static_cast<std::size_t>(k)] * zeta0[static_cast<std::size_t>(k)];
    }
    out.eq_zeta = wz / wsum;

    const int B = 10;  // batches for stderr, replicate order
    auto weighted_var = [&](const std::vector<double>& vals, long lo, long hi) {
        double sw = 0, swv = 0;
        for (long k = lo; k < hi; ++k) {
            sw += rho0[static_cast<std::size_t>(k)];
            swv += rho0[static_cast<std::size_t>(k)] * vals[static_cast<std::size_t>(k)];
        }
        const double m = swv / sw;
        double acc = 0;
        for (long k = lo; k < hi; ++k)
            acc += rho0[static_cast<std::size_t>(k)] *
                   (vals[static_cast<std::size_t>(k)] - m) * (vals[static_cast<std::size_t>(k)] - m);
        return acc / sw;
    };
    auto l1_of = [&](const std::vector<double>& vals, long lo, long hi) {
        double acc = 0;
        for (long k = lo; k < hi; ++k)
            acc += std::abs(vals[static_cast<std::size_t>(k)] - out.eq_zeta);
        return acc / static_cast<double>(hi - lo);
    };

    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        out.t.push_back(t_grid[j]);
        out.var_q.push_back(weighted_var(v[j], 0, n_env));
        out.l1.push_back(l1_of(v[j], 0, n_env));
        std::vector<double> bv, bl;
        for (int b = 0; b < B; ++b) {
            const long lo = n_env * b / B, hi = n_env * (b + 1) / B;
            if (hi > lo + 1) {
                bv.push_back(weighted_var(v[j], lo, hi));
                bl.push_back(l1_of(v[j], lo, hi));
            }
        }
        auto sd_of = [](const std::vector<double>& xs) {
            double m = 0;
            for (double x : xs) m += x;
            m /= static_cast<double>(xs.size());
            double s = 0;
            for (double x : xs) s += (x - m) * (x - m);
            return std::sqrt(s / static_cast<double>(xs.size() - 1) /
                             static_cast<double>(xs.size()));
        };
        out.var_q_stderr.push_back(sd_of(bv));
        out.l1_stderr.push_back(sd_of(bl));
    }

    std::vector<double> lx, lx1, lv, ll;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (!(t_grid[j] > 0)) continue;
        lx.push_back(std::log(t_grid[j]));
        lx1.push_back(std::log(1.0 + t_grid[j]));
        lv.push_back(std::log(std::max(out.var_q[j], 1e-300)));
        ll.push_back(std::log(std::max(out.l1[j], 1e-300)));
    }
    if (lx.size() >= 2) {
        out.var_slope = special::least_squares(lx, lv).slope;
        out.l1_slope = special::least_squares(lx, ll).slope;
        out.var_slope_1pt = special::least_squares(lx1, lv).slope;
        out.l1_slope_1pt = special::least_squares(lx1, ll).slope;
    }
    return out;
}

namespace {
// rho-weighted mean over the torus (rho normalized to mean 1).
double q_mean(const Grid& rho, const Grid& f, double vol) {
    double acc = 0.0;
    for_each_inner(rho, [&](const Site&, std::int64_t k) {
        acc += rho.a[static_cast<std::size_t>(k)] * f.a[static_cast<std::size_t>(k)];
    });
    return acc / vol;
}
}  // namespace

CaccioppoliReport caccioppoli_check(const Environment& env, const Observable& zeta, double t,
                                    double h, int L, double kernel_tol) {
    if (!(h > 0) || h >= t) throw ConfigError("caccioppoli_check: need 0 < h < t");
    const int d = env.dim();
    const double vol = std::pow(static_cast<double>(L), d);
    const InvariantMeasure inv = torus_invariant_measure(env, L, 1e-12);

    Grid rho = torus_grid(d, L);
    std::size_t idx = 0;
    for_each_inner(rho, [&](const Site&, std::int64_t k) {
        rho.a[static_cast<std::size_t>(k)] = inv.field.interior_values()[idx++];
    });

    Grid zf = torus_grid(d, L);
    for_each_inner(zf, [&](const Site& rel, std::int64_t k) {
        zf.a[static_cast<std::size_t>(k)] = zeta.evaluate(env, rel);
    });
    const GridWeights W = grid_weights(env, zf);

    // accumulate v(t-h), v(t), v(t+h) fields in one evolution
    const auto pw = special::poisson_weights(t + h, kernel_tol);
    const int nmax = static_cast<int>(pw.p.size()) - 1;
    std::vector<double> pm = special::poisson_weights(t - h, kernel_tol).p;
    std::vector<double> p0 = special::poisson_weights(t, kernel_tol).p;
    std::vector<double> pp = pw.p;
    Grid vm = torus_grid(d, L), v0 = torus_grid(d, L), vp = torus_grid(d, L);
    Grid cur = zf, nxt = torus_grid(d, L);
    for (int n = 0; n <= nmax; ++n) {
        if (n < static_cast<int>(pm.size())) grid_axpy(vm, cur, pm[static_cast<std::size_t>(n)]);
        if (n < static_cast<int>(p0.size())) grid_axpy(v0, cur, p0[static_cast<std::size_t>(n)]);
        grid_axpy(vp, cur, pp[static_cast<std::size_t>(n)]);
        if (n < nmax) {
            generator_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }

    auto var_q = [&](Grid& f) {
        const double m = q_mean(rho, f, vol);
        double acc = 0.0;
        for_each_inner(rho, [&](const Site&, std::int64_t k) {
            const double dv = f.a[static_cast<std::size_t>(k)] - m;
            acc += rho.a[static_cast<std::size_t>(k)] * dv * dv;
        });
        return acc / vol;
    };

    CaccioppoliReport rep;
    rep.dvar_dt = (var_q(vp) - var_q(vm)) / (2.0 * h);

    // Dirichlet forms at time t
    torus_halo(v0);
    torus_halo(rho);
    double dir_w = 0.0, dir_plain = 0.0;
    for_each_inner(v0, [&](const Site& rel, std::int64_t k) {
        const double vx = v0.a[static_cast<std::size_t>(k)];
        const double rx = rho.a[static_cast<std::size_t>(k)];
        const DiagWeights w = env.site_weights(rel);
        for (int i = 0; i < d; ++i) {
            const double vpn = v0.a[static_cast<std::size_t>(k + v0.stride[i])];
            const double vmn = v0.a[static_cast<std::size_t>(k - v0.stride[i])];
            const double gp = vpn - vx, gm = vmn - vx;
            dir_w += rx * 0.5 * w[i] * (gp * gp + gm * gm);
            dir_plain += rx * 0.5 * (gp * gp + gm * gm);
        }
    });
    rep.dirichlet_omega = dir_w / vol;
    rep.dirichlet_plain = dir_plain / vol;
    rep.identity_residual = std::abs(rep.dvar_dt + rep.dirichlet_omega);
    rep.ellipticity_margin = rep.dirichlet_omega - 2.0 * env.kappa() * rep.dirichlet_plain;
    return rep;
}

StationaryCorrector stationary_corrector(const Environment& env, const Observable& zeta,
                                         double T, double quad_tol, int L) {
    const int d = env.dim();
    const double vol = std::pow(static_cast<double>(L), d);
    const InvariantMeasure inv = torus_invariant_measure(env, L, std::min(quad_tol * 1e-2, 1e-12));

    Grid rho = torus_grid(d, L);
    std::size_t idx = 0;
    for_each_inner(rho, [&](const Site&, std::int64_t k) {
        rho.a[static_cast<std::size_t>(k)] = inv.field.interior_values()[idx++];
    });

    Grid zc = torus_grid(d, L);
    for_each_inner(zc, [&](const Site& rel, std::int64_t k) {
        zc.a[static_cast<std::size_t>(k)] = zeta.evaluate(env, rel);
    });
    const double eqz = q_mean(rho, zc, vol);
    for_each_inner(zc, [&](const Site&, std::int64_t k) { zc.a[static_cast<std::size_t>(k)] -= eqz; });
    const GridWeights W = grid_weights(env, zc);

    const auto iw = special::poisson_integral_weights(T, quad_tol / 2.0);
    const auto pw = special::poisson_weights(T, quad_tol / 2.0);
    const int nmax = static_cast<int>(std::max(iw.size(), pw.p.size())) - 1;

    Grid phi = torus_grid(d, L);   // -int_0^T P_s zeta_c ds
    Grid pt = torus_grid(d, L);    // P_T zeta_c
    Grid cur = zc, nxt = torus_grid(d, L);
    for (int n = 0; n <= nmax; ++n) {
        if (n < static_cast<int>(iw.size())) grid_axpy(phi, cur, -iw[static_cast<std::size_t>(n)]);
        if (n < static_cast<int>(pw.p.size())) grid_axpy(pt, cur, pw.p[static_cast<std::size_t>(n)]);
        if (n < nmax) {
            generator_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }

    // residual of L phi = zeta_c - P_T zeta_c
    Grid lphi = torus_grid(d, L);
    generator_step(phi, W, lphi);  // P phi
    StationaryCorrector out;
    out.eq_zeta = eqz;
    double res_global = 0.0;
    double res_stencil = 0.0;
    for_each_inner(phi, [&](const Site& rel, std::int64_t k) {
        const double lv = lphi.a[static_cast<std::size_t>(k)] - phi.a[static_cast<std::size_t>(k)];
        const double target = zc.a[static_cast<std::size_t>(k)] - pt.a[static_cast<std::size_t>(k)];
        const double r = std::abs(lv - target);
        res_global = std::max(res_global, r);
        if (rel.norm1(d) <= 1) res_stencil = std::max(res_stencil, r);
    });
    out.residual = res_stencil;
    out.residual_global = res_global;

    auto dom = LatticeDomain::torus(L, d);
    Field f(dom);
    idx = 0;
    for_each_inner(phi, [&](const Site&, std::int64_t k) {
        f.interior_values()[idx++] = phi.a[static_cast<std::size_t>(k)];
    });
    out.phi = std::move(f);
    return out;
}

std::vector<double> rho_origin_samples(const EnvironmentLaw& law, long n_env, int L,
                                       std::uint64_t seed, double rho_tol) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_env));
    for (long k = 0; k < n_env; ++k) {
        EnvironmentLaw lk = law;
        lk.master_seed = rng::draw_u64(seed, 0x0100, static_cast<std::uint64_t>(k),
                                       rng::STREAM_GENERIC);
        const Environment env(lk);
        out.push_back(torus_invariant_measure(env, L, rho_tol).rho(Site{}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

KernelEnvelopeStats kernel_envelope_stats(const Environment& env,
                                          const std::vector<double>& t_grid, double c0,
                                          double C0, double tol) {
    const int d = env.dim();
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const auto pw = special::poisson_weights(t_max, tol);
    const int nmax = static_cast<int>(pw.p.size()) - 1;
    const int radius = nmax + 1;

    // v_n(x) = p_n(x, 0); accumulate a field per grid time.
    Grid cur = box_grid(d, radius, Site{});
    Grid nxt = box_grid(d, radius, Site{});
    const GridWeights W = grid_weights(env, cur);
    cur.at(Site{}) = 1.0;
    std::vector<Grid> acc;
    std::vector<std::vector<double>> pi;
    for (double t : t_grid) {
        acc.push_back(box_grid(d, radius, Site{}));
        pi.push_back(special::poisson_weights(t, tol).p);
    }
    for (int n = 0; n <= nmax; ++n) {
        for (std::size_t j = 0; j < acc.size(); ++j)
            if (n < static_cast<int>(pi[j].size()))
                grid_axpy(acc[j], cur, pi[j][static_cast<std::size_t>(n)]);
        if (n < nmax) {
            generator_step(cur, W, nxt);
            cur.a.swap(nxt.a);
        }
    }

    KernelEnvelopeStats st;
    st.low_statistic = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < acc.size(); ++j) {
        const double t = t_grid[j];
        const double tfac = (d / 2.0) * std::log(1.0 + t);
        for_each_inner(acc[j], [&](const Site& rel, std::int64_t k) {
            const double p = acc[j].a[static_cast<std::size_t>(k)];
            if (p <= 0) return;
            const double r = rel.norm2(d);
            const double up = std::log(p) + tfac + c0 * testfn::mfh(r, t);
            st.sup_statistic = std::max(st.sup_statistic, std::exp(up));
            if (r <= 3.0 * std::sqrt(t) + 3.0) {
                const double low = p * std::pow(1.0 + t, d / 2.0) * std::exp(C0 * r * r / t);
                st.low_statistic = std::min(st.low_statistic, low);
            }
        });
    }
    return st;
}

}  // namespace rwre::experiments
