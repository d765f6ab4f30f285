#include "rwre/invariant.hpp"

#include <cmath>

#include "rwre/grid.hpp"
#include "rwre/solver.hpp"

namespace rwre {

namespace {
// max |rho P - rho| with rho held in `cur` (non-const: halo refresh).
double invariance_residual(Grid& cur, const GridWeights& W, Grid& tmp) {
    mass_step(cur, W, tmp);
    return inner_max_abs_diff(cur, tmp);
}
}  // namespace

InvariantMeasure torus_invariant_measure(const Environment& env, int L, double tol,
                                         long max_iters) {
    if (L < 3) throw DomainError("torus side must be >= 3");
    const int d = env.dim();
    Grid cur = torus_grid(d, L);
    Grid nxt = torus_grid(d, L);
    Grid tmp = torus_grid(d, L);
    const GridWeights W = grid_weights(env, cur);
    const double vol = std::pow(static_cast<double>(L), d);
    for_each_inner(cur, [&](const Site&, std::int64_t k) { cur.a[static_cast<std::size_t>(k)] = 1.0; });

    if (max_iters == 0) {
        max_iters = static_cast<long>(500.0 * double(L) * double(L) * std::log(1.0 / tol) /
                                      std::max(env.kappa(), 1e-3));
        max_iters = std::min(max_iters, 200000000L);
    }
    const long check_every = 64;
    double res = std::numeric_limits<double>::infinity();
    long it = 0;
    for (; it < max_iters; ++it) {
        // lazy step rho <- (rho + rho P)/2 kills the period-2 lattice mode
        mass_step(cur, W, nxt);
        grid_axpy(nxt, cur, 1.0);
        for_each_inner(nxt, [&](const Site&, std::int64_t k) { nxt.a[static_cast<std::size_t>(k)] *= 0.5; });
        cur.a.swap(nxt.a);
        if ((it + 1) % check_every == 0) {
            const double mean = inner_sum(cur) / vol;
            for_each_inner(cur, [&](const Site&, std::int64_t k) { cur.a[static_cast<std::size_t>(k)] /= mean; });
            res = invariance_residual(cur, W, tmp);
            if (res <= tol) break;
        }
    }
    {
        const double mean = inner_sum(cur) / vol;
        for_each_inner(cur, [&](const Site&, std::int64_t k) { cur.a[static_cast<std::size_t>(k)] /= mean; });
        res = invariance_residual(cur, W, tmp);
    }
    if (res > tol)
        throw SolverError("torus_invariant_measure: no convergence within iteration cap", res, it);

    InvariantMeasure out;
    out.L = L;
    out.residual = res;
    auto dom = LatticeDomain::torus(L, d);
    Field f(dom);
    std::size_t idx = 0;
    for_each_inner(cur, [&](const Site&, std::int64_t k) {
        f.interior_values()[idx++] = cur.a[static_cast<std::size_t>(k)];
    });
    out.field = std::move(f);
    return out;
}

EffectiveData effective_matrix(const Environment& env, const InvariantMeasure& inv,
                               const Observable* psi) {
    const int d = env.dim();
    const auto& dom = inv.field.domain();
    EffectiveData out;
    double tot = 0.0;
    std::array<double, MAX_DIM> acc{};
    double acc_psi = 0.0;
    for (std::size_t k = 0; k < dom.sites().size(); ++k) {
        const Site& x = dom.sites()[k];
        const double r = inv.field.interior_values()[k];
        tot += r;
        const DiagWeights w = env.site_weights(x);
        for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)] += r * w[i];
        if (psi != nullptr) acc_psi += r * psi->evaluate(env, x);
    }
    for (int i = 0; i < d; ++i) out.a_bar[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)] / tot;
    out.psi_bar = psi != nullptr ? acc_psi / tot : 1.0;
    return out;
}

EffectiveData effective_matrix(const Environment& env, int L, double tol) {
    return effective_matrix(env, torus_invariant_measure(env, L, tol), nullptr);
}

double rho_ball_ratio(const InvariantMeasure& inv, double r) {
    const auto& dom = inv.field.domain();
    const int d = dom.dim();
    if (2.0 * std::ceil(r) + 1.0 > dom.torus_side())
        throw DomainError("rho_ball_ratio: ball does not fit in the torus fundamental domain");
    double sum = 0.0;
    for (std::size_t k = 0; k < dom.sites().size(); ++k) {
        const Site c = dom.wrap_centered(dom.sites()[k]);
        if (c.norm2(d) < r) sum += inv.field.interior_values()[k];
    }
    return std::pow(r, d) * inv.rho(Site{}) / sum;
}

double adjoint_transition(const Environment& env, const InvariantMeasure& inv, const Site& x,
                          const Site& y) {
    const auto& dom = inv.field.domain();
    const Site wx = dom.wrap(x);
    const Site wy = dom.wrap(y);
    const double rx = inv.field.at(wx);
    if (!(rx > 0.0)) throw std::invalid_argument("adjoint_transition: nonpositive rho");
    // omega(y, x) with torus-periodized steps
    const Site diff = dom.wrap_centered(x - y);
    int axis = -1;
    for (int i = 0; i < dom.dim(); ++i) {
        if (diff[i] != 0) {
            if (axis >= 0 || std::abs(diff[i]) != 1) return 0.0;
            axis = i;
        }
    }
    if (axis < 0) return 0.0;
    const double w_yx = env.site_weights(wy)[axis] / 2.0;
    return inv.field.at(wy) * w_yx / rx;
}

AdjointCheckReport adjoint_harmonicity_check(const Environment& env, int L, double r,
                                             double tol) {
    if (2.0 * (std::ceil(r) + 2.0) + 1.0 > L)
        throw DomainError("adjoint_harmonicity_check: ball B_r + stencil must fit in the torus");
    const InvariantMeasure inv = torus_invariant_measure(env, L, std::min(tol * 1e-2, 1e-13));

    // Work on a ball centered in the fundamental cell so the periodized and
    // plain environments agree on the whole stencil.
    Site c{};
    for (int i = 0; i < env.dim(); ++i) c[i] = L / 2;
    const Environment envc = env.shift(c);

    auto dom = ball_sites(Site{}, r, env.dim());
    // first boundary site of B_{r/2}, lexicographic
    auto half = ball_sites(Site{}, r / 2.0, env.dim());
    const Site y0 = half->boundary().front();

    const Field G = green_row(envc, r, y0, std::min(tol * 1e-3, 1e-13));
    Field rho_ball = Field::from_function(
        dom, [&](const Site& x) { return inv.rho(inv.field.domain().wrap(c + x)); });
    Field v = Field::from_function(dom, [&](const Site& x) { return G.at(x) / rho_ball.at(x); });

    AdjointCheckReport rep;
    rep.y0 = y0;
    rep.v_sup = v.max_abs();
    rep.expected_source = -1.0 / rho_ball.at(y0);
    for (const Site& x : dom->sites()) {
        const double lv = apply_adjoint(envc, rho_ball, v, x);
        if (x == y0)
            rep.source_value = lv;
        else
            rep.residual_max = std::max(rep.residual_max, std::abs(lv));
    }
    return rep;
}

double harnack_ratio(const Environment& env, const InvariantMeasure& inv, double r) {
    const int L = inv.L;
    if (2.0 * (std::ceil(r) + 2.0) + 1.0 > L)
        throw DomainError("harnack_ratio: ball B_r + stencil must fit in the torus");
    Site c{};
    for (int i = 0; i < env.dim(); ++i) c[i] = L / 2;
    const Environment envc = env.shift(c);
    auto quarter = ball_sites(Site{}, r / 4.0, env.dim());
    auto half = ball_sites(Site{}, r / 2.0, env.dim());
    const Site y0 = half->boundary().front();
    const Field G = green_row(envc, r, y0, 1e-13);
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    for (const Site& x : quarter->sites()) {
        const double v = G.at(x) / inv.rho(inv.field.domain().wrap(c + x));
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    if (!(vmin > 0.0)) throw SolverError("harnack_ratio: nonpositive v", vmin, 0);
    return vmax / vmin;
}

}  // namespace rwre
