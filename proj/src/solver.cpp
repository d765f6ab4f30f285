#include "rwre/solver.hpp"

#include <algorithm>
#include <cmath>

namespace rwre {

double second_difference(const Field& u, const Site& x, int axis) {
    return u.at(x.shifted(axis, +1)) + u.at(x.shifted(axis, -1)) - 2.0 * u.at(x);
}

double apply_generator(const Environment& env, const Field& u, const Site& x) {
    const DiagWeights w = env.site_weights(x);
    const double ux = u.at(x);
    double acc = 0.0;
    for (int i = 0; i < env.dim(); ++i)
        acc += 0.5 * w[i] * (u.at(x.shifted(i, +1)) + u.at(x.shifted(i, -1)) - 2.0 * ux);
    return acc;
}

double apply_adjoint(const Environment& env, const Field& rho, const Field& v, const Site& x) {
    const double rx = rho.at(x);
    if (!(rx > 0.0)) throw std::invalid_argument("apply_adjoint: nonpositive rho at base site");
    const double vx = v.at(x);
    double acc = 0.0;
    for (int i = 0; i < env.dim(); ++i) {
        for (int dv : {+1, -1}) {
            const Site y = x.shifted(i, dv);
            const double ry = rho.at(y);
            if (!(ry > 0.0)) throw std::invalid_argument("apply_adjoint: nonpositive rho at neighbor");
            const double w_yx = env.site_weights(y)[i] / 2.0;
            acc += ry * w_yx / rx * (v.at(y) - vx);
        }
    }
    return acc;
}

namespace {

struct BallSystem {
    std::size_t n;
    int dim;
    std::vector<double> w;              // n * dim weights
    const std::vector<std::int64_t>* nbr;  // 2*dim codes per site
};

BallSystem build_system(const Environment& env, const LatticeDomain& dom) {
    BallSystem sys;
    sys.dim = dom.dim();
    sys.n = dom.interior_count();
    sys.nbr = &dom.neighbor_codes();
    sys.w.resize(sys.n * static_cast<std::size_t>(sys.dim));
    for (std::size_t k = 0; k < sys.n; ++k) {
        const DiagWeights dw = env.site_weights(dom.sites()[k]);
        for (int i = 0; i < sys.dim; ++i) sys.w[k * sys.dim + static_cast<std::size_t>(i)] = dw[i];
    }
    return sys;
}

double sweep_residual(const BallSystem& sys, const std::vector<double>& u,
                      const std::vector<double>& bc, const std::vector<double>& rhs) {
    const int d = sys.dim;
    double res = 0.0;
    for (std::size_t k = 0; k < sys.n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            const std::int64_t cp = (*sys.nbr)[k * 2 * d + 2 * i];
            const std::int64_t cm = (*sys.nbr)[k * 2 * d + 2 * i + 1];
            const double vp = cp >= 0 ? u[static_cast<std::size_t>(cp)] : bc[static_cast<std::size_t>(-cp - 1)];
            const double vm = cm >= 0 ? u[static_cast<std::size_t>(cm)] : bc[static_cast<std::size_t>(-cm - 1)];
            acc += 0.5 * sys.w[k * d + static_cast<std::size_t>(i)] * (vp + vm);
        }
        res = std::max(res, std::abs(acc - u[k] - rhs[k]));
    }
    return res;
}

}  // namespace

Field dirichlet_solve(const Environment& env, std::shared_ptr<const LatticeDomain> dom,
                      const std::function<double(const Site&)>& rhs,
                      const std::function<double(const Site&)>& bc, const SolverConfig& cfg,
                      SolveStats* stats) {
    Field rhs_f(dom), bc_f(dom);
    for (std::size_t k = 0; k < dom->interior_count(); ++k)
        rhs_f.interior_values()[k] = rhs(dom->sites()[k]);
    for (std::size_t k = 0; k < dom->boundary_count(); ++k)
        bc_f.boundary_values()[k] = bc(dom->boundary()[k]);
    return dirichlet_solve(env, std::move(dom), rhs_f, bc_f, cfg, stats);
}

Field dirichlet_solve(const Environment& env, std::shared_ptr<const LatticeDomain> dom,
                      const Field& rhs, const Field& bc, const SolverConfig& cfg,
                      SolveStats* stats) {
    cfg.validate();
    if (dom->kind() != DomainKind::Ball) throw DomainError("dirichlet_solve: domain must be a ball");
    if (env.dim() != dom->dim()) throw DomainError("dirichlet_solve: dimension mismatch");

    const BallSystem sys = build_system(env, *dom);
    const int d = sys.dim;
    const std::vector<double>& rhsv = rhs.interior_values();
    const std::vector<double>& bcv = bc.boundary_values();

    long max_iters = cfg.max_iters;
    if (max_iters == 0) {
        const double R = dom->radius();
        max_iters = static_cast<long>(std::ceil(50.0 * (R + 1.0) * (R + 1.0) * std::log(1.0 / cfg.tol)));
        max_iters = std::min(max_iters, 40000000L);
    }

    std::vector<double> u(sys.n, 0.0);
    double omega = cfg.relaxation;
    const long check_every = 64;
    double prev_res = std::numeric_limits<double>::infinity();
    double res = prev_res;
    long it = 0;
    for (; it < max_iters; ++it) {
        for (std::size_t k = 0; k < sys.n; ++k) {
            double acc = 0.0;
            const std::size_t base_n = k * 2 * static_cast<std::size_t>(d);
            const std::size_t base_w = k * static_cast<std::size_t>(d);
            for (int i = 0; i < d; ++i) {
                const std::int64_t cp = (*sys.nbr)[base_n + 2 * static_cast<std::size_t>(i)];
                const std::int64_t cm = (*sys.nbr)[base_n + 2 * static_cast<std::size_t>(i) + 1];
                const double vp = cp >= 0 ? u[static_cast<std::size_t>(cp)] : bcv[static_cast<std::size_t>(-cp - 1)];
                const double vm = cm >= 0 ? u[static_cast<std::size_t>(cm)] : bcv[static_cast<std::size_t>(-cm - 1)];
                acc += 0.5 * sys.w[base_w + static_cast<std::size_t>(i)] * (vp + vm);
            }
            const double newv = acc - rhsv[k];
            u[k] += omega * (newv - u[k]);
        }
        if ((it + 1) % check_every == 0 || sys.n <= 2) {
            res = sweep_residual(sys, u, bcv, rhsv);
            if (res <= cfg.tol) break;
            // Over-relaxation safeguard: fall back toward plain Gauss-Seidel on stall.
            if (omega > 1.0 && res > 0.9 * prev_res) omega = 1.0 + 0.5 * (omega - 1.0);
            prev_res = res;
        }
    }
    res = sweep_residual(sys, u, bcv, rhsv);
    if (stats != nullptr) {
        stats->residual = res;
        stats->iterations = it + 1;
    }
    if (res > cfg.tol)
        throw SolverError("dirichlet_solve: no convergence within max_iters (residual " +
                              std::to_string(res) + ")",
                          res, it);

    Field out(dom);
    out.interior_values() = std::move(u);
    out.boundary_values() = bcv;
    return out;
}

Field green_ball(const Environment& env, double R, const std::vector<Site>& source,
                 const SolverConfig& cfg, SolveStats* stats) {
    auto dom = ball_sites(Site{}, R, env.dim());
    Field rhs(dom);
    for (const Site& s : source) {
        const auto loc = dom->find(s);
        if (loc.region != Region::Interior) throw DomainError("green_ball: source site outside the ball");
        rhs.interior_values()[static_cast<std::size_t>(loc.index)] = -1.0;
    }
    Field bc(dom);
    return dirichlet_solve(env, dom, rhs, bc, cfg, stats);
}

Field green_row(const Environment& env, double R, const Site& y0, double tol) {
    auto dom = ball_sites(Site{}, R, env.dim());
    const auto loc = dom->find(y0);
    if (loc.region != Region::Interior) throw DomainError("green_row: start site outside the ball");
    const BallSystem sys = build_system(env, *dom);
    const int d = sys.dim;

    std::vector<double> mu(sys.n, 0.0), nu(sys.n, 0.0), G(sys.n, 0.0);
    mu[static_cast<std::size_t>(loc.index)] = 1.0;
    const double stop_mass = tol / ((R + 1.0) * (R + 1.0) + 1.0);
    const long cap = static_cast<long>(std::ceil(80.0 * (R + 1.0) * (R + 1.0) * std::log(1.0 / std::max(stop_mass, 1e-300)))) + 16;
    double mass = 1.0;
    for (long it = 0; it < cap && mass > stop_mass; ++it) {
        for (std::size_t k = 0; k < sys.n; ++k) G[k] += mu[k];
        // nu(x) = sum_{y ~ x} mu(y) omega(y, x); mass outside the ball dies.
        std::fill(nu.begin(), nu.end(), 0.0);
        mass = 0.0;
        for (std::size_t k = 0; k < sys.n; ++k) {
            double acc = 0.0;
            const std::size_t base_n = k * 2 * static_cast<std::size_t>(d);
            for (int i = 0; i < d; ++i) {
                const std::int64_t cp = (*sys.nbr)[base_n + 2 * static_cast<std::size_t>(i)];
                const std::int64_t cm = (*sys.nbr)[base_n + 2 * static_cast<std::size_t>(i) + 1];
                if (cp >= 0)
                    acc += 0.5 * sys.w[static_cast<std::size_t>(cp) * d + static_cast<std::size_t>(i)] *
                           mu[static_cast<std::size_t>(cp)];
                if (cm >= 0)
                    acc += 0.5 * sys.w[static_cast<std::size_t>(cm) * d + static_cast<std::size_t>(i)] *
                           mu[static_cast<std::size_t>(cm)];
            }
            nu[k] = acc;
            mass += acc;
        }
        mu.swap(nu);
    }
    Field out(dom);
    out.interior_values() = std::move(G);
    return out;
}

Field expected_exit_time(const Environment& env, double R, const SolverConfig& cfg,
                         SolveStats* stats) {
    auto dom = ball_sites(Site{}, R, env.dim());
    Field rhs(dom, -1.0);
    Field bc(dom);
    return dirichlet_solve(env, dom, rhs, bc, cfg, stats);
}

}  // namespace rwre
