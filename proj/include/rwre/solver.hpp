#pragma once

// The non-divergence form operator L_omega u(x) = sum_y omega(x,y)[u(y)-u(x)]
// (trace-normalized weights), its adjoint, and elliptic solves on balls:
// Dirichlet problems, Green functions, exit times.

#include <functional>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/field.hpp"

namespace rwre {

struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, double residual, long iters)
        : std::runtime_error(msg), final_residual(residual), iterations(iters) {}
    double final_residual;
    long iterations;
};

struct SolverConfig {
    double tol = 1e-12;       // max-norm residual of L_omega u - rhs
    long max_iters = 0;       // 0: auto = 50 (R+1)^2 ln(1/tol)
    double relaxation = 1.0;  // SOR factor in (0, 2]; 1 = Gauss-Seidel

    void validate() const {
        if (!(tol >= 1e-14)) throw ConfigError("solver tol must be >= 1e-14");
        if (!(relaxation > 0.0) || relaxation > 2.0)
            throw ConfigError("relaxation must lie in (0, 2]");
        if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
    }
};

struct SolveStats {
    double residual = 0.0;
    long iterations = 0;
};

double second_difference(const Field& u, const Site& x, int axis);
double apply_generator(const Environment& env, const Field& u, const Site& x);
double apply_adjoint(const Environment& env, const Field& rho, const Field& v, const Site& x);

// Solve L_omega u = rhs in the ball interior, u = bc on the discrete
// boundary, by lexicographic Gauss-Seidel/SOR on the killed transition
// kernel. Boundary values are reproduced exactly; the returned field
// satisfies max |L_omega u - rhs| <= cfg.tol.
Field dirichlet_solve(const Environment& env, std::shared_ptr<const LatticeDomain> dom,
                      const std::function<double(const Site&)>& rhs,
                      const std::function<double(const Site&)>& bc, const SolverConfig& cfg,
                      SolveStats* stats = nullptr);

Field dirichlet_solve(const Environment& env, std::shared_ptr<const LatticeDomain> dom,
                      const Field& rhs, const Field& bc, const SolverConfig& cfg,
                      SolveStats* stats = nullptr);

// Green function of the ball: L_omega G = -1_source in B_R, G = 0 on the boundary.
Field green_ball(const Environment& env, double R, const std::vector<Site>& source,
                 const SolverConfig& cfg = {}, SolveStats* stats = nullptr);

// Occupation field of the walk started at y0 before exiting B_R:
// G(y) = E^{y0}[# visits to y before tau_R], accumulated by forward mass flow.
Field green_row(const Environment& env, double R, const Site& y0, double tol = 1e-13);

// Solves L_omega u = -1, u = 0 on the boundary of B_R.
Field expected_exit_time(const Environment& env, double R, const SolverConfig& cfg = {},
                         SolveStats* stats = nullptr);

}  // namespace rwre
