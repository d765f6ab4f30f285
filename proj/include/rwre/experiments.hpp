#pragma once

// Composite experiments: quantitative homogenization, corrector growth,
// bad-point counts, vertical derivatives and the Duhamel identity, semigroup
// decay, Caccioppoli-type dissipation, and the stationary corrector.

#include <cstdint>
#include <functional>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/field.hpp"
#include "rwre/invariant.hpp"
#include "rwre/observable.hpp"
#include "rwre/solver.hpp"
#include "rwre/special.hpp"

namespace rwre::experiments {

enum class HomogCase { A, B, C };  // linear g | unit source | harmonic quadratic g

// Closed-form solution of the effective problem on the unit ball.
double effective_solution(HomogCase c, const std::array<double, MAX_DIM>& x, int d);

// Solves the rescaled Dirichlet problem on B_R and returns
// max_x |u(x) - ubar(x/R)|.
double homogenization_error(const Environment& env, double R, HomogCase c,
                            const SolverConfig& cfg = {});

// Least squares fit of log err against log R.
special::LineFit rate_fit(const std::vector<std::pair<double, double>>& pairs);

struct CorrectorGrowth {
    std::vector<double> radii;
    std::vector<double> max_abs;  // max_i max_x |phi_i|
    double fitted_exponent = 0.0;
};
CorrectorGrowth corrector_growth(const Environment& env, const std::vector<double>& r_grid,
                                 const std::array<double, MAX_DIM>& a_bar,
                                 const SolverConfig& cfg = {});

// u(x) where L u = -(zeta_bar - zeta_mean) on B_{R0}(x), zero boundary.
double local_discrepancy(const Environment& env, const Site& x, double R0,
                         const Observable& zeta, double zeta_mean, const SolverConfig& cfg = {});

struct BadPointCount {
    long count = 0;
    long window_sites = 0;
    double x_statistic = 0.0;  // R^{-gamma} count^{1/d}
};
BadPointCount count_bad_points(const Environment& env, double R, double R0, double delta,
                               double c_thresh, const std::vector<Observable>& zetas,
                               const std::vector<double>& zeta_means, double gamma,
                               const SolverConfig& cfg = {});

// Z(omega'_y) - Z(omega) with a fresh draw at y.
double vertical_derivative(const Environment& env, std::uint64_t aux_seed, const Site& y,
                           const std::function<double(const Environment&)>& functional);

// V(Z) truncated to the supplied sites; per-site resampling seeds derive
// deterministically from aux_seed.
double efron_stein_V(const Environment& env, std::uint64_t aux_seed,
                     const std::vector<Site>& sites,
                     const std::function<double(const Environment&)>& functional);

struct DuhamelReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double term_support = 0.0;  // kernel-weighted observable jump
    double term_integral = 0.0;
};
DuhamelReport duhamel_check(const Environment& env, std::uint64_t aux_seed, const Site& y,
                            const Observable& zeta, double t, double quad_tol);

struct DecayCurve {
    std::vector<double> t;
    std::vector<double> var_q, var_q_stderr;
    std::vector<double> l1, l1_stderr;
    long n_env = 0;
    double var_slope = 0.0;      // log-log fit over the t > 0 points
    double l1_slope = 0.0;
    double var_slope_1pt = 0.0;  // same fit against log(1+t), reported alongside
    double l1_slope_1pt = 0.0;
    double eq_zeta = 0.0;
};
DecayCurve semigroup_decay(const EnvironmentLaw& law, const Observable& zeta,
                           const std::vector<double>& t_grid, long n_env, int L,
                           std::uint64_t seed, double kernel_tol = 1e-6, double rho_tol = 1e-9);

struct CaccioppoliReport {
    double dvar_dt = 0.0;        // central difference of Var_Q(v(t))
    double dirichlet_omega = 0.0;  // E_Q sum_e omega(0,e)(grad_e v)^2 (exact decay rate)
    double dirichlet_plain = 0.0;  // (1/2) sum_e E_Q (grad_e v)^2
    double identity_residual = 0.0;  // |dvar_dt + dirichlet_omega|, O(h^2)
    double ellipticity_margin = 0.0;  // dirichlet_omega - 2 kappa dirichlet_plain >= 0
};
CaccioppoliReport caccioppoli_check(const Environment& env, const Observable& zeta, double t,
                                    double h, int L, double kernel_tol = 1e-10);

struct StationaryCorrector {
    Field phi;             // on the torus domain
    double residual = 0.0;  // max |L phi - (zeta_c - P_T zeta_c)| over the origin stencil
    double residual_global = 0.0;
    double eq_zeta = 0.0;
};
StationaryCorrector stationary_corrector(const Environment& env, const Observable& zeta,
                                         double T, double quad_tol, int L);

// Tail diagnostics: sorted rho(0) samples across environments (log-survival
// curves are read off the sorted values).
std::vector<double> rho_origin_samples(const EnvironmentLaw& law, long n_env, int L,
                                       std::uint64_t seed, double rho_tol = 1e-10);

struct KernelEnvelopeStats {
    double sup_statistic = 0.0;  // sup p_t(x,0) (1+t)^{d/2} e^{+c0 mfh(|x|,t)}
    double low_statistic = 0.0;  // min over the grid of p_t(x,0) (1+t)^{d/2} e^{+C0 |x|^2/t}
};
KernelEnvelopeStats kernel_envelope_stats(const Environment& env,
                                          const std::vector<double>& t_grid, double c0,
                                          double C0, double tol = 1e-8);

}  // namespace rwre::experiments
