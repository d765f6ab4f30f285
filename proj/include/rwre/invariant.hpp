#pragma once

// Torus invariant measures rho (the finite exact stand-in for the
// environment-process steady state), effective coefficients, rho-ball ratios,
// adjoint transitions and Harnack-ratio diagnostics.

#include "rwre/environment.hpp"
#include "rwre/field.hpp"
#include "rwre/observable.hpp"

namespace rwre {

struct InvariantMeasure {
    int L = 0;
    Field field;       // on the torus domain, positive, mean 1
    double residual = 0.0;  // max-norm of rho P - rho

    double rho(const Site& x) const { return field.at(x); }
};

// Power iteration with Cesaro (lazy) damping on the transpose kernel of the
// torus-periodized walk, normalized to mean 1.
InvariantMeasure torus_invariant_measure(const Environment& env, int L, double tol,
                                         long max_iters = 0);

struct EffectiveData {
    std::array<double, MAX_DIM> a_bar{};
    double psi_bar = 1.0;
};

EffectiveData effective_matrix(const Environment& env, int L, double tol);
EffectiveData effective_matrix(const Environment& env, const InvariantMeasure& inv,
                               const Observable* psi = nullptr);

// r^d rho(0) / rho(B_r) on the torus fundamental domain.
double rho_ball_ratio(const InvariantMeasure& inv, double r);

// omega*(x,y) = rho(y) omega(y,x) / rho(x) for torus sites (wrapped).
double adjoint_transition(const Environment& env, const InvariantMeasure& inv, const Site& x,
                          const Site& y);

struct AdjointCheckReport {
    double residual_max = 0.0;   // max |L* v| over B_r minus the source site
    double source_value = 0.0;   // L* v at y0 (expected -1/rho(y0))
    double expected_source = 0.0;
    double v_sup = 0.0;
    Site y0{};
};

// v(x) = G_r(y0, x)/rho(x) solves the adjoint equation away from y0.
AdjointCheckReport adjoint_harmonicity_check(const Environment& env, int L, double r, double tol);

// max/min of v over B_{r/4}; finite and >= 1.
double harnack_ratio(const Environment& env, const InvariantMeasure& inv, double r);

}  // namespace rwre
