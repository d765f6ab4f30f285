#pragma once

// Discrete- and continuous-time heat kernels via uniformization (the chain
// has exact unit jump rate), semigroup application, the d=2 potential kernel
// and the d>=3 whole-space Green function. Kernels live on absorbing boxes;
// lost mass is tracked as an explicit deficit, never renormalized.

#include <vector>

#include "rwre/environment.hpp"
#include "rwre/grid.hpp"
#include "rwre/observable.hpp"

namespace rwre {

struct KernelSlice {
    Site x0{};
    double time = 0.0;  // steps for the discrete walk, t for the continuous one
    bool discrete = true;
    Grid field;         // probabilities at offsets relative to x0
    double deficit = 0.0;

    double prob(const Site& y) const {
        const Site rel = y - x0;
        return field.inside(rel) ? field.at(rel) : 0.0;
    }
};

// Radius containing a unit-rate nearest-neighbor walk up to time t except
// with probability <= tol: c1 * max(sqrt(t ln(1/tol)), ln(1/tol)).
double truncation_radius(double t, double tol);

KernelSlice heat_kernel_discrete(const Environment& env, const Site& x0, int n, int radius = 0);
KernelSlice heat_kernel_continuous(const Environment& env, const Site& x0, double t, double tol);

// E^0_omega[zeta(theta_{Y_t} omega)] = sum_z p_t(0,z) zeta(theta_z omega),
// computed as a generator evolution of the stationary extension.
double semigroup_apply(const Environment& env, const Observable& zeta, double t, double tol);

// d=2 potential kernel A(x) = sum_n [p_n(0,0) - p_n(x,0)] with paired partial
// sums and Richardson tail extrapolation.
double potential_kernel(const Environment& env, const Site& x, double tol);

// d>=3 whole-space Green function, increasing limit of ball Green functions
// over doubling radii with a Richardson tail estimate.
struct GreenWholeDetail {
    double value = 0.0;
    std::vector<double> radii;
    std::vector<double> ball_values;  // monotone nondecreasing in R
};
double green_whole(const Environment& env, const Site& x, double tol,
                   GreenWholeDetail* detail = nullptr);

// int_0^T p_t(x, 0) dt, exact term-wise Poisson integration, error <= tol.
double time_integrated_kernel(const Environment& env, const Site& x, double T, double tol);

// Same integral as a field over the whole box: value at offset y is
// int_0^T p_t(y, 0) dt.
Grid time_integrated_field(const Environment& env, double T, double tol);

// Generator evolution utility shared by kernels and experiments: evolves the
// field v_0(y) = init(y) on a box of the given radius and reports
// v_n(read_site) for n = 0..nsteps.
std::vector<double> generator_trace(const Environment& env, const Site& base, int radius,
                                    int nsteps, const std::function<double(const Site&)>& init,
                                    const Site& read_site);

// Same evolution, one trace per read site (traces[s][n]).
std::vector<std::vector<double>> generator_trace_multi(
    const Environment& env, const Site& base, int radius, int nsteps,
    const std::function<double(const Site&)>& init, const std::vector<Site>& read_sites);

}  // namespace rwre
