#pragma once

// Small numeric toolbox: Poisson (uniformization) weights, incomplete gamma,
// Bessel I0, Kolmogorov tail, adaptive quadrature, least squares.

#include <cstdint>
#include <functional>
#include <vector>

namespace rwre::special {

// pi_n(t) = e^{-t} t^n / n! for n = 0..nmax, with sum >= 1 - tail_tol.
struct PoissonWeights {
    std::vector<double> p;
    double tail;  // 1 - sum(p)
};
PoissonWeights poisson_weights(double t, double tail_tol);

// w_n = int_0^T pi_n(t) dt = P(Pois(T) > n); sum_n w_n = T. Truncated so the
// dropped mass sum_{n>nmax} w_n <= tol.
std::vector<double> poisson_integral_weights(double T, double tol);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Quantile of the chi-square distribution with k dof at probability p.
double chi2_quantile(double p, int k);

// Exponentially scaled modified Bessel function e^{-x} I_0(x), x >= 0.
double bessel_i0e(double x);

double normal_cdf(double x);

// Kolmogorov limit distribution survival: P(sup |B| > x) = 2 sum (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_sf(double x);

// Two-sided KS statistic of samples against the standard normal.
double ks_statistic_normal(std::vector<double> standardized);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

struct LineFit {
    double slope;
    double intercept;
    double residual;  // root-mean-square residual
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rwre::special
