#pragma once

// Deterministic comparison profiles (mfh, U, the radial pair a/b, eta,
// exponentials, the piecewise barriers h and ell) and numerical verifiers for
// their differential inequalities and comparison properties. Constants that
// the inequalities pin down only up to existence are grid-search targets with
// configurable ranges; every verifier reports found constants, empirical
// threshold radii and a witness on failure.

#include <optional>
#include <string>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/field.hpp"
#include "rwre/solver.hpp"

namespace rwre::testfn {

// mfh(r,t) = r^2/(r v t) + r log(r/t v 1)
double mfh(double r, double t);

// U(r) = -log r (d=2), r^{2-d} (d>=3)
double u_profile(double r, int d);

// a(r): -(log r) e^{+r^-delta/delta} (d=2), r^{2-d} e^{-r^-delta/delta} (d>=3)
// b(r): the same with the sign of the exponent swapped.
double tfa_bar(double r, double delta, int d);
double tfb_bar(double r, double delta, int d);

double eta_bar(double r, double theta);
double eta_at(const Site& y, double theta, int d);

struct VerifierConfig {
    int n_env = 100;
    std::vector<double> r_grid;
    std::vector<double> alpha_grid = {0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.02, 0.01};
    std::vector<double> A_grid = {1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 16.0};
    std::vector<double> gamma_grid = {2.0, 3.0, 4.0, 6.0, 8.0, 12.0};
    std::vector<double> C0_grid = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0};
    double fd_step_rel = 0.01;     // finite-difference step relative to r
    double ratio_min = 1e-6;       // searched-constant window for the derivative sandwiches
    double ratio_max = 1e6;
    double sign_c_min = 1e-6;      // minimal searched constant for the Laplacian sign conditions
    double dk_c_max = 1e6;         // maximal searched constant for the |D^k| bounds
};

struct RadialCheck {
    std::string name;
    bool holds_on_grid = false;
    double threshold_radius = -1.0;  // first grid radius from which the check holds to grid end
    double found_lo = 0.0;           // found constants (meaning depends on the check)
    double found_hi = 0.0;
    double witness_radius = -1.0;    // first failing radius, if any
};

struct RadialLemmaReport {
    int d = 0;
    double delta = 0.0;
    std::vector<RadialCheck> checks;
    bool all_pass = false;            // every searched-constant check holds on the whole grid
    double threshold_radius = -1.0;   // smallest grid radius from which all checks hold
    bool fd_consistent = true;        // step-halving agreement of the finite differences
    double fd_worst_rel = 0.0;

    const RadialCheck& check(const std::string& name) const;
};

RadialLemmaReport verify_radial_lemma(double delta, int d, const std::vector<double>& r_grid,
                                      const VerifierConfig& cfg = {});

struct ExponentialLemmaReport {
    std::optional<double> alpha_found;  // largest alpha with L(e^{-2a|x|/R}) <= 0 on the annulus
    std::optional<double> A_found;      // smallest A with L(e^{-A|x|^2}) >= -1_{x=0}
    std::optional<double> A3_found;     // smallest A <= sqrt(R) with L(e^{-A|x|^2/R^2}) > 0 on the annulus
    double margin1 = 0.0;               // worst margins at the found constants
    double margin2 = 0.0;
    double margin3 = 0.0;
    double origin_identity = 0.0;       // e^{-A} - 1 at the found A (> -1 exactly)
    std::string witness;                // failing site/env when a search comes up empty
};

ExponentialLemmaReport verify_exponential_lemma(const std::vector<Environment>& envs, double R,
                                                const VerifierConfig& cfg = {});

struct EtaLemmaReport {
    std::optional<double> C0_found;
    double theta = 0.0;
    double worst_outside = 0.0;  // min of L eta outside B_{C0 theta^2} (>= 0 at the found C0)
    double worst_inside = 0.0;   // min of L eta inside (>= -1 always)
    double check_radius = 0.0;
    std::string witness;
};

EtaLemmaReport verify_eta_lemma(const std::vector<Environment>& envs, double kappa,
                                const VerifierConfig& cfg = {});

// Piecewise barrier h = (h1 | h2 | h3) for the Green upper bound.
struct HAssembly {
    Field h;            // on ball(0, R) incl. boundary
    Field h1;           // on ball(0, R0) incl. boundary (h1 = h2 there)
    double R = 0, R0 = 0, alpha = 0, delta = 0;
    double c_alpha_R = 0;
    double interface_rhalf = 0;   // |h2 - h3| at r = R/2 (closed forms)
    double interface_r0 = 0;      // max |h1 - h2| on the boundary of B_{R0}
    double generator_identity = 0;  // max |L h1 + L(|x|)| over B_{R0}
    double h2_at(double r) const;
    double h3_at(double r) const;
};

HAssembly assemble_h(const Environment& env, double R, double R0, double alpha, double delta,
                     const SolverConfig& scfg = {});

struct EllAssembly {
    Field ell;
    Field ell1;
    double R = 0, R0 = 0, gamma = 0, theta = 0, delta = 0;
    double c_gamma_R = 0;
    double interface_rhalf = 0;
    double interface_r0 = 0;
    double generator_identity = 0;  // max |L ell1 - L eta| over B_{R0}
    double ell2_at(double r) const;
    double ell3_at(double r) const;
};

EllAssembly assemble_ell(const Environment& env, double R, double R0, double gamma, double theta,
                         double delta, const SolverConfig& scfg = {});

struct ComparisonReport {
    std::optional<double> alpha_found;  // largest alpha with G_R <= h everywhere
    double min_margin_h = 0.0;          // min (h - G_R) at the found alpha
    double gamma_used = 0.0;
    double c_fit = 0.0;                 // largest c with H_R >= c * ell
    // ordering margins at the found constants (>= 0 when the ordering holds)
    double h2_ge_h1_margin = 0.0;       // on B_{R0} \ B_{R0/2}
    double h2_ge_h3_margin = 0.0;       // on B_R \ B_{R/2}
    double h2_le_h3_margin = 0.0;       // on B_{R/2} \ B_{R/2-1}
    double ell2_le_ell1_margin = 0.0;   // on B_{R0} \ B_{R0/2}
    double ell2_le_ell3_margin = 0.0;   // on B_R \ B_{R/2}
    double ell2_ge_ell3_margin = 0.0;   // on B_{R/2} \ B_{R/2-2}
    std::string witness;
};

ComparisonReport verify_comparison(const Environment& env, double R, double R0, double delta,
                                   double theta, double c0_region,
                                   const VerifierConfig& cfg = {},
                                   const SolverConfig& scfg = {});

struct EnvelopeStats {
    double H_up = 0.0;   // max_{x != 0} [G(x)/(U(|x|+1)-U(R+2))]^{1/(d-1)}
    double H_low = 0.0;  // max_x [(U(|x|+1)-U(R+2))/G(x)]^{1/s}
    double ratio_min = 0.0;  // extremes of G(x)/(U(|x|+1)-U(R+2))
    double ratio_max = 0.0;
    double s_exponent = 0.0;
};

EnvelopeStats green_envelope_stats(const Environment& env, double R, const Field& G,
                                   double kappa);

}  // namespace rwre::testfn
