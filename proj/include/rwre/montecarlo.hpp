#pragma once

// Trajectory simulation for the discrete and continuous walks, exit
// statistics, Monte Carlo Green estimates, environment-process functionals
// and the FCLT experiment. All randomness is keyed by (seed, replicate) so
// runs are bit-reproducible and replicates are order-independent.

#include <cstdint>
#include <utility>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/observable.hpp"

namespace rwre {

struct PathSample {
    std::vector<Site> sites;    // visited sites, sites[0] = start
    std::vector<double> times;  // arrival times (continuous case), times[0] = 0
};

PathSample simulate_path(const Environment& env, const Site& x0, long n, std::uint64_t seed);
PathSample simulate_continuous(const Environment& env, const Site& x0, double t,
                               std::uint64_t seed);

struct ExitSample {
    long steps = 0;
    Site exit_site{};
};
ExitSample first_exit(const Environment& env, const Site& x0, double R, std::uint64_t seed);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long reps = 0;
};
McEstimate mc_green_estimate(const Environment& env, const Site& x0, double R,
                             const std::vector<Site>& S, long reps, std::uint64_t seed);

// Exact piecewise-constant integral int_0^t zeta(theta_{Y_s} omega) ds.
double env_process_integral(const Environment& env, const Observable& zeta, double t,
                            std::uint64_t seed);

struct FcltResult {
    std::vector<double> samples;       // t^{-1/2} centered integrals, one per replicate
    std::vector<double> standardized;  // (s - mean)/sd
    double ks_statistic = 0.0;
    double sample_mean = 0.0;
    double sample_sd = 0.0;
};
FcltResult fclt_sample(const EnvironmentLaw& law, const Observable& zeta, double t, long reps,
                       std::uint64_t seed, double eq_zeta);

}  // namespace rwre
