#include "rwre/montecarlo.hpp"

#include <cmath>

#include "rwre/rng.hpp"
#include "rwre/special.hpp"

namespace rwre {

namespace {
// Inverse-CDF step over the 2d neighbors in fixed axis order (+e1, -e1, ...).
Site step_site(const Environment& env, const Site& x, double u) {
    const DiagWeights w = env.site_weights(x);
    double cum = 0.0;
    const int d = env.dim();
    for (int i = 0; i < d; ++i) {
        cum += 0.5 * w[i];
        if (u < cum) return x.shifted(i, +1);
        cum += 0.5 * w[i];
        if (u < cum) return x.shifted(i, -1);
    }
    return x.shifted(d - 1, -1);  // u == 1 edge case
}
}  // namespace

PathSample simulate_path(const Environment& env, const Site& x0, long n, std::uint64_t seed) {
    PathSample p;
    p.sites.reserve(static_cast<std::size_t>(n) + 1);
    p.sites.push_back(x0);
    rng::Sequence steps(seed, rng::STREAM_PATH);
    Site x = x0;
    for (long k = 0; k < n; ++k) {
        x = step_site(env, x, steps.uniform());
        p.sites.push_back(x);
    }
    return p;
}

PathSample simulate_continuous(const Environment& env, const Site& x0, double t,
                               std::uint64_t seed) {
    PathSample p;
    p.sites.push_back(x0);
    p.times.push_back(0.0);
    rng::Sequence steps(seed, rng::STREAM_PATH);
    rng::Sequence holds(seed, rng::STREAM_HOLD);
    Site x = x0;
    double clock = 0.0;
    while (true) {
        clock += -std::log(holds.uniform());  // unit-rate exponential
        if (clock > t) break;
        x = step_site(env, x, steps.uniform());
        p.sites.push_back(x);
        p.times.push_back(clock);
    }
    return p;
}

ExitSample first_exit(const Environment& env, const Site& x0, double R, std::uint64_t seed) {
    rng::Sequence steps(seed, rng::STREAM_PATH);
    Site x = x0;
    long n = 0;
    const int d = env.dim();
    while (x.norm2(d) < R) {
        x = step_site(env, x, steps.uniform());
        ++n;
    }
    return {n, x};
}

McEstimate mc_green_estimate(const Environment& env, const Site& x0, double R,
                             const std::vector<Site>& S, long reps, std::uint64_t seed) {
    if (reps < 1) throw ConfigError("mc_green_estimate: reps >= 1 required");
    const int d = env.dim();
    double sum = 0.0, sumsq = 0.0;
    for (long rep = 0; rep < reps; ++rep) {
        const std::uint64_t rep_seed = rng::draw_u64(seed, 0, static_cast<std::uint64_t>(rep),
                                                     rng::STREAM_GENERIC);
        rng::Sequence steps(rep_seed, rng::STREAM_PATH);
        Site x = x0;
        double count = 0.0;
        while (x.norm2(d) < R) {
            for (const Site& s : S)
                if (x == s) count += 1.0;
            x = step_site(env, x, steps.uniform());
        }
        sum += count;
        sumsq += count * count;
    }
    McEstimate est;
    est.reps = reps;
    est.mean = sum / static_cast<double>(reps);
    const double var = std::max(0.0, sumsq / static_cast<double>(reps) - est.mean * est.mean);
    est.stderr_ = std::sqrt(var / static_cast<double>(reps));
    return est;
}

double env_process_integral(const Environment& env, const Observable& zeta, double t,
                            std::uint64_t seed) {
    if (t < 0) throw ConfigError("env_process_integral: t >= 0 required");
    rng::Sequence steps(seed, rng::STREAM_PATH);
    rng::Sequence holds(seed, rng::STREAM_HOLD);
    Site x{};
    double clock = 0.0, acc = 0.0;
    while (clock < t) {
        const double hold = -std::log(holds.uniform());
        const double upto = std::min(clock + hold, t);
        acc += (upto - clock) * zeta.evaluate(env, x);
        clock += hold;
        if (clock < t) x = step_site(env, x, steps.uniform());
    }
    return acc;
}

FcltResult fclt_sample(const EnvironmentLaw& law, const Observable& zeta, double t, long reps,
                       std::uint64_t seed, double eq_zeta) {
    if (reps < 1 || t <= 0) throw ConfigError("fclt_sample: reps >= 1 and t > 0 required");
    FcltResult out;
    out.samples.reserve(static_cast<std::size_t>(reps));
    for (long rep = 0; rep < reps; ++rep) {
        EnvironmentLaw rep_law = law;
        rep_law.master_seed = rng::draw_u64(seed, 0xE0F, static_cast<std::uint64_t>(rep),
                                            rng::STREAM_GENERIC);
        const Environment env(rep_law);
        const std::uint64_t path_seed =
            rng::draw_u64(seed, 0xA11, static_cast<std::uint64_t>(rep), rng::STREAM_GENERIC);
        const double integral = env_process_integral(env, zeta, t, path_seed);
        out.samples.push_back((integral - t * eq_zeta) / std::sqrt(t));
    }
    double m = 0.0;
    for (double s : out.samples) m += s;
    m /= static_cast<double>(reps);
    double var = 0.0;
    for (double s : out.samples) var += (s - m) * (s - m);
    var /= static_cast<double>(reps);
    out.sample_mean = m;
    out.sample_sd = std::sqrt(var);
    out.standardized.reserve(out.samples.size());
    for (double s : out.samples)
        out.standardized.push_back(out.sample_sd > 0 ? (s - m) / out.sample_sd : 0.0);
    out.ks_statistic = special::ks_statistic_normal(out.standardized);
    return out;
}

}  // namespace rwre
