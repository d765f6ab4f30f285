#pragma once

// Reproducible i.i.d. balanced environments on Z^d.
//
// Weights are canonically normalized to sum 1 at every site (one
// representative per equivalence class of the walk). The base field is a
// stateless function of (master_seed, site); single-site resampling goes
// through an override map shared by shifted copies.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwre/rng.hpp"
#include "rwre/site.hpp"

namespace rwre {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

enum class LawKind { ClippedSimplex, TwoPoint, Constant };

inline const char* law_name(LawKind k) {
    switch (k) {
        case LawKind::ClippedSimplex: return "clipped-simplex";
        case LawKind::TwoPoint: return "two-point";
        case LawKind::Constant: return "constant";
    }
    return "?";
}
inline LawKind law_from_name(const std::string& s) {
    if (s == "clipped-simplex") return LawKind::ClippedSimplex;
    if (s == "two-point") return LawKind::TwoPoint;
    if (s == "constant") return LawKind::Constant;
    throw ConfigError("unknown law kind: " + s);
}

// Normalized diagonal weights, sum w_i = 1, each w_i >= 2*kappa.
struct DiagWeights {
    std::array<double, MAX_DIM> w{};
    double operator[](int i) const { return w[static_cast<std::size_t>(i)]; }
};

struct EnvironmentLaw {
    int dim = 2;
    double kappa = 0.1;
    LawKind kind = LawKind::ClippedSimplex;
    std::vector<double> params;  // law-specific; none needed for the built-ins
    std::uint64_t master_seed = 0;

    void validate() const {
        if (dim < 2 || dim > MAX_DIM) throw ConfigError("dim must be in [2," + std::to_string(MAX_DIM) + "]");
        if (!(kappa > 0.0) || kappa > 1.0 / (2.0 * dim))
            throw ConfigError("kappa must lie in (0, 1/(2d)]");
        if (kind == LawKind::TwoPoint && dim != 2)
            throw ConfigError("two-point law is defined for d=2 only");
    }

    // Exchangeable in the coordinates (all built-in laws are).
    bool exchangeable() const { return true; }
};

namespace detail {

inline DiagWeights draw_weights(const EnvironmentLaw& law, std::uint64_t seed_override,
                                std::uint64_t key, std::uint64_t stream) {
    const int d = law.dim;
    DiagWeights out;
    switch (law.kind) {
        case LawKind::Constant: {
            for (int i = 0; i < d; ++i) out.w[i] = 1.0 / d;
            return out;
        }
        case LawKind::TwoPoint: {
            const double u = rng::draw_uniform(seed_override, key, 0, stream);
            const double lo = 2.0 * law.kappa;
            out.w[0] = (u < 0.5) ? lo : 1.0 - lo;
            out.w[1] = 1.0 - out.w[0];
            return out;
        }
        case LawKind::ClippedSimplex: {
            // w = 2k*1 + (1-2dk) * Dirichlet(1,...,1) via normalized exponential spacings.
            double e[MAX_DIM];
            double tot = 0.0;
            for (int i = 0; i < d; ++i) {
                const double u = rng::draw_uniform(seed_override, key, static_cast<std::uint64_t>(i), stream);
                e[i] = -std::log(u);
                tot += e[i];
            }
            const double slack = 1.0 - 2.0 * law.kappa * d;
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                out.w[i] = 2.0 * law.kappa + slack * (e[i] / tot);
                s += out.w[i];
            }
            for (int i = 0; i < d; ++i) out.w[i] /= s;  // pin the sum to 1 ulp-exactly
            return out;
        }
    }
    throw ConfigError("unreachable law kind");
}

}  // namespace detail

class Environment {
  public:
    using OverrideMap = std::map<Site, DiagWeights>;

    explicit Environment(EnvironmentLaw law)
        : law_(std::move(law)), overrides_(std::make_shared<OverrideMap>()) {
        law_.validate();
    }
    Environment(EnvironmentLaw law, std::shared_ptr<const OverrideMap> ov, Site origin)
        : law_(std::move(law)), overrides_(std::move(ov)), origin_(origin) {}

    const EnvironmentLaw& law() const { return law_; }
    int dim() const { return law_.dim; }
    double kappa() const { return law_.kappa; }
    const Site& origin_offset() const { return origin_; }
    const OverrideMap& overrides() const { return *overrides_; }

    DiagWeights site_weights(const Site& x) const {
        const Site base = x + origin_;
        if (!overrides_->empty()) {
            auto it = overrides_->find(base);
            if (it != overrides_->end()) return it->second;
        }
        return detail::draw_weights(law_, law_.master_seed,
                                    rng::site_key(base.c.data(), law_.dim), rng::STREAM_ENV);
    }

    // omega(x, y): omega_i(x)/2 if y = x +- e_i, else 0.
    double transition_probability(const Site& x, const Site& y) const {
        const Site dxy = y - x;
        int axis = -1;
        for (int i = 0; i < law_.dim; ++i) {
            if (dxy[i] != 0) {
                if (axis >= 0 || std::abs(dxy[i]) != 1) return 0.0;
                axis = i;
            }
        }
        for (int i = law_.dim; i < MAX_DIM; ++i)
            if (dxy[i] != 0) return 0.0;
        if (axis < 0) return 0.0;
        return site_weights(x)[axis] / 2.0;
    }

    // (theta_x omega)(.) = omega(x + .); overrides are shared, shifts compose.
    Environment shift(const Site& x) const {
        return Environment(law_, overrides_, origin_ + x);
    }

    // Explicit override installation (snapshot restoration).
    Environment with_override(const Site& y, const DiagWeights& w) const {
        auto ov = std::make_shared<OverrideMap>(*overrides_);
        (*ov)[y + origin_] = w;
        return Environment(law_, std::move(ov), origin_);
    }

    // Fresh independent draw at y keyed by aux_seed; all other sites untouched.
    Environment resample_site(const Site& y, std::uint64_t aux_seed) const {
        const Site base = y + origin_;
        auto ov = std::make_shared<OverrideMap>(*overrides_);
        const std::uint64_t seed = rng::mix64(law_.master_seed ^ rng::mix64(aux_seed + 0x5EEDULL));
        (*ov)[base] = detail::draw_weights(law_, seed, rng::site_key(base.c.data(), law_.dim),
                                           rng::STREAM_RESAMPLE);
        return Environment(law_, std::move(ov), origin_);
    }

  private:
    EnvironmentLaw law_;
    std::shared_ptr<const OverrideMap> overrides_;
    Site origin_{};
};

}  // namespace rwre
