#include "rwre/domain.hpp"

#include <algorithm>
#include <cmath>

namespace rwre {

namespace {
constexpr std::int64_t OUTSIDE = std::numeric_limits<std::int64_t>::min();

// Enumerate the integer box [lo, hi] (inclusive) in lexicographic order.
template <typename F>
void for_each_box_site(const Site& lo, const Site& hi, int d, F&& f) {
    Site x = lo;
    while (true) {
        f(x);
        int i = d - 1;
        while (i >= 0) {
            if (x[i] < hi[i]) {
                ++x[i];
                break;
            }
            x[i] = lo[i];
            --i;
        }
        if (i < 0) break;
    }
}
}  // namespace

class DomainBuilder {
  public:
    static std::shared_ptr<const LatticeDomain> make_ball(const Site& center, double R, int dim) {
        auto dom = std::shared_ptr<LatticeDomain>(new LatticeDomain());
        dom->kind_ = DomainKind::Ball;
        dom->dim_ = dim;
        dom->radius_ = R;
        dom->center_ = center;
        const auto rr = static_cast<std::int32_t>(std::ceil(R));
        Site lo = center, hi = center;
        for (int i = 0; i < dim; ++i) {
            lo[i] -= rr;
            hi[i] += rr;
        }
        dom->lo_ = lo;
        dom->hi_ = hi;
        for_each_box_site(lo, hi, dim, [&](const Site& x) {
            if ((x - center).norm2(dim) < R) dom->interior_.push_back(x);
        });
        dom->build_lookup_and_neighbors();
        return dom;
    }

    static std::shared_ptr<const LatticeDomain> make_box(const Site& lo, const Site& hi, int dim) {
        auto dom = std::shared_ptr<LatticeDomain>(new LatticeDomain());
        dom->kind_ = DomainKind::Box;
        dom->dim_ = dim;
        dom->lo_ = lo;
        dom->hi_ = hi;
        for (int i = 0; i < dim; ++i)
            if (lo[i] > hi[i]) throw DomainError("box: lo > hi");
        for_each_box_site(lo, hi, dim, [&](const Site& x) { dom->interior_.push_back(x); });
        dom->build_lookup_and_neighbors();
        return dom;
    }

    static std::shared_ptr<const LatticeDomain> make_torus(int L, int dim) {
        if (L < 3) throw DomainError("torus side must be >= 3");
        auto dom = std::shared_ptr<LatticeDomain>(new LatticeDomain());
        dom->kind_ = DomainKind::Torus;
        dom->dim_ = dim;
        dom->L_ = L;
        Site lo{}, hi{};
        for (int i = 0; i < dim; ++i) hi[i] = L - 1;
        dom->lo_ = lo;
        dom->hi_ = hi;
        for_each_box_site(lo, hi, dim, [&](const Site& x) { dom->interior_.push_back(x); });
        // Wrapped neighbor table; no boundary.
        const std::size_t n = dom->interior_.size();
        dom->nbr_.resize(n * 2 * dim);
        std::array<std::int64_t, MAX_DIM> stride{};
        std::int64_t s = 1;
        for (int i = dim - 1; i >= 0; --i) {
            stride[i] = s;
            s *= L;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const Site& x = dom->interior_[k];
            for (int i = 0; i < dim; ++i) {
                const std::int64_t up = (x[i] + 1 < L) ? std::int64_t(k) + stride[i]
                                                       : std::int64_t(k) - std::int64_t(L - 1) * stride[i];
                const std::int64_t dn = (x[i] > 0) ? std::int64_t(k) - stride[i]
                                                   : std::int64_t(k) + std::int64_t(L - 1) * stride[i];
                dom->nbr_[k * 2 * dim + 2 * i] = up;
                dom->nbr_[k * 2 * dim + 2 * i + 1] = dn;
            }
        }
        return dom;
    }
};

void LatticeDomain::build_lookup_and_neighbors() {
    const int d = dim_;
    // interior_ is lex-sorted by construction (box enumeration order).
    table_lo_ = lo_;
    for (int i = 0; i < d; ++i) table_lo_[i] -= 1;
    std::int64_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
        table_ext_[i] = hi_[i] - lo_[i] + 3;
        table_stride_[i] = s;
        s *= table_ext_[i];
    }
    table_.assign(static_cast<std::size_t>(s), OUTSIDE);
    auto lin = [&](const Site& x) -> std::int64_t {
        std::int64_t k = 0;
        for (int i = 0; i < d; ++i) {
            const std::int64_t rel = std::int64_t(x[i]) - table_lo_[i];
            if (rel < 0 || rel >= table_ext_[i]) return -1;
            k += rel * table_stride_[i];
        }
        return k;
    };
    for (std::size_t k = 0; k < interior_.size(); ++k)
        table_[static_cast<std::size_t>(lin(interior_[k]))] = static_cast<std::int64_t>(k);

    // Discrete boundary: exterior sites at l1-distance 1 from the interior.
    std::vector<Site> bnd;
    for (const Site& x : interior_) {
        for (int i = 0; i < d; ++i) {
            for (int dv : {+1, -1}) {
                const Site y = x.shifted(i, dv);
                const std::int64_t ky = lin(y);
                if (ky >= 0 && table_[static_cast<std::size_t>(ky)] == OUTSIDE) {
                    bnd.push_back(y);
                    table_[static_cast<std::size_t>(ky)] = -2;  // mark, index later
                }
            }
        }
    }
    std::sort(bnd.begin(), bnd.end());
    boundary_ = std::move(bnd);
    for (std::size_t b = 0; b < boundary_.size(); ++b)
        table_[static_cast<std::size_t>(lin(boundary_[b]))] = -static_cast<std::int64_t>(b) - 1;

    nbr_.resize(interior_.size() * 2 * static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < interior_.size(); ++k) {
        for (int i = 0; i < d; ++i) {
            for (int sgn = 0; sgn < 2; ++sgn) {
                const Site y = interior_[k].shifted(i, sgn == 0 ? +1 : -1);
                nbr_[k * 2 * d + 2 * static_cast<std::size_t>(i) + static_cast<std::size_t>(sgn)] =
                    table_[static_cast<std::size_t>(lin(y))];
            }
        }
    }
}

LatticeDomain::Loc LatticeDomain::find(const Site& x) const {
    if (kind_ == DomainKind::Torus) {
        const Site w = wrap(x);
        std::int64_t k = 0;
        std::int64_t s = 1;
        for (int i = dim_ - 1; i >= 0; --i) {
            k += std::int64_t(w[i]) * s;
            s *= L_;
        }
        return {Region::Interior, k};
    }
    std::int64_t k = 0;
    for (int i = 0; i < dim_; ++i) {
        const std::int64_t rel = std::int64_t(x[i]) - table_lo_[i];
        if (rel < 0 || rel >= table_ext_[i]) return {Region::Outside, -1};
        k += rel * table_stride_[i];
    }
    const std::int64_t v = table_[static_cast<std::size_t>(k)];
    if (v == OUTSIDE) return {Region::Outside, -1};
    if (v >= 0) return {Region::Interior, v};
    return {Region::Boundary, -v - 1};
}

Site LatticeDomain::wrap(const Site& x) const {
    Site w{};
    for (int i = 0; i < dim_; ++i) {
        std::int32_t v = x[i] % L_;
        if (v < 0) v += L_;
        w[i] = v;
    }
    return w;
}

Site LatticeDomain::wrap_centered(const Site& x) const {
    Site w = wrap(x);
    for (int i = 0; i < dim_; ++i)
        if (w[i] >= (L_ + 1) / 2) w[i] -= L_;
    return w;
}

std::shared_ptr<const LatticeDomain> LatticeDomain::ball(const Site& center, double R, int dim) {
    return DomainBuilder::make_ball(center, R, dim);
}
std::shared_ptr<const LatticeDomain> LatticeDomain::box(const Site& lo, const Site& hi, int dim) {
    return DomainBuilder::make_box(lo, hi, dim);
}
std::shared_ptr<const LatticeDomain> LatticeDomain::torus(int L, int dim) {
    return DomainBuilder::make_torus(L, dim);
}

std::shared_ptr<const LatticeDomain> ball_sites(const Site& center, double R, int dim) {
    if (!(R >= 1.0)) throw DomainError("ball radius must be >= 1");
    return LatticeDomain::ball(center, R, dim);
}

}  // namespace rwre
