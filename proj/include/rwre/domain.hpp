#pragma once

// Discrete domains: balls B_R = {|x - c| < R} (Euclidean, strict), boxes, and
// tori. Discrete boundary = exterior sites at l1-distance 1 from the set.
// Site enumeration is lexicographic so every iteration order is deterministic.

#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rwre/site.hpp"

namespace rwre {

struct OutOfSupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DomainKind { Ball, Box, Torus };

enum class Region { Interior, Boundary, Outside };

class LatticeDomain {
  public:
    static std::shared_ptr<const LatticeDomain> ball(const Site& center, double R, int dim);
    static std::shared_ptr<const LatticeDomain> box(const Site& lo, const Site& hi, int dim);
    static std::shared_ptr<const LatticeDomain> torus(int L, int dim);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double radius() const { return radius_; }
    const Site& center() const { return center_; }
    int torus_side() const { return L_; }

    const std::vector<Site>& sites() const { return interior_; }
    const std::vector<Site>& boundary() const { return boundary_; }
    std::size_t interior_count() const { return interior_.size(); }
    std::size_t boundary_count() const { return boundary_.size(); }

    struct Loc {
        Region region;
        std::int64_t index;  // within interior_ or boundary_
    };
    Loc find(const Site& x) const;

    // Torus only: canonical representative in [0,L)^d / [-L/2, L/2)^d.
    Site wrap(const Site& x) const;
    Site wrap_centered(const Site& x) const;

    // Interior-site neighbor codes, 2*dim entries per site in axis order
    // (+e1, -e1, +e2, ...). code >= 0: interior index; code < 0: boundary
    // index -(code+1). Tori always give interior codes (wrapped).
    const std::vector<std::int64_t>& neighbor_codes() const { return nbr_; }

  private:
    LatticeDomain() = default;

    DomainKind kind_ = DomainKind::Ball;
    int dim_ = 2;
    double radius_ = 0;
    Site center_{};
    Site lo_{}, hi_{};
    int L_ = 0;

    std::vector<Site> interior_;
    std::vector<Site> boundary_;
    std::vector<std::int64_t> nbr_;

    // Dense lookup over the bounding box [lo-1, hi+1] (ball/box kinds).
    Site table_lo_{};
    std::array<std::int64_t, MAX_DIM> table_stride_{};
    std::array<std::int32_t, MAX_DIM> table_ext_{};
    std::vector<std::int64_t> table_;  // >=0 interior; <=-1 boundary -(v+1); MIN outside

    void build_lookup_and_neighbors();
    friend class DomainBuilder;
};

// Ball constructor with the R >= 1 precondition enforced.
std::shared_ptr<const LatticeDomain> ball_sites(const Site& center, double R, int dim);

}  // namespace rwre
