#pragma once

// Finite real-valued function on a domain plus its discrete boundary.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "rwre/domain.hpp"

namespace rwre {

class Field {
  public:
    Field() = default;
    explicit Field(std::shared_ptr<const LatticeDomain> dom, double fill = 0.0)
        : dom_(std::move(dom)),
          interior_(dom_->interior_count(), fill),
          boundary_(dom_->boundary_count(), fill) {}

    static Field from_function(std::shared_ptr<const LatticeDomain> dom,
                               const std::function<double(const Site&)>& f) {
        Field out(std::move(dom));
        const auto& d = *out.dom_;
        for (std::size_t k = 0; k < d.sites().size(); ++k) out.interior_[k] = f(d.sites()[k]);
        for (std::size_t k = 0; k < d.boundary().size(); ++k) out.boundary_[k] = f(d.boundary()[k]);
        return out;
    }

    const LatticeDomain& domain() const { return *dom_; }
    std::shared_ptr<const LatticeDomain> domain_ptr() const { return dom_; }

    double at(const Site& x) const {
        const auto loc = dom_->find(x);
        switch (loc.region) {
            case Region::Interior: return interior_[static_cast<std::size_t>(loc.index)];
            case Region::Boundary: return boundary_[static_cast<std::size_t>(loc.index)];
            case Region::Outside: break;
        }
        throw OutOfSupportError("field lookup outside domain+boundary at " + x.str(dom_->dim()));
    }
    void set(const Site& x, double v) {
        const auto loc = dom_->find(x);
        switch (loc.region) {
            case Region::Interior: interior_[static_cast<std::size_t>(loc.index)] = v; return;
            case Region::Boundary: boundary_[static_cast<std::size_t>(loc.index)] = v; return;
            case Region::Outside: break;
        }
        throw OutOfSupportError("field write outside domain+boundary at " + x.str(dom_->dim()));
    }

    std::vector<double>& interior_values() { return interior_; }
    const std::vector<double>& interior_values() const { return interior_; }
    std::vector<double>& boundary_values() { return boundary_; }
    const std::vector<double>& boundary_values() const { return boundary_; }

    double max_abs() const {
        double m = 0;
        for (double v : interior_) m = std::max(m, std::abs(v));
        for (double v : boundary_) m = std::max(m, std::abs(v));
        return m;
    }

    // Visit every site (interior + boundary) in global lexicographic order.
    void for_each_sorted(const std::function<void(const Site&, double)>& f) const {
        const auto& in = dom_->sites();
        const auto& bd = dom_->boundary();
        std::size_t i = 0, b = 0;
        while (i < in.size() || b < bd.size()) {
            if (b >= bd.size() || (i < in.size() && in[i] < bd[b])) {
                f(in[i], interior_[i]);
                ++i;
            } else {
                f(bd[b], boundary_[b]);
                ++b;
            }
        }
    }

  private:
    std::shared_ptr<const LatticeDomain> dom_;
    std::vector<double> interior_;
    std::vector<double> boundary_;
};

}  // namespace rwre
