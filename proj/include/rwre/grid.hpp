#pragma once

// Dense padded grids for kernel evolution and power iteration. A grid covers
// logical offsets [lo, lo+extent)^d relative to a base lattice site, plus a
// one-cell halo. Box grids keep the halo at zero (absorbing: mass stepping
// out is lost and tracked as deficit); torus grids refresh the halo by
// periodic wrap before each step.
//
//   generator step:  out(x) = sum_y omega(x,y) in(y)   (observable evolution)
//   mass step:       out(y) = sum_x in(x) omega(x,y)   (distribution evolution)

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/site.hpp"

namespace rwre {

struct Grid {
    int dim = 2;
    bool torus = false;
    std::int32_t lo = 0;       // logical min coordinate (box: -radius, torus: 0)
    std::int32_t extent = 0;   // 2*radius+1 or L
    Site base{};               // lattice site at logical offset 0
    std::array<std::int64_t, MAX_DIM> stride{};
    std::int64_t volume = 0;   // padded volume
    std::vector<double> a;

    std::int64_t lin(const Site& rel) const {
        std::int64_t k = 0;
        for (int i = 0; i < dim; ++i) k += (std::int64_t(rel[i]) - lo + 1) * stride[i];
        return k;
    }
    bool inside(const Site& rel) const {
        for (int i = 0; i < dim; ++i)
            if (rel[i] < lo || rel[i] >= lo + extent) return false;
        return true;
    }
    double at(const Site& rel) const { return a[static_cast<std::size_t>(lin(rel))]; }
    double& at(const Site& rel) { return a[static_cast<std::size_t>(lin(rel))]; }
};

Grid box_grid(int dim, int radius, const Site& base);
Grid torus_grid(int dim, int L);

struct GridWeights {
    std::array<std::vector<double>, MAX_DIM> w;
};

// Weight arrays aligned with the grid; torus grids get wrapped halos.
GridWeights grid_weights(const Environment& env, const Grid& g);

void clear_values(Grid& g);
void torus_halo(Grid& g);
void generator_step(Grid& in, const GridWeights& W, Grid& out);
void mass_step(Grid& in, const GridWeights& W, Grid& out);

double inner_sum(const Grid& g);
double inner_max_abs_diff(const Grid& a, const Grid& b);

// y += c * x over the padded arrays (halo entries are zero/wrapped copies).
void grid_axpy(Grid& y, const Grid& x, double c);

// Visit logical offsets of the inner region in lexicographic order.
void for_each_inner(const Grid& g, const std::function<void(const Site&, std::int64_t)>& f);

}  // namespace rwre
