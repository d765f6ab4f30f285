#include "rwre/grid.hpp"

#include <cmath>
#include <functional>

#include "rwre/simd.hpp"

namespace rwre {

namespace {

Grid make_grid(int dim, std::int32_t lo, std::int32_t extent, const Site& base, bool torus) {
    Grid g;
    g.dim = dim;
    g.torus = torus;
    g.lo = lo;
    g.extent = extent;
    g.base = base;
    std::int64_t s = 1;
    for (int i = dim - 1; i >= 0; --i) {
        g.stride[i] = s;
        s *= extent + 2;
    }
    g.volume = s;
    g.a.assign(static_cast<std::size_t>(s), 0.0);
    return g;
}

// Iterate rows: all inner multi-indices over axes 0..d-2, contiguous run
// along the last axis. f(row_start_linear).
template <typename F>
void for_each_row(const Grid& g, F&& f) {
    const int d = g.dim;
    if (d == 1) {
        f(g.stride[0] * 0 + 1);
        return;
    }
    std::array<std::int32_t, MAX_DIM> idx{};  // 0..extent-1 per leading axis
    while (true) {
        std::int64_t start = 1;  // halo offset along last axis
        for (int i = 0; i < d - 1; ++i) start += (std::int64_t(idx[i]) + 1) * g.stride[i];
        f(start);
        int i = d - 2;
        while (i >= 0) {
            if (++idx[i] < g.extent) break;
            idx[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
}

}  // namespace

Grid box_grid(int dim, int radius, const Site& base) {
    return make_grid(dim, -radius, 2 * radius + 1, base, false);
}

Grid torus_grid(int dim, int L) { return make_grid(dim, 0, L, Site{}, true); }

GridWeights grid_weights(const Environment& env, const Grid& g) {
    GridWeights W;
    for (int i = 0; i < g.dim; ++i) W.w[i].assign(static_cast<std::size_t>(g.volume), 0.0);
    for_each_inner(g, [&](const Site& rel, std::int64_t k) {
        Site x = g.base + rel;
        const DiagWeights dw = env.site_weights(x);
        for (int i = 0; i < g.dim; ++i) W.w[i][static_cast<std::size_t>(k)] = dw[i];
    });
    if (g.torus) {
        // Wrap halos once; weights are static.
        Grid tmp = g;
        for (int i = 0; i < g.dim; ++i) {
            tmp.a = W.w[i];
            torus_halo(tmp);
            W.w[i] = tmp.a;
        }
    }
    return W;
}

void clear_values(Grid& g) { std::fill(g.a.begin(), g.a.end(), 0.0); }

void torus_halo(Grid& g) {
    const int d = g.dim;
    const std::int32_t L = g.extent;
    // Copy the two faces of each axis from the opposite inner slabs. Only
    // face cells with all other coordinates inner are ever read by the
    // +-e_i stencil; corners stay stale and harmless.
    for (int ax = 0; ax < d; ++ax) {
        std::array<std::int32_t, MAX_DIM> idx{};
        while (true) {
            // idx enumerates the inner coordinates of the other axes
            std::int64_t off = 0;
            int j = 0;
            for (int i = 0; i < d; ++i) {
                if (i == ax) continue;
                off += (std::int64_t(idx[j]) + 1) * g.stride[i];
                ++j;
            }
            // halo at -1 <- inner L-1 ; halo at L <- inner 0
            g.a[static_cast<std::size_t>(off + 0 * g.stride[ax])] =
                g.a[static_cast<std::size_t>(off + std::int64_t(L) * g.stride[ax])];
            g.a[static_cast<std::size_t>(off + std::int64_t(L + 1) * g.stride[ax])] =
                g.a[static_cast<std::size_t>(off + 1 * g.stride[ax])];
            int i = d - 2;
            while (i >= 0) {
                if (++idx[i] < L) break;
                idx[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
}

namespace {
void run_step(Grid& in, const GridWeights& W, Grid& out,
              void (*row)(const simd::RowArgs&)) {
    if (in.torus) torus_halo(in);
    const double* wp[MAX_DIM];
    std::ptrdiff_t strides[MAX_DIM];
    for (int i = 0; i < in.dim; ++i) strides[i] = static_cast<std::ptrdiff_t>(in.stride[i]);
    for_each_row(in, [&](std::int64_t start) {
        simd::RowArgs args;
        args.out = out.a.data() + start;
        args.u = in.a.data() + start;
        for (int i = 0; i < in.dim; ++i) wp[i] = W.w[i].data() + start;
        args.w = wp;
        args.s = strides;
        args.axes = in.dim;
        args.n = static_cast<std::size_t>(in.extent);
        row(args);
    });
}
}  // namespace

void generator_step(Grid& in, const GridWeights& W, Grid& out) {
    run_step(in, W, out, simd::active_backend().generator_row);
}

void mass_step(Grid& in, const GridWeights& W, Grid& out) {
    run_step(in, W, out, simd::active_backend().mass_row);
}

double inner_sum(const Grid& g) {
    double total = 0.0;
    for_each_row(g, [&](std::int64_t start) {
        total += simd::sum_ordered(g.a.data() + start, static_cast<std::size_t>(g.extent));
    });
    return total;
}

double inner_max_abs_diff(const Grid& a, const Grid& b) {
    double m = 0.0;
    for_each_row(a, [&](std::int64_t start) {
        const double* pa = a.a.data() + start;
        const double* pb = b.a.data() + start;
        for (std::int32_t j = 0; j < a.extent; ++j) m = std::max(m, std::abs(pa[j] - pb[j]));
    });
    return m;
}

void grid_axpy(Grid& y, const Grid& x, double c) {
    simd::active_backend().axpy(y.a.data(), x.a.data(), c, y.a.size());
}

void for_each_inner(const Grid& g, const std::function<void(const Site&, std::int64_t)>& f) {
    const int d = g.dim;
    Site rel;
    for (int i = 0; i < d; ++i) rel[i] = g.lo;
    while (true) {
        f(rel, g.lin(rel));
        int i = d - 1;
        while (i >= 0) {
            if (++rel[i] < g.lo + g.extent) break;
            rel[i] = g.lo;
            --i;
        }
        if (i < 0) break;
    }
}

}  // namespace rwre
