#pragma once

// Runtime-dispatched kernels for the data-parallel inner loops: stencil steps
// of the walk kernel on dense grids and axpy-style accumulation. The scalar
// backend is the reference; vector backends must produce bit-identical
// results per element (same operation order, no FMA contraction), which the
// test suite asserts. Reductions are deliberately not vectorized so sums are
// independent of the active backend.
//
// Row kernels operate on contiguous runs of length n inside a padded grid:
//   generator_row: out[j] = 0.5 * sum_i w[i][j]     * (u[j+s_i] + u[j-s_i])
//   mass_row:      out[j] = 0.5 * sum_i (w[i][j+s_i]*u[j+s_i] + w[i][j-s_i]*u[j-s_i])
// with s_i the axis strides. The halo ring supplies zeros (absorbing) or
// wrapped values (torus); callers maintain it.

#include <cstddef>

namespace rwre::simd {

inline constexpr int MAX_AXES = 6;

struct RowArgs {
    double* out;
    const double* u;
    const double* const* w;   // w[i] points at the weight array for axis i
    const std::ptrdiff_t* s;  // axis strides
    int axes;
    std::size_t n;
};

struct Backend {
    const char* name;
    void (*generator_row)(const RowArgs&);
    void (*mass_row)(const RowArgs&);
    void (*axpy)(double* y, const double* x, double a, std::size_t n);
    void (*scale)(double* y, double a, std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when unsupported by CPU/build
const Backend* neon_backend();

// Active backend: best available, overridable with RWRE_SIMD=scalar|avx2|neon|auto.
const Backend& active_backend();

// Ordered scalar sum (backend-independent by construction).
double sum_ordered(const double* x, std::size_t n);

}  // namespace rwre::simd
