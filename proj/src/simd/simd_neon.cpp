// NEON backend (aarch64). Mirrors the scalar operation order exactly
// (vmulq/vaddq, no fused multiply-add) for bit-identical results.

#include "rwre/simd.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace rwre::simd {

namespace {

template <int A>
void generator_row_t(const RowArgs& r) {
    double* out = r.out;
    const double* u = r.u;
    std::size_t j = 0;
    const float64x2_t half = vdupq_n_f64(0.5);
    for (; j + 2 <= r.n; j += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            const float64x2_t pair = vaddq_f64(vld1q_f64(u + j + s), vld1q_f64(u + j - s));
            acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(r.w[i] + j), pair));
        }
        vst1q_f64(out + j, vmulq_f64(half, acc));
    }
    for (; j < r.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            acc = acc + r.w[i][j] * (u[j + s] + u[j - s]);
        }
        out[j] = 0.5 * acc;
    }
}

template <int A>
void mass_row_t(const RowArgs& r) {
    double* out = r.out;
    const double* u = r.u;
    std::size_t j = 0;
    const float64x2_t half = vdupq_n_f64(0.5);
    for (; j + 2 <= r.n; j += 2) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            const float64x2_t up = vmulq_f64(vld1q_f64(r.w[i] + j + s), vld1q_f64(u + j + s));
            const float64x2_t dn = vmulq_f64(vld1q_f64(r.w[i] + j - s), vld1q_f64(u + j - s));
            acc = vaddq_f64(acc, vaddq_f64(up, dn));
        }
        vst1q_f64(out + j, vmulq_f64(half, acc));
    }
    for (; j < r.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            acc = acc + (r.w[i][j + s] * u[j + s] + r.w[i][j - s] * u[j - s]);
        }
        out[j] = 0.5 * acc;
    }
}

void generator_row(const RowArgs& r) {
    switch (r.axes) {
        case 2: generator_row_t<2>(r); return;
        case 3: generator_row_t<3>(r); return;
        case 4: generator_row_t<4>(r); return;
        case 5: generator_row_t<5>(r); return;
        case 6: generator_row_t<6>(r); return;
        default: generator_row_t<1>(r); return;
    }
}

void mass_row(const RowArgs& r) {
    switch (r.axes) {
        case 2: mass_row_t<2>(r); return;
        case 3: mass_row_t<3>(r); return;
        case 4: mass_row_t<4>(r); return;
        case 5: mass_row_t<5>(r); return;
        case 6: mass_row_t<6>(r); return;
        default: mass_row_t<1>(r); return;
    }
}

void axpy(double* y, const double* x, double a, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2)
        vst1q_f64(y + j, vaddq_f64(vld1q_f64(y + j), vmulq_f64(av, vld1q_f64(x + j))));
    for (; j < n; ++j) y[j] = y[j] + a * x[j];
}

void scale(double* y, double a, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) vst1q_f64(y + j, vmulq_f64(av, vld1q_f64(y + j)));
    for (; j < n; ++j) y[j] = y[j] * a;
}

}  // namespace

const Backend* neon_backend() {
    static const Backend b{"neon", &generator_row, &mass_row, &axpy, &scale};
    return &b;
}

}  // namespace rwre::simd

#else

namespace rwre::simd {
const Backend* neon_backend() { return nullptr; }
}  // namespace rwre::simd

#endif
