// AVX2 backend. Per element it performs the exact operation sequence of the
// scalar reference (add pair, multiply weight, accumulate, final halve;
// mul/add kept separate, no FMA) so results are bit-identical to scalar.

#include "rwre/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#if defined(__AVX2__)

#include <immintrin.h>

namespace rwre::simd {

namespace {

template <int A>
void generator_row_t(const RowArgs& r) {
    double* out = r.out;
    const double* u = r.u;
    std::size_t j = 0;
    for (; j + 4 <= r.n; j += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            const __m256d up = _mm256_loadu_pd(u + j + s);
            const __m256d dn = _mm256_loadu_pd(u + j - s);
            const __m256d w = _mm256_loadu_pd(r.w[i] + j);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_add_pd(up, dn)));
        }
        _mm256_storeu_pd(out + j, _mm256_mul_pd(_mm256_set1_pd(0.5), acc));
    }
    for (; j < r.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            const double pair = u[j + s] + u[j - s];
            acc = acc + r.w[i][j] * pair;
        }
        out[j] = 0.5 * acc;
    }
}

template <int A>
void mass_row_t(const RowArgs& r) {
    double* out = r.out;
    const double* u = r.u;
    std::size_t j = 0;
    for (; j + 4 <= r.n; j += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int i = 0; i < A; ++i) {
            const std::ptrdiff_t s = r.s[i];
            const __m256d up = _mm256_mul_pd(_mm256_loadu_pd(r.w[i] + j + s), _mm256_loadu_pd(u + j + s));
            const __m256d dn = _mm256_mul_pd(_mm256_loadu_pd(r.w[i] + j - s), _mm256_loadu_pd(u + j - s));
            acc = _mm256_add_pd(acc, _mm256_add_pd(up, dn));
        }
        _mm256_storeu_pd(out + j, _mm256_mul_pd(_mm256_set1_pd(0.5), acc));
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
    const __m256d av = _mm256_set1_pd(a);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d v = _mm256_add_pd(_mm256_loadu_pd(y + j), _mm256_mul_pd(av, _mm256_loadu_pd(x + j)));
        _mm256_storeu_pd(y + j, v);
    }
    for (; j < n; ++j) y[j] = y[j] + a * x[j];
}

void scale(double* y, double a, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) _mm256_storeu_pd(y + j, _mm256_mul_pd(av, _mm256_loadu_pd(y + j)));
    for (; j < n; ++j) y[j] = y[j] * a;
}

}  // namespace

const Backend* avx2_backend() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Backend b{"avx2", &generator_row, &mass_row, &axpy, &scale};
    return &b;
}

}  // namespace rwre::simd

#else  // x86 without AVX2 at compile time

namespace rwre::simd {
const Backend* avx2_backend() { return nullptr; }
}  // namespace rwre::simd

#endif
#else  // not x86

namespace rwre::simd {
const Backend* avx2_backend() { return nullptr; }
}  // namespace rwre::simd

#endif
