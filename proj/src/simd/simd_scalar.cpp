#include "rwre/simd.hpp"

namespace rwre::simd {

namespace {

template <int A>
void generator_row_t(const RowArgs& r) {
    double* out = r.out;
    const double* u = r.u;
    for (std::size_t j = 0; j < r.n; ++j) {
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
    for (std::size_t j = 0; j < r.n; ++j) {
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
    for (std::size_t j = 0; j < n; ++j) y[j] = y[j] + a * x[j];
}

void scale(double* y, double a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) y[j] = y[j] * a;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{"scalar", &generator_row, &mass_row, &axpy, &scale};
    return b;
}

double sum_ordered(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[j];
    return s;
}

}  // namespace rwre::simd
