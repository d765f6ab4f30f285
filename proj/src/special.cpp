#include "rwre/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwre::special {

PoissonWeights poisson_weights(double t, double tail_tol) {
    if (t < 0) throw std::invalid_argument("poisson_weights: t < 0");
    if (t > 690) throw std::invalid_argument("poisson_weights: t too large for direct uniformization");
    PoissonWeights out;
    double pn = std::exp(-t);
    double cum = pn;
    out.p.push_back(pn);
    std::size_t n = 0;
    while (cum < 1.0 - tail_tol) {
        ++n;
        pn *= t / static_cast<double>(n);
        out.p.push_back(pn);
        cum += pn;
        if (n > 100000) throw std::runtime_error("poisson_weights: failed to reach tail tolerance");
    }
    out.tail = std::max(0.0, 1.0 - cum);
    return out;
}

std::vector<double> poisson_integral_weights(double T, double tol) {
    if (T == 0.0) return {};
    // w_n = P(Pois(T) > n); truncate at K with remaining sum E[(N-K)^+] <= tol.
    const double eps0 = tol / (10.0 * (T + 10.0));
    PoissonWeights pw = poisson_weights(T, eps0);
    std::vector<double> w(pw.p.size());
    double cum = 0.0;
    for (std::size_t n = 0; n < pw.p.size(); ++n) {
        cum += pw.p[n];
        w[n] = std::max(0.0, 1.0 - cum);
    }
    return w;
}

namespace {
// Lower incomplete gamma by series (x < a+1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}
// Upper incomplete gamma by continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
    const double FPMIN = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / FPMIN;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < FPMIN) d = FPMIN;
        c = b + an / c;
        if (std::abs(c) < FPMIN) c = FPMIN;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}
}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi2_quantile(double p, int k) {
    if (p <= 0 || p >= 1 || k < 1) throw std::invalid_argument("chi2_quantile: bad arguments");
    double lo = 0.0;
    double hi = k + 30.0 * std::sqrt(2.0 * k) + 100.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_p(0.5 * k, 0.5 * mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bessel_i0e(double x) {
    if (x < 0) x = -x;
    if (x <= 15.0) {
        // power series for I0, scaled afterwards
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x);
    }
    // asymptotic: I0(x) ~ e^x/sqrt(2 pi x) * sum a_k / x^k
    static const double a[7] = {1.0,
                                1.0 / 8.0,
                                9.0 / 128.0,
                                225.0 / 3072.0,
                                11025.0 / 98304.0,
                                893025.0 / 3932160.0,
                                108056025.0 / 188743680.0};
    double s = 0.0, xp = 1.0;
    for (int k = 0; k < 7; ++k) {
        s += a[k] / xp;
        xp *= x;
    }
    return s / std::sqrt(2.0 * M_PI * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_sf(double x) {
    if (x <= 0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * s));
}

double ks_statistic_normal(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double F = normal_cdf(z[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

namespace {
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit fit{};
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace rwre::special
