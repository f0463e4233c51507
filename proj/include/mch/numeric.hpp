#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mch/types.hpp"

namespace mch {

/// Format a double with 17 significant digits (round-trip exact, locale-free).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Neville polynomial extrapolation of f(eps) to eps = 0 from samples at
/// eps_k = eps0 / 2^k, k = 0..n-1. Works for any value type with the usual
/// vector-space operations (double, Complex, Matrix2).
template <typename T, typename F>
T extrapolate_to_zero(F&& f, double eps0, int n) {
    std::vector<T> tab(n);
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) {
        xs[k] = eps0 / double(1 << k);
        tab[k] = f(xs[k]);
    }
    for (int level = 1; level < n; ++level) {
        for (int k = n - 1; k >= level; --k) {
            const double xk = xs[k], xl = xs[k - level];
            tab[k] = tab[k] + (tab[k] - tab[k - 1]) * (xk / (xl - xk));
        }
    }
    return tab[n - 1];
}

/// Central difference with two Richardson levels over steps 2h, h, h/2;
/// truncation O(h^6) for smooth f, smallest step kept at h/2.
inline double central_diff_richardson(const std::function<double(double)>& f,
                                      double x, double h) {
    const double d1 = (f(x + 2 * h) - f(x - 2 * h)) / (4 * h);
    const double d2 = (f(x + h) - f(x - h)) / (2 * h);
    const double d3 = (f(x + h / 2) - f(x - h / 2)) / h;
    const double r12 = (4 * d2 - d1) / 3;
    const double r23 = (4 * d3 - d2) / 3;
    return (16 * r23 - r12) / 15;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

/// Residue of a meromorphic matrix function at a simple pole, computed by
/// trapezoid quadrature of (1/2pi i) . oint M dmu over a small circle.
/// Spectrally accurate; radius must separate the pole from all others.
inline Matrix2 contour_residue(const std::function<Matrix2(Complex)>& M, Complex pole,
                               double radius = 1e-3, int n_samples = 64) {
    Matrix2 acc = Matrix2::Zero();
    for (int k = 0; k < n_samples; ++k) {
        const double phi = 2.0 * M_PI * k / n_samples;
        const Complex w = radius * std::exp(Complex(0, phi));
        acc += M(pole + w) * w;
    }
    return acc / double(n_samples);
}

/// Monotonicity intervals of a sequence: number of maximal runs on which the
/// successive differences keep one sign. Zero differences are absorbed.
inline int monotonicity_intervals(const std::vector<double>& v) {
    int intervals = 0;
    int sign = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        if (d == 0) continue;
        const int s = d > 0 ? 1 : -1;
        if (s != sign) {
            ++intervals;
            sign = s;
        }
    }
    return intervals == 0 ? 1 : intervals;
}

}  // namespace mch
