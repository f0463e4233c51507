#pragma once

// Shared test fixtures: exact soliton profiles sampled through the
// parametric map (no interpolation error) and the Gaussian bump profile.

#include <cmath>
#include <vector>

#include "mch/profile.hpp"
#include "mch/reconstruction.hpp"
#include "mch/soliton_rh.hpp"

namespace mch::testing {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / double(n - 1);
    return g;
}

/// t = 0 one-soliton FieldProfile on the (non-uniform) parametric x-grid,
/// with u, u_x, m all taken from the closed forms.
inline FieldProfile exact_soliton_profile(const SolitonParams& params, double y_half,
                                          int n) {
    const ParametricSolution sol =
        soliton_profile(params, 0.0, linspace(-y_half, y_half, n));
    FieldProfile p;
    p.x = sol.x;
    p.u = sol.u;
    p.u_x = sol.u_x;
    p.m = sol.m;
    p.tail_bound = std::max(std::abs(p.m.front() - 1.0), std::abs(p.m.back() - 1.0));
    p.validate();
    return p;
}

/// u0 = amp * exp(-x^2) with analytic derivatives.
inline FieldProfile gaussian_profile(double amp = 0.3, double x_half = 12.0,
                                     int n = 4096) {
    std::vector<double> x = linspace(-x_half, x_half, n);
    std::vector<double> u(n), ux(n), uxx(n);
    for (int i = 0; i < n; ++i) {
        u[i] = amp * std::exp(-x[i] * x[i]);
        ux[i] = -2.0 * x[i] * u[i];
        uxx[i] = (4.0 * x[i] * x[i] - 2.0) * u[i];
    }
    return profile_from_u(x, u, DiffScheme::AnalyticSupplied, &ux, &uxx);
}

inline FieldProfile unit_background(int n = 101, double x_half = 10.0) {
    FieldProfile p;
    p.x = linspace(-x_half, x_half, n);
    p.u.assign(n, 0.0);
    p.u_x.assign(n, 0.0);
    p.m.assign(n, 1.0);
    p.tail_bound = 0.0;
    return p;
}

}  // namespace mch::testing
