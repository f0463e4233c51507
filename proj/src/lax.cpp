#include "mch/lax.hpp"

#include <cmath>

#include "mch/spectral_plane.hpp"

namespace mch {

Matrix2 coeff_U(const FieldSample& f, Complex lambda) {
    Matrix2 u;
    u << -0.5, 0.5 * lambda * f.m, -0.5 * lambda * f.m, 0.5;
    return u;
}

Matrix2 coeff_V(const FieldSample& f, Complex lambda) {
    if (std::abs(lambda) < 1e-12) throw DomainError("lambda = 0 is excluded in V");
    const double om = f.omega();
    const Complex li = 1.0 / lambda;
    const Complex li2 = li * li;
    Matrix2 v;
    v << li2 + 0.5 * om, -li * (f.u - f.u_x + 1.0) - 0.5 * lambda * om * f.m,
        li * (f.u + f.u_x + 1.0) + 0.5 * lambda * om * f.m, -li2 - 0.5 * om;
    return v;
}

Matrix2 coeff_U_hat(double m, Complex mu) {
    require_mu_off_excluded_set(mu, true, true, false);
    const Complex mu2 = mu * mu;
    const Complex off = I_UNIT * (mu2 + 1.0) * (m - 1.0) / (2.0 * (mu2 - 1.0));
    const Complex dia = -I_UNIT * mu * (m - 1.0) / (mu2 - 1.0);
    Matrix2 u;
    u << dia, off, -off, -dia;
    return u;
}

Matrix2 coeff_U_hat0(double m, Complex mu) {
    require_mu_off_excluded_set(mu, true, true, false);
    const Complex mu2 = mu * mu;
    const Complex off = I_UNIT * (mu2 + 1.0) * (m - 1.0) / (2.0 * (mu2 - 1.0));
    const Complex dia = -(I_UNIT * mu * (m - 1.0) / (mu2 - 1.0) +
                          I_UNIT * (mu2 - 1.0) * m / (4.0 * mu) -
                          I_UNIT * (mu2 - 1.0) / (4.0 * mu));
    Matrix2 u;
    u << dia, off, -off, -dia;
    return u;
}

TildeCoefficients tilde_coefficients(double u, double u_x, double m) {
    return {-(m - 1.0) / (2.0 * m), u, -u - u_x, u - u_x};
}

Matrix2 coeff_tilde_U(double f, Complex mu) {
    require_mu_off_excluded_set(mu, false, true, false);
    const Complex a = I_UNIT * f / (mu - 1.0);
    const Complex b = I_UNIT * f / (mu + 1.0);
    const Complex c = I_UNIT * f;
    Matrix2 u;
    u << a + b, -a + b - c, a - b + c, -a - b;
    return u;
}

Matrix2 coeff_tilde_V(double q, double g1, double g2, Complex mu) {
    require_mu_off_excluded_set(mu, false, true, true);
    const Complex a = I_UNIT * q / (mu - 1.0);
    const Complex b = I_UNIT * q / (mu + 1.0);
    const Complex ci = 1.0 / (mu - I_UNIT);
    const Complex cmi = 1.0 / (mu + I_UNIT);
    Matrix2 v;
    v << a + b, -a + b + ci * g1 + cmi * g2, a - b + ci * g2 + cmi * g1, -a - b;
    return v;
}

double zero_curvature_residual(const FieldProfile& at_t, const FieldProfile& at_t_plus_dt,
                               std::span<const Complex> mu_grid, double dt) {
    const std::size_t n = at_t.size();
    if (at_t_plus_dt.size() != n) throw ConfigError("profile grids differ in length");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(at_t.x[i] - at_t_plus_dt.x[i]) > 1e-12)
            throw ConfigError("profile grids differ");
    const double dx = at_t.spacing();

    auto sample = [](const FieldProfile& p, std::size_t i) {
        return FieldSample{p.u[i], p.u_x[i], p.m[i]};
    };

    double worst = 0.0;
    std::vector<Matrix2> u1(n), u2(n), v1(n), v2(n);
    for (const Complex& mu : mu_grid) {
        const Complex lambda = lambda_of_mu(mu);
        for (std::size_t i = 0; i < n; ++i) {
            u1[i] = coeff_U(sample(at_t, i), lambda);
            u2[i] = coeff_U(sample(at_t_plus_dt, i), lambda);
            v1[i] = coeff_V(sample(at_t, i), lambda);
            v2[i] = coeff_V(sample(at_t_plus_dt, i), lambda);
        }
        auto vx_at = [&](const std::vector<Matrix2>& v, std::size_t i) -> Matrix2 {
            if (i == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
            if (i == n - 1)
                return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx);
            return (v[i + 1] - v[i - 1]) / (2.0 * dx);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const Matrix2 ut = (u2[i] - u1[i]) / dt;
            const Matrix2 vx = 0.5 * (vx_at(v1, i) + vx_at(v2, i));
            const Matrix2 um = 0.5 * (u1[i] + u2[i]);
            const Matrix2 vm = 0.5 * (v1[i] + v2[i]);
            const Matrix2 res = ut - vx + um * vm - vm * um;
            worst = std::max(worst, res.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace mch
