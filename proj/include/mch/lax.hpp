#pragma once

#include <span>
#include <vector>

#include "mch/profile.hpp"
#include "mch/types.hpp"

namespace mch {

/// Field values at one point. omega is always recomputed from u, u_x.
struct FieldSample {
    double u = 0.0;    // u-tilde
    double u_x = 0.0;  // u-tilde_x
    double m = 1.0;    // m-tilde = u - u_xx + 1

    double omega() const { return u * u - u_x * u_x + 2.0 * u; }
};

/// x-part of the Lax pair: (1/2) [[-1, lambda m], [-lambda m, 1]].
Matrix2 coeff_U(const FieldSample& f, Complex lambda);

/// t-part of the Lax pair (lambda != 0).
Matrix2 coeff_V(const FieldSample& f, Complex lambda);

/// Off-background coefficient in the mu-uniformized gauge (mu != 0, +-1).
Matrix2 coeff_U_hat(double m, Complex mu);

/// Regrouped variant vanishing identically at mu = +-i.
Matrix2 coeff_U_hat0(double m, Complex mu);

/// Coefficients of the (y,t)-scale Lax pair, per the substitution
/// f = -(m-1)/(2m), q = u, g1 = -u - u_x, g2 = u - u_x.
struct TildeCoefficients {
    double f, q, g1, g2;
};
TildeCoefficients tilde_coefficients(double u, double u_x, double m);

/// y-part coefficient in the (y,t) scale (mu != +-1).
Matrix2 coeff_tilde_U(double f, Complex mu);

/// t-part coefficient in the (y,t) scale (mu != +-1, +-i).
Matrix2 coeff_tilde_V(double q, double g1, double g2, Complex mu);

/// Zero-curvature defect max_i,mu |U_t - V_x + [U,V]| for two profiles at
/// times t and t+dt on a common x-grid. The time derivative is the midpoint
/// difference; V_x is the centered x-difference (one-sided at the ends),
/// everything evaluated at t+dt/2 by averaging, so the residual is O(dt^2+dx^2)
/// for an exact solution.
double zero_curvature_residual(const FieldProfile& at_t, const FieldProfile& at_t_plus_dt,
                               std::span<const Complex> mu_grid, double dt);

}  // namespace mch
