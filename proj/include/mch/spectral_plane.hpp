#pragma once

#include <optional>
#include <vector>

#include "mch/types.hpp"

namespace mch {

// Uniformized spectral-parameter algebra. The maps lambda(mu), k(mu)
// rationalize the pair (lambda, sqrt(1 - lambda^2)); the phase functions
// p, p0, p_hat carry the (x,t)- and (y,t)-scale exponents of the Lax pair.

/// lambda = -(mu + 1/mu)/2.
Complex lambda_of_mu(Complex mu);

/// k = (mu - 1/mu)/4, so that lambda^2 = 4 k^2 + 1.
Complex k_of_mu(Complex mu);

/// Phase in the (y,t) scale:
///   p_hat(y,t,mu) = -i (mu^2-1)/(4 mu) * (-y + 8 mu^2 t / (mu^2+1)^2).
Complex phase_p_hat(double y, double t, Complex mu);

/// Phase in the (x,t) scale; cumulative_integral = int_x^inf (m-1) dxi is
/// supplied by the caller:
///   p(x,t,mu) = -i (mu^2-1)/(4 mu) * (I - x + 8 mu^2 t / (mu^2+1)^2).
Complex phase_p(double x, double t, Complex mu, double cumulative_integral);

/// Background phase p0 = p with I = 0.
Complex phase_p0(double x, double t, Complex mu);

/// Deduplicated closure of {mu} under mu -> -conj(mu) and mu -> -1/mu.
/// At most 4 points; exactly 2 on the unit circle off the imaginary axis;
/// 1 at mu = i.
std::vector<Complex> symmetry_orbit(Complex mu, double tol = 1e-12);

/// Throws DomainError when mu lies (within 1e-12) on a requested excluded point.
void require_mu_off_excluded_set(Complex mu, bool exclude_zero, bool exclude_pm1,
                                 bool exclude_pmi);

/// Position/time parameters shared by the phase functions. The optional x
/// and cumulative integral select the (x,t)-scale phases.
struct PhaseContext {
    double y = 0;
    double t = 0;
    std::optional<double> x;
    std::optional<double> cumulative_integral;
};

}  // namespace mch
