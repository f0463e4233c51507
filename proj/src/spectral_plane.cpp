#include "mch/spectral_plane.hpp"

#include <algorithm>
#include <cmath>

namespace mch {

namespace {

constexpr double kExclusionTol = 1e-12;

void require_nonzero(Complex mu) {
    if (std::abs(mu) < kExclusionTol) throw DomainError("mu = 0 is excluded");
}

void require_off_pm1(Complex mu) {
    if (std::abs(mu - 1.0) < kExclusionTol || std::abs(mu + 1.0) < kExclusionTol)
        throw DomainError("mu = +-1 is excluded");
}

void require_off_pmi(Complex mu) {
    if (std::abs(mu - I_UNIT) < kExclusionTol || std::abs(mu + I_UNIT) < kExclusionTol)
        throw DomainError("mu = +-i is excluded");
}

}  // namespace

Complex lambda_of_mu(Complex mu) {
    require_nonzero(mu);
    return -0.5 * (mu + 1.0 / mu);
}

Complex k_of_mu(Complex mu) {
    require_nonzero(mu);
    return 0.25 * (mu - 1.0 / mu);
}

Complex phase_p_hat(double y, double t, Complex mu) {
    require_nonzero(mu);
    require_off_pmi(mu);
    const Complex mu2 = mu * mu;
    const Complex coef = -I_UNIT * (mu2 - 1.0) / (4.0 * mu);
    const Complex onep = mu2 + 1.0;
    return coef * (-y + 8.0 * mu2 * t / (onep * onep));
}

Complex phase_p(double x, double t, Complex mu, double cumulative_integral) {
    require_nonzero(mu);
    require_off_pmi(mu);
    const Complex mu2 = mu * mu;
    const Complex coef = -I_UNIT * (mu2 - 1.0) / (4.0 * mu);
    const Complex onep = mu2 + 1.0;
    return coef * (cumulative_integral - x + 8.0 * mu2 * t / (onep * onep));
}

Complex phase_p0(double x, double t, Complex mu) { return phase_p(x, t, mu, 0.0); }

std::vector<Complex> symmetry_orbit(Complex mu, double tol) {
    require_nonzero(mu);
    const Complex images[4] = {mu, -std::conj(mu), -1.0 / mu, 1.0 / std::conj(mu)};
    std::vector<Complex> orbit;
    for (const Complex& w : images) {
        const bool seen = std::any_of(orbit.begin(), orbit.end(),
                                      [&](Complex v) { return std::abs(v - w) <= tol; });
        if (!seen) orbit.push_back(w);
    }
    return orbit;
}

// require_off_pm1 is used by the Lax-coefficient module via this helper.
void require_mu_off_excluded_set(Complex mu, bool exclude_zero, bool exclude_pm1,
                                 bool exclude_pmi) {
    if (exclude_zero) require_nonzero(mu);
    if (exclude_pm1) require_off_pm1(mu);
    if (exclude_pmi) require_off_pmi(mu);
}

}  // namespace mch
