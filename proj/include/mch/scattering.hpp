#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mch/profile.hpp"
#include "mch/soliton_rh.hpp"
#include "mch/types.hpp"

namespace mch {

enum class Side { Plus, Minus };

/// Jost solution value at one point: the solution of the conjugated Lax
/// x-equation normalized to the identity at the grid end of `side`.
struct JostSolution {
    Matrix2 value;
    Side side;
};

/// Rectangle in C+ for the zero search.
struct SearchRegion {
    double re_lo = -10.5, re_hi = 10.5;
    double im_lo = 0.06, im_hi = 10.5;
};

struct ScatterOptions {
    double ode_rtol = 1e-10;
    double ode_atol = 1e-12;
    double zero_tol = 1e-10;
    SearchRegion region;
    bool with_zeros = true;
    std::vector<double> mu_grid;  // empty -> default reciprocal-closed grid
};

/// Default 64-point real-mu grid: reciprocal- and negation-closed, avoiding
/// bands around 0 and +-1.
std::vector<double> default_mu_grid();

/// Solves the Volterra-equivalent matrix ODE initial-value problem from the
/// `side` grid end to x_eval (adaptive Dormand-Prince, rtol 1e-10, atol 1e-12).
JostSolution jost_solve(const FieldProfile& profile, Complex mu, Side side,
                        double x_eval, double rtol = 1e-10, double atol = 1e-12);

/// Spectral functions at real (or complex, for a) mu from the determinant
/// representations evaluated at a common interior matching point.
std::pair<Complex, Complex> scattering_ab(const FieldProfile& profile, Complex mu);

/// Same, with an explicit matching point (must be a grid point for the
/// trapezoid phase integral to be exact on the grid).
std::pair<Complex, Complex> scattering_ab_at(const FieldProfile& profile, Complex mu,
                                             std::size_t match_index);

/// a(mu) alone, from the two analytic columns (valid in closed C+).
Complex scattering_a(const FieldProfile& profile, Complex mu);

/// Zeros of a in the region, by argument-principle counting on subdivided
/// rectangles with Newton polishing; the result is restricted to the annulus
/// 0.1 <= |mu| <= 10, deduplicated, and completed under the symmetry orbit.
std::vector<Complex> find_zeros_a(const FieldProfile& profile, const SearchRegion& region,
                                  double tol = 1e-10);

/// Norming constants rho_j = da/dmu(mu_j) . delta_j where delta_j comes from
/// the proportionality of the two Jost columns at the zero, fitted by least
/// squares over several matching points.
std::vector<PoleData> norming_constants(const FieldProfile& profile,
                                        const std::vector<Complex>& zeros);

struct SingularityConstants {
    double gamma = 0.0;
    double c = 1.0;
    bool generic = false;
};

/// gamma = -2i lim (mu-1) a(mu) along mu = 1 + i eps (Richardson over
/// eps = 1e-2, 5e-3, 2.5e-3); c per the generic/non-generic dichotomy.
/// |gamma| inside the dead band [1e-4, 1e-2] is an error.
SingularityConstants singularity_constant(const FieldProfile& profile);

struct SpectralData {
    std::vector<double> mu_grid;
    std::vector<Complex> a, b, r;
    std::vector<PoleData> zeros;
    double gamma = 0.0;
    double c = 1.0;
    // meta
    double ode_rtol = 1e-10, ode_atol = 1e-12, zero_tol = 1e-10;
    std::size_t grid_n = 0;
    double x_min = 0.0, x_max = 0.0;

    double unitarity_defect() const;  // max | |a|^2 - |b|^2 - 1 | on the grid
};

SpectralData compute_spectral_data(const FieldProfile& profile,
                                   const ScatterOptions& options = {});

void save_spectral_json(const SpectralData& data, const std::string& path);
SpectralData load_spectral_json(const std::string& path);

}  // namespace mch
