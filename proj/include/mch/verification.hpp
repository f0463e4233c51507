#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mch/profile.hpp"
#include "mch/types.hpp"

namespace mch {

struct ResidualReport {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string grid_meta;
};

std::string to_json_line(const ResidualReport& report);
void save_reports_jsonl(std::span<const ResidualReport> reports, const std::string& path);

/// Point values of a (y,t)-parametrized solution.
struct FieldsYT {
    double u, u_x, m;
};
using YTSampler = std::function<FieldsYT(double y, double t)>;

/// max_y |d/dt (1/m) - 2 u_x| with centered t-differences at step h.
/// Differences are Richardson-refined pointwise whenever the plain residual
/// exceeds half the tolerance, separating discretization error from failure.
ResidualReport pde_residual_y(const YTSampler& source, std::span<const double> y_grid,
                              double t, double h, double tolerance = 1e-7);

/// max_y |m - u + (d/dy u_x) m - 1| with centered y-differences at step h.
ResidualReport constitutive_residual(const YTSampler& source,
                                     std::span<const double> y_grid, double t, double h,
                                     double tolerance = 1e-6);

/// Residuals of the four coefficient equations linking f = -(m-1)/(2m),
/// q = u, g1 = -u-u_x, g2 = u-u_x and their y/t derivatives.
std::vector<ResidualReport> rel_residuals(const YTSampler& source,
                                          std::span<const double> y_grid, double t,
                                          double h, double tolerance = 1e-6);

using MuEvaluator = std::function<Matrix2(Complex)>;

/// det - 1, the three symmetry defects, the off-diagonal mass of M(i), and
/// M(0) - I over the given mu samples (which must avoid poles and +-1).
std::vector<ResidualReport> rh_invariant_suite(const MuEvaluator& M,
                                               std::span<const Complex> mu_samples,
                                               double tolerance = 1e-10);

/// |Res_{mu_j} M^(1) - (1/kappa_hat) M^(2)(mu_j)| via small-circle contour
/// averaging around the pole.
double residue_defect(const MuEvaluator& M, Complex mu_j, Complex kappa_hat,
                      double radius = 1e-3);

/// Defect of (mu-1) M(mu) -> (i alpha_plus/2) [[-1,1],[-1,1]] along
/// mu = 1 + i eps, extrapolated to eps = 0.
double singularity_defect_at_one(const MuEvaluator& M, double alpha_plus);

/// max_i |m_t + (omega m)_x| for two x-frame profiles at t and t+dt on a
/// common uniform grid (midpoint time difference, centered x-difference).
/// Indices within two stencil widths of a masked point are skipped.
ResidualReport pde_residual_x(const FieldProfile& at_t, const FieldProfile& at_t_plus_dt,
                              double dt, double tolerance = 1e-4,
                              std::span<const int> mask = {});

}  // namespace mch
