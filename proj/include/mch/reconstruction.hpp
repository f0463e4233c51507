#pragma once

#include <span>
#include <string>
#include <vector>

#include "mch/profile.hpp"
#include "mch/soliton_rh.hpp"
#include "mch/types.hpp"

namespace mch {

enum class Classification { Smooth, FiniteSmoothness, Loop, Singular };

std::string to_string(Classification c);

/// Fields recovered from one RH evaluation:
///   u = -a2 a1 - a3/a1,  u_x = -a2 a1 + a3/a1,  m = 1/(1 - eta),
///   x(y,t) = y + x_offset with x_offset = 2 ln a1.
struct RecoveredFields {
    double u, u_x, m, x_offset;
};
RecoveredFields recover_fields(const RHEvaluation& eval);

/// x_y(y,t) = R(z(y,t)) with R(z) = (z^2 + 2z cos 2theta + cos^2 theta) /
/// (z^2 + 2z + cos^2 theta).
double R_of_z(double z, double theta);

/// One-soliton fields in closed form as functions of z. These are the
/// independent route against which recover_fields is validated.
namespace closed_form {
double u(double z, double theta);
double u_x(double z, double theta);
double m(double z, double theta);
double x_offset(double z, double theta);
}  // namespace closed_form

/// Sampled parametric solution at fixed t over a y-grid. flags: 0 regular,
/// 1 singular-masked (delta_hat < 0 branch), 2 degenerate x_y (crest of the
/// theta = pi/3 soliton).
struct ParametricSolution {
    double t = 0;
    double theta = 0, delta_hat = 0;
    std::vector<double> y, x, u, u_x, m;
    std::vector<int> flags;
    Classification classification = Classification::Smooth;
};

ParametricSolution soliton_profile(const SolitonParams& params, double t,
                                   std::span<const double> y_grid);

/// Parameter classification per the one-soliton trichotomy; delta_hat < 0 is
/// singular regardless of theta. theta = pi/3 is matched to 1e-12.
Classification classify(const SolitonParams& params);

/// u on the requested x-grid via monotone cubic interpolation of the inverse
/// map y(x). Refuses loop/singular classifications; a non-monotone x array
/// raises ResampleError carrying the count of monotonicity intervals.
std::vector<double> resample_to_x(const ParametricSolution& sol,
                                  std::span<const double> x_grid);

/// Same resampling applied to (u, u_x, m) jointly, packaged as a FieldProfile.
FieldProfile resample_profile_to_x(const ParametricSolution& sol,
                                   std::span<const double> x_grid);

void save_parametric_csv(const ParametricSolution& sol, const std::string& path,
                         bool original_frame = false);

}  // namespace mch
