#include "mch/reconstruction.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "mch/interp.hpp"
#include "mch/numeric.hpp"

namespace mch {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Smooth: return "smooth";
        case Classification::FiniteSmoothness: return "finite-smoothness";
        case Classification::Loop: return "loop";
        case Classification::Singular: return "singular";
    }
    return "?";
}

RecoveredFields recover_fields(const RHEvaluation& eval) {
    if (!(eval.a1 > 0.0))
        throw DomainError("a1 <= 0: the log-form change of variables degenerates");
    if (eval.eta == 1.0) throw DomainError("eta = 1: m has a pole here");
    RecoveredFields f;
    f.u = -eval.a2 * eval.a1 - eval.a3 / eval.a1;
    f.u_x = -eval.a2 * eval.a1 + eval.a3 / eval.a1;
    f.m = 1.0 / (1.0 - eval.eta);
    f.x_offset = 2.0 * std::log(eval.a1);
    return f;
}

double R_of_z(double z, double theta) {
    const double c = std::cos(theta);
    const double den = z * z + 2.0 * z + c * c;
    if (den == 0.0) throw DomainError("R(z) denominator vanishes");
    return (z * z + 2.0 * z * std::cos(2.0 * theta) + c * c) / den;
}

namespace closed_form {

double u(double z, double theta) {
    const double c = std::cos(theta);
    const double tn = std::tan(theta);
    const double den = z * z + 2.0 * z + c * c;
    return 4.0 * tn * tn * z * (z * z + 2.0 * c * c * z + c * c) / (den * den);
}

double u_x(double z, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double den = z * z + 2.0 * z + c * c;
    return -4.0 * s * s * s / (c * c) * z * (z * z - c * c) / (den * den);
}

double m(double z, double theta) { return 1.0 / R_of_z(z, theta); }

double x_offset(double z, double theta) {
    const double s = std::sin(theta);
    return 2.0 * std::log((z + 1.0 + s) / (z + 1.0 - s));
}

}  // namespace closed_form

Classification classify(const SolitonParams& params) {
    params.validate();
    if (params.delta_hat < 0.0) return Classification::Singular;
    if (std::abs(params.theta - M_PI / 3.0) <= 1e-12)
        return Classification::FiniteSmoothness;
    return params.theta < M_PI / 3.0 ? Classification::Smooth : Classification::Loop;
}

ParametricSolution soliton_profile(const SolitonParams& params, double t,
                                   std::span<const double> y_grid) {
    params.validate();
    const double s = std::sin(params.theta);
    ParametricSolution sol;
    sol.t = t;
    sol.theta = params.theta;
    sol.delta_hat = params.delta_hat;
    sol.classification = classify(params);
    const std::size_t n = y_grid.size();
    sol.y.assign(y_grid.begin(), y_grid.end());
    sol.x.resize(n);
    sol.u.resize(n);
    sol.u_x.resize(n);
    sol.m.resize(n);
    sol.flags.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const double y = y_grid[i];
        const double z = z_of(params, y, t);
        // delta_hat < 0 branch: between the singular z values a1 <= 0 and the
        // change of variables is lost; emit masked fields instead of failing.
        const bool masked = (z + 1.0 - s <= 0.0) && (z + 1.0 + s >= 0.0);
        if (masked) {
            sol.flags[i] = 1;
            sol.x[i] = kNan;
            const double uu = closed_form::u(z, params.theta);
            const double uux = closed_form::u_x(z, params.theta);
            const double mm = closed_form::m(z, params.theta);
            sol.u[i] = std::isfinite(uu) ? uu : kNan;
            sol.u_x[i] = std::isfinite(uux) ? uux : kNan;
            sol.m[i] = std::isfinite(mm) ? mm : kNan;
            continue;
        }
        sol.u[i] = closed_form::u(z, params.theta);
        sol.x[i] = y + closed_form::x_offset(z, params.theta);
        const RHEvaluation eval = one_soliton_eval(params, y, t);
        if (eval.eta == 1.0) {
            // exact crest hit of the theta = pi/3 soliton: x_y = 0, m blows up
            sol.flags[i] = 2;
            sol.u_x[i] = closed_form::u_x(z, params.theta);
            sol.m[i] = kNan;
            continue;
        }
        const RecoveredFields f = recover_fields(eval);
        sol.u_x[i] = f.u_x;
        sol.m[i] = f.m;
    }
    return sol;
}

namespace {

struct InverseMap {
    CubicInterpolant y_of_x;
    CubicInterpolant u_of_y;
};

void require_resamplable(const ParametricSolution& sol) {
    if (sol.classification == Classification::Singular)
        throw ResampleError("singular profiles have no single-valued x-frame", 0);
    if (sol.classification == Classification::Loop ||
        monotonicity_intervals(sol.x) != 1) {
        const int intervals = monotonicity_intervals(sol.x);
        throw ResampleError("x(y) is not monotone (" + std::to_string(intervals) +
                                " monotonicity intervals); no x-frame resample",
                            intervals);
    }
}

}  // namespace

std::vector<double> resample_to_x(const ParametricSolution& sol,
                                  std::span<const double> x_grid) {
    require_resamplable(sol);
    CubicInterpolant y_of_x(sol.x, sol.y, CubicInterpolant::Kind::Monotone);
    CubicInterpolant u_of_y(sol.y, sol.u, CubicInterpolant::Kind::Monotone);
    std::vector<double> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) out[i] = u_of_y(y_of_x(x_grid[i]));
    return out;
}

FieldProfile resample_profile_to_x(const ParametricSolution& sol,
                                   std::span<const double> x_grid) {
    require_resamplable(sol);
    CubicInterpolant y_of_x(sol.x, sol.y, CubicInterpolant::Kind::Monotone);
    CubicInterpolant u_of_y(sol.y, sol.u, CubicInterpolant::Kind::Monotone);
    CubicInterpolant ux_of_y(sol.y, sol.u_x, CubicInterpolant::Kind::Monotone);
    CubicInterpolant m_of_y(sol.y, sol.m, CubicInterpolant::Kind::Monotone);
    FieldProfile p;
    p.x.assign(x_grid.begin(), x_grid.end());
    p.u.resize(x_grid.size());
    p.u_x.resize(x_grid.size());
    p.m.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double y = y_of_x(x_grid[i]);
        p.u[i] = u_of_y(y);
        p.u_x[i] = ux_of_y(y);
        p.m[i] = m_of_y(y);
    }
    p.tail_bound = std::max(std::abs(p.m.front() - 1.0), std::abs(p.m.back() - 1.0));
    p.validate();
    return p;
}

void save_parametric_csv(const ParametricSolution& sol, const std::string& path,
                         bool original_frame) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# theta=" << format_g17(sol.theta) << '\n';
    out << "# delta_hat=" << format_g17(sol.delta_hat) << '\n';
    out << "# t=" << format_g17(sol.t) << '\n';
    out << "# classification=" << to_string(sol.classification) << '\n';
    out << "# frame=" << (original_frame ? "u-original" : "u-tilde") << '\n';
    out << "y,x,u,u_x,m,flags\n";
    const double x_shift = original_frame ? sol.t : 0.0;
    const double u_shift = original_frame ? 1.0 : 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i)
        out << format_g17(sol.y[i]) << ',' << format_g17(sol.x[i] + x_shift) << ','
            << format_g17(sol.u[i] + u_shift) << ',' << format_g17(sol.u_x[i]) << ','
            << format_g17(sol.m[i]) << ',' << sol.flags[i] << '\n';
}

}  // namespace mch
