#pragma once

#include <string>
#include <vector>

#include "mch/types.hpp"

namespace mch {

/// One-soliton parameters: angle of the pole pair on the unit circle and the
/// real norming parameter.
struct SolitonParams {
    double theta;      // in (0, pi/2)
    double delta_hat;  // != 0

    void validate() const;
};

struct PoleData {
    Complex mu;   // pole of the first column, in C+
    Complex rho;  // norming coefficient, != 0
};

/// Pole data for the reflectionless RH problem. The pole set must be closed
/// under mu -> -conj(mu) and mu -> -1/mu with the norming consistency
/// rho_j = conj(rho_j') = -mu_j^{-2} rho_j''. Only c = 1 is solvable here.
struct ReflectionlessData {
    std::vector<PoleData> poles;
    double c = 1.0;

    void validate(double tol = 1e-6) const;
    bool all_on_unit_circle(double tol = 1e-6) const;

    static ReflectionlessData one_soliton(const SolitonParams& params);
    static ReflectionlessData load_json(const std::string& path, double tol = 1e-6);
    void save_json(const std::string& path) const;
};

/// Quantities extracted from the RH solution at a fixed (y,t): the expansion
/// of M at mu = i (a1, a2, a3), the large-mu coefficient eta, and the
/// coefficient of the mu = +-1 singular structure. kappa1, kappa2, z are
/// populated by the one-soliton closed form only.
struct RHEvaluation {
    double a1 = 1.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double eta = 0.0;
    double alpha_plus = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double z = 0.0;
};

/// z(y,t) = 2 delta_hat sin(theta) exp(sin(theta)(y - 2t/cos^2 theta)),
/// exponent clamped to +-700 (saturation reported through the flag).
double z_of(const SolitonParams& params, double y, double t, bool* saturated = nullptr);

/// Closed-form one-soliton RH evaluation. Throws DomainError when z hits the
/// singular set {-1 +- sin theta} (reachable only for delta_hat < 0).
RHEvaluation one_soliton_eval(const SolitonParams& params, double y, double t);

/// The explicit rational one-soliton solution M(y,t,mu). Evaluation within
/// 1e-8 of a pole (+-1 and the four circle poles) is an error.
Matrix2 full_M(const SolitonParams& params, double y, double t, Complex mu);

enum class Assembly {
    Auto,            // RealCircle when every pole sits on the unit circle
    RealCircle,      // real unknowns via the circle reality pattern
    ComplexGeneral,  // complex residue vectors; off-circle pole sets
};

/// Full output of the reflectionless linear solve: the extracted evaluation
/// plus the rational representation of M (for invariant and residue checks).
struct ReflectionlessSolution {
    RHEvaluation eval;
    double alpha_plus = 0.0;
    std::vector<Complex> pole_mu;        // column-1 poles in C+
    std::vector<Vector2> pole_residue;   // column-1 residue vectors there
    std::vector<Complex> kappa_hat;      // rho_j e^{-2 p_hat(y,t,mu_j)}

    Matrix2 M(Complex mu) const;
};

ReflectionlessSolution solve_reflectionless(const ReflectionlessData& data, double y,
                                            double t, Assembly assembly = Assembly::Auto);

/// Residue-condition solver entry point per the module contract.
RHEvaluation reflectionless_solve(const ReflectionlessData& data, double y, double t,
                                  Assembly assembly = Assembly::Auto);

}  // namespace mch
