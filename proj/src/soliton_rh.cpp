#include "mch/soliton_rh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mch/spectral_plane.hpp"

namespace mch {

namespace {

constexpr double kPoleGuard = 1e-8;
constexpr double kExpClamp = 700.0;

double clamped_exp(double e, bool* saturated) {
    if (e > kExpClamp || e < -kExpClamp) {
        if (saturated) *saturated = true;
        e = std::clamp(e, -kExpClamp, kExpClamp);
    }
    return std::exp(e);
}

// Singular structure at mu = +-1 for c = 1, normalized to unit coefficient.
// The alpha_plus-dependence of M is alpha_plus * S(mu).
Matrix2 singular_structure(Complex mu) {
    Matrix2 c1, c2;
    c1 << -1, 1, -1, 1;
    c2 << 1, 1, -1, -1;
    return Complex(0, 0.5) * (c1 / (mu - 1.0) - c2 / (mu + 1.0));
}

}  // namespace

void SolitonParams::validate() const {
    if (!(theta > 0.0) || !(theta < M_PI / 2))
        throw ConfigError("theta must lie in (0, pi/2)");
    if (delta_hat == 0.0) throw ConfigError("delta_hat must be nonzero");
}

double z_of(const SolitonParams& params, double y, double t, bool* saturated) {
    params.validate();
    const double s = std::sin(params.theta);
    const double c = std::cos(params.theta);
    const double expo = s * (y - 2.0 * t / (c * c));
    return 2.0 * params.delta_hat * s * clamped_exp(expo, saturated);
}

RHEvaluation one_soliton_eval(const SolitonParams& params, double y, double t) {
    const double z = z_of(params, y, t);
    const double s = std::sin(params.theta);
    const double c = std::cos(params.theta);
    // denominator (z+1)^2 - sin^2 theta vanishes at z = -1 +- sin theta
    if (std::abs(z - (-1.0 + s)) < 1e-12 || std::abs(z - (-1.0 - s)) < 1e-12)
        throw DomainError("z hits the singular set -1 +- sin(theta)");
    const double den = z * z + 2.0 * z + c * c;

    RHEvaluation e;
    e.z = z;
    e.kappa2 = -2.0 * z * s / den;
    e.kappa1 = 2.0 * s * c / den;
    e.alpha_plus = 2.0 * e.kappa2;
    e.a1 = (z + 1.0 + s) / (z + 1.0 - s);
    e.a2 = s * e.kappa2 / (1.0 + s);
    e.a3 = s * e.kappa2 / (1.0 - s);
    e.eta = -2.0 * e.kappa2 * s;
    return e;
}

Matrix2 full_M(const SolitonParams& params, double y, double t, Complex mu) {
    const RHEvaluation e = one_soliton_eval(params, y, t);
    const Complex w = std::exp(Complex(0, params.theta));
    const Complex wb = std::conj(w);
    for (const Complex& pole : {Complex(1, 0), Complex(-1, 0), w, -wb, wb, -w})
        if (std::abs(mu - pole) < kPoleGuard)
            throw DomainError("mu too close to a pole of M");

    const Complex ik1 = Complex(0, e.kappa1);
    const Complex ik2 = Complex(0, e.kappa2);
    Matrix2 m = Matrix2::Identity() + e.alpha_plus * singular_structure(mu);
    m(0, 0) += ik1 * w / (mu - w) + ik1 * wb / (mu + wb);
    m(0, 1) += -ik2 * wb / (mu - wb) + ik2 * w / (mu + w);
    m(1, 0) += ik2 * w / (mu - w) - ik2 * wb / (mu + wb);
    m(1, 1) += -ik1 * wb / (mu - wb) - ik1 * w / (mu + w);
    return m;
}

void ReflectionlessData::validate(double tol) const {
    if (std::abs(c - 1.0) > 1e-12)
        throw ConfigError(
            "reflectionless solve requires c = 1 (the generic c = 0 regime has no "
            "soliton construction)");
    for (const PoleData& p : poles) {
        if (!(p.mu.imag() > 0.0)) throw ConfigError("poles must lie in the open C+");
        if (std::abs(p.rho) == 0.0) throw ConfigError("rho must be nonzero");
    }
    auto find_near = [&](Complex target) -> const PoleData* {
        for (const PoleData& p : poles)
            if (std::abs(p.mu - target) <= tol * (1.0 + std::abs(target))) return &p;
        return nullptr;
    };
    for (const PoleData& p : poles) {
        const PoleData* mirror = find_near(-std::conj(p.mu));
        if (!mirror) throw ConfigError("pole set not closed under mu -> -conj(mu)");
        if (std::abs(p.rho - std::conj(mirror->rho)) > tol * (1.0 + std::abs(p.rho)))
            throw ConfigError("rho violates rho_j = conj(rho_j')");
        const PoleData* inv = find_near(-1.0 / p.mu);
        if (!inv) throw ConfigError("pole set not closed under mu -> -1/mu");
        if (std::abs(p.rho + inv->rho / (p.mu * p.mu)) > tol * (1.0 + std::abs(p.rho)))
            throw ConfigError("rho violates rho_j = -mu_j^{-2} rho_j''");
    }
}

bool ReflectionlessData::all_on_unit_circle(double tol) const {
    return std::all_of(poles.begin(), poles.end(), [&](const PoleData& p) {
        return std::abs(std::abs(p.mu) - 1.0) <= tol;
    });
}

ReflectionlessData ReflectionlessData::one_soliton(const SolitonParams& params) {
    params.validate();
    const Complex w = std::exp(Complex(0, params.theta));
    const Complex rho1 = I_UNIT * std::conj(w) * params.delta_hat;
    ReflectionlessData d;
    d.poles = {{w, rho1}, {-std::conj(w), std::conj(rho1)}};
    d.c = 1.0;
    return d;
}

ReflectionlessData ReflectionlessData::load_json(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open reflectionless data: " + path);
    nlohmann::json j;
    in >> j;
    ReflectionlessData d;
    d.c = j.at("c").get<double>();
    for (const auto& p : j.at("poles")) {
        const auto mu = p.at("mu");
        const auto rho = p.at("rho");
        d.poles.push_back({Complex(mu.at(0).get<double>(), mu.at(1).get<double>()),
                           Complex(rho.at(0).get<double>(), rho.at(1).get<double>())});
    }
    d.validate(tol);
    return d;
}

void ReflectionlessData::save_json(const std::string& path) const {
    nlohmann::json j;
    j["c"] = c;
    j["poles"] = nlohmann::json::array();
    for (const PoleData& p : poles)
        j["poles"].push_back({{"mu", {p.mu.real(), p.mu.imag()}},
                              {"rho", {p.rho.real(), p.rho.imag()}}});
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << '\n';
}

Matrix2 ReflectionlessSolution::M(Complex mu) const {
    for (const Complex& pole : {Complex(1, 0), Complex(-1, 0)})
        if (std::abs(mu - pole) < kPoleGuard)
            throw DomainError("mu too close to a pole of M");
    Matrix2 m = Matrix2::Identity() + alpha_plus * singular_structure(mu);
    for (std::size_t j = 0; j < pole_mu.size(); ++j) {
        if (std::abs(mu - pole_mu[j]) < kPoleGuard ||
            std::abs(mu - std::conj(pole_mu[j])) < kPoleGuard)
            throw DomainError("mu too close to a pole of M");
        m.col(0) += pole_residue[j] / (mu - pole_mu[j]);
        const Vector2 mirrored = sigma1() * pole_residue[j].conjugate();
        m.col(1) += mirrored / (mu - std::conj(pole_mu[j]));
    }
    return m;
}

namespace {

// Extraction of (a1, a2, a3, eta) from the rational representation. All
// derivatives at mu = i are analytic; real parts are taken after verifying
// the imaginary residue is at rounding level.
RHEvaluation extract_evaluation(const ReflectionlessSolution& sol) {
    const Complex i{0, 1};
    Complex a1 = 1.0 + sol.alpha_plus * singular_structure(i)(0, 0);
    Complex a2 = sol.alpha_plus * 0.5;   // d/dmu of the singular part, entry (1,2)
    Complex a3 = sol.alpha_plus * -0.5;  // entry (2,1)
    Complex eta = 0.0;
    for (std::size_t j = 0; j < sol.pole_mu.size(); ++j) {
        const Complex mu_j = sol.pole_mu[j];
        const Vector2& v = sol.pole_residue[j];
        a1 += v(0) / (i - mu_j);
        a3 += -v(1) / ((i - mu_j) * (i - mu_j));
        const Complex w12 = std::conj(v(1));  // column-2 coefficient at conj(mu_j)
        const Complex d = i - std::conj(mu_j);
        a2 += -w12 / (d * d);
        eta += w12;
    }
    RHEvaluation e;
    e.a1 = a1.real();
    e.a2 = a2.real();
    e.a3 = a3.real();
    e.eta = eta.real();
    e.alpha_plus = sol.alpha_plus;
    const double imag_mass = std::abs(a1.imag()) + std::abs(a2.imag()) +
                             std::abs(a3.imag()) + std::abs(eta.imag());
    if (imag_mass > 1e-8 * (1.0 + std::abs(a1)))
        throw SolverError("RH extraction lost reality; residue data inconsistent");
    return e;
}

ReflectionlessSolution solve_circle(const ReflectionlessData& data, double y, double t) {
    // Representatives e^{i theta_n} with Re > 0; partners -e^{-i theta_n}.
    struct Pair {
        double theta;
        double delta_hat;
        Complex w;
    };
    std::vector<Pair> pairs;
    for (const PoleData& p : data.poles) {
        if (p.mu.real() <= 0.0) continue;
        const double theta = std::arg(p.mu);
        const Complex w = std::exp(Complex(0, theta));
        const Complex dh = -I_UNIT * w * p.rho;
        if (std::abs(dh.imag()) > 1e-6 * std::abs(dh))
            throw ConfigError("rho inconsistent with the circle reality pattern");
        pairs.push_back({theta, dh.real(), w});
    }
    const int n = int(pairs.size());
    if (int(data.poles.size()) != 2 * n)
        throw ConfigError("circle pole set must consist of +-pairs");

    ReflectionlessSolution sol;
    if (n == 0) {
        sol.eval = RHEvaluation{};
        return sol;
    }

    // kappa-double-hat per pair, real by construction on the circle
    std::vector<double> vk(n);
    for (int j = 0; j < n; ++j) {
        const Complex ph = phase_p_hat(y, t, pairs[j].w);
        bool sat = false;
        vk[j] = pairs[j].delta_hat * clamped_exp(-2.0 * ph.real(), &sat);
    }

    // Residue conditions at each representative give, per pair n:
    //   vk_n kappa1_n + M12(w_n) = 0,   vk_n kappa2_n + M22(w_n) = 0,
    // with alpha_plus = 2 sum_m kappa2_m substituted. All coefficients are
    // real on the circle; the imaginary parts cancel identically.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
    auto p12 = [](Complex mu, Complex w) {
        return -I_UNIT * std::conj(w) / (mu - std::conj(w)) + I_UNIT * w / (mu + w);
    };
    auto p22 = [](Complex mu, Complex w) {
        return -I_UNIT * std::conj(w) / (mu - std::conj(w)) - I_UNIT * w / (mu + w);
    };
    // unknown layout: x = (kappa1_1, kappa2_1, ..., kappa1_n, kappa2_n)
    double imag_leak = 0.0;
    for (int r = 0; r < n; ++r) {
        const Complex mu_r = pairs[r].w;
        const Matrix2 s = singular_structure(mu_r);
        for (int m = 0; m < n; ++m) {
            const Complex c12 = 2.0 * s(0, 1) + p12(mu_r, pairs[m].w);
            const Complex c21 = p22(mu_r, pairs[m].w);
            const Complex c22 = 2.0 * s(1, 1);
            A(2 * r, 2 * m + 1) += c12.real();
            A(2 * r + 1, 2 * m) += c21.real();
            A(2 * r + 1, 2 * m + 1) += c22.real();
            imag_leak = std::max({imag_leak, std::abs(c12.imag()),
                                  std::abs(c21.imag()), std::abs(c22.imag())});
        }
        A(2 * r, 2 * r) += vk[r];
        A(2 * r + 1, 2 * r + 1) += vk[r];
        rhs(2 * r + 1) = -1.0;
    }
    if (imag_leak > 1e-10)
        throw SolverError("circle reality pattern broken (imag leak " +
                          std::to_string(imag_leak) + ")");

    // vk spans e^{+-700} over the y-line; equilibrate rows before factoring
    for (int r = 0; r < 2 * n; ++r) {
        const double scale = std::max(A.row(r).cwiseAbs().maxCoeff(), std::abs(rhs(r)));
        if (scale > 0) {
            A.row(r) /= scale;
            rhs(r) /= scale;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (!qr.isInvertible()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        throw SolverError("singular reflectionless system (condition ~ " +
                          std::to_string(cond) + ")");
    }
    const Eigen::VectorXd kappa = qr.solve(rhs);

    double alpha = 0.0;
    for (int m = 0; m < n; ++m) alpha += 2.0 * kappa(2 * m + 1);
    sol.alpha_plus = alpha;
    for (int m = 0; m < n; ++m) {
        const Complex w = pairs[m].w;
        const double k1 = kappa(2 * m), k2 = kappa(2 * m + 1);
        sol.pole_mu.push_back(w);
        sol.pole_residue.push_back(Vector2(I_UNIT * w * k1, I_UNIT * w * k2));
        sol.pole_mu.push_back(-std::conj(w));
        sol.pole_residue.push_back(
            Vector2(I_UNIT * std::conj(w) * k1, -I_UNIT * std::conj(w) * k2));
        sol.kappa_hat.push_back(I_UNIT * std::conj(w) * vk[m]);
        sol.kappa_hat.push_back(std::conj(sol.kappa_hat.back()));
    }
    sol.eval = extract_evaluation(sol);
    return sol;
}

ReflectionlessSolution solve_general(const ReflectionlessData& data, double y, double t) {
    const int n = int(data.poles.size());
    ReflectionlessSolution sol;
    if (n == 0) {
        sol.eval = RHEvaluation{};
        return sol;
    }

    std::vector<Complex> kappa_hat(n);
    for (int j = 0; j < n; ++j) {
        const Complex ph = phase_p_hat(y, t, data.poles[j].mu);
        kappa_hat[j] = data.poles[j].rho * std::exp(-2.0 * ph);
    }

    // Unknowns: residue vectors v_j in C^2 (as Re/Im pairs) plus alpha_plus.
    // Equations: v_j = (1/kappa_hat_j) M^{(2)}(mu_j) for every pole, plus the
    // column-1 part of M(0) = I. The system is affine in the real unknowns;
    // columns are extracted by evaluating the residual map on basis vectors.
    const int n_unknowns = 4 * n + 1;
    const int n_equations = 4 * n + 4;

    auto residual_map = [&](const Eigen::VectorXd& xv) {
        std::vector<Vector2> v(n);
        for (int j = 0; j < n; ++j)
            v[j] = Vector2(Complex(xv(4 * j), xv(4 * j + 1)),
                           Complex(xv(4 * j + 2), xv(4 * j + 3)));
        const double alpha = xv(n_unknowns - 1);
        Eigen::VectorXcd res(2 * n + 2);
        for (int j = 0; j < n; ++j) {
            const Complex mu_j = data.poles[j].mu;
            Vector2 m2 = Vector2(0, 1) + alpha * singular_structure(mu_j).col(1);
            for (int k = 0; k < n; ++k)
                m2 += (sigma1() * v[k].conjugate()) /
                      (mu_j - std::conj(data.poles[k].mu));
            const Vector2 r = v[j] - m2 / kappa_hat[j];
            res(2 * j) = r(0);
            res(2 * j + 1) = r(1);
        }
        Vector2 at0 = Vector2(0, I_UNIT * alpha);
        for (int k = 0; k < n; ++k) at0 -= v[k] / data.poles[k].mu;
        res(2 * n) = at0(0);
        res(2 * n + 1) = at0(1);
        return res;
    };

    Eigen::MatrixXd A(n_equations, n_unknowns);
    Eigen::VectorXd rhs(n_equations);
    const Eigen::VectorXcd base = residual_map(Eigen::VectorXd::Zero(n_unknowns));
    for (int c = 0; c < n_unknowns; ++c) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n_unknowns);
        e(c) = 1.0;
        const Eigen::VectorXcd col = residual_map(e) - base;
        for (int r = 0; r < 2 * n + 2; ++r) {
            A(2 * r, c) = col(r).real();
            A(2 * r + 1, c) = col(r).imag();
        }
    }
    for (int r = 0; r < 2 * n + 2; ++r) {
        rhs(2 * r) = -base(r).real();
        rhs(2 * r + 1) = -base(r).imag();
    }
    for (int r = 0; r < n_equations; ++r) {
        const double scale = std::max(A.row(r).cwiseAbs().maxCoeff(), std::abs(rhs(r)));
        if (scale > 0) {
            A.row(r) /= scale;
            rhs(r) /= scale;
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(sv(sv.size() - 1) > 1e-13 * sv(0)))
        throw SolverError("singular reflectionless system (condition ~ " +
                          std::to_string(cond) + ")");
    const Eigen::VectorXd xv = svd.solve(rhs);
    const double fit = (A * xv - rhs).norm();
    if (fit > 1e-8 * (1.0 + rhs.norm()))
        throw SolverError("inconsistent residue conditions (LS residual " +
                          std::to_string(fit) + ")");

    for (int j = 0; j < n; ++j) {
        sol.pole_mu.push_back(data.poles[j].mu);
        sol.pole_residue.push_back(Vector2(Complex(xv(4 * j), xv(4 * j + 1)),
                                           Complex(xv(4 * j + 2), xv(4 * j + 3))));
        sol.kappa_hat.push_back(kappa_hat[j]);
    }
    sol.alpha_plus = xv(n_unknowns - 1);
    sol.eval = extract_evaluation(sol);
    return sol;
}

}  // namespace

ReflectionlessSolution solve_reflectionless(const ReflectionlessData& data, double y,
                                            double t, Assembly assembly) {
    data.validate();
    Assembly mode = assembly;
    if (mode == Assembly::Auto)
        mode = data.all_on_unit_circle() ? Assembly::RealCircle : Assembly::ComplexGeneral;
    if (mode == Assembly::RealCircle && !data.all_on_unit_circle(1e-4))
        throw ConfigError("RealCircle assembly requires unit-circle poles");
    return mode == Assembly::RealCircle ? solve_circle(data, y, t)
                                        : solve_general(data, y, t);
}

RHEvaluation reflectionless_solve(const ReflectionlessData& data, double y, double t,
                                  Assembly assembly) {
    return solve_reflectionless(data, y, t, assembly).eval;
}

}  // namespace mch
