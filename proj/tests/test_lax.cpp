#include <doctest.h>

#include <cmath>
#include <random>

#include "mch/lax.hpp"
#include "mch/reconstruction.hpp"
#include "mch/soliton_rh.hpp"
#include "mch/spectral_plane.hpp"

using namespace mch;

namespace {
std::mt19937 rng(24680);

Complex random_mu(double lo = 0.2, double hi = 3.0) {
    std::uniform_real_distribution<double> mod(lo, hi);
    std::uniform_real_distribution<double> arg(-M_PI, M_PI);
    return std::polar(mod(rng), arg(rng));
}

FieldSample random_sample() {
    std::uniform_real_distribution<double> d(-0.8, 0.8);
    return {d(rng), d(rng), 1.0 + 0.5 * d(rng)};
}
}  // namespace

TEST_CASE("coeff_U reference values and tracelessness") {
    Matrix2 u = coeff_U({0, 0, 1.0}, 2.0);
    CHECK(std::abs(u(0, 0) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(u(0, 1) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(u(1, 0) - Complex(-1.0)) < 1e-15);
    u = coeff_U({0, 0, 0.0}, 3.7);
    CHECK(std::abs(u(0, 1)) < 1e-15);
    for (int i = 0; i < 20; ++i) {
        const Matrix2 m = coeff_U(random_sample(), random_mu());
        CHECK(std::abs(m(0, 0) + m(1, 1)) < 1e-14);
    }
}

TEST_CASE("coeff_V zero-background form and hand-substituted entry") {
    const Complex lambda(1.3, -0.4);
    const Matrix2 v = coeff_V({0, 0, 1.0}, lambda);
    const Complex li = 1.0 / lambda;
    CHECK(std::abs(v(0, 0) - li * li) < 1e-15);
    CHECK(std::abs(v(0, 1) + li) < 1e-15);
    CHECK(std::abs(v(1, 0) - li) < 1e-15);
    CHECK(std::abs(v(1, 1) + li * li) < 1e-15);

    // u=0, u_x=1 (omega = -1), arbitrary m: entry (1,2) collapses to lambda m/2
    const double m = 1.37;
    const Matrix2 w = coeff_V({0, 1.0, m}, lambda);
    CHECK(std::abs(w(0, 1) - 0.5 * lambda * m) < 1e-14);

    for (int i = 0; i < 20; ++i) {
        const Matrix2 t = coeff_V(random_sample(), random_mu());
        CHECK(std::abs(t(0, 0) + t(1, 1)) < 1e-14);
    }
    CHECK_THROWS_AS((void)coeff_V({0, 0, 1}, Complex(0, 0)), DomainError);
}

TEST_CASE("coeff_U_hat vanishes on background and reduces at mu = i") {
    for (int i = 0; i < 10; ++i)
        CHECK(coeff_U_hat(1.0, random_mu()).cwiseAbs().maxCoeff() < 1e-15);

    // at mu = i the off-diagonal coefficient (mu^2+1) dies and the diagonal
    // part is -(m-1)/2 sigma3
    const double m = 1.62;
    const Matrix2 u = coeff_U_hat(m, Complex(0, 1));
    CHECK(std::abs(u(0, 1)) < 1e-15);
    CHECK(std::abs(u(0, 0) - Complex(-(m - 1.0) / 2.0)) < 1e-14);
    CHECK(std::abs(u(1, 1) - Complex((m - 1.0) / 2.0)) < 1e-14);

    CHECK_THROWS_AS((void)coeff_U_hat(1.2, Complex(1, 0)), DomainError);
    CHECK_THROWS_AS((void)coeff_U_hat(1.2, Complex(0, 0)), DomainError);
}

TEST_CASE("coeff_U_hat symmetry triple") {
    std::uniform_real_distribution<double> md(0.3, 2.5);
    for (int i = 0; i < 100; ++i) {
        const double m = md(rng);
        const Complex mu = random_mu();
        const Matrix2 u = coeff_U_hat(m, mu);
        const Matrix2 d1 = sigma1() * conj(coeff_U_hat(m, std::conj(mu))) * sigma1() - u;
        const Matrix2 d2 = sigma2() * coeff_U_hat(m, -mu) * sigma2() - u;
        const Matrix2 d3 = sigma1() * coeff_U_hat(m, 1.0 / mu) * sigma1() - u;
        const double scale = 1.0 + u.cwiseAbs().maxCoeff();
        CHECK(d1.cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK(d2.cwiseAbs().maxCoeff() <= 1e-12 * scale);
        CHECK(d3.cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("coeff_U_hat0 vanishes at mu = +-i and differs from U_hat by the exponent part") {
    std::uniform_real_distribution<double> md(0.3, 2.5);
    for (int i = 0; i < 20; ++i) {
        const double m = md(rng);
        CHECK(coeff_U_hat0(m, Complex(0, 1)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(coeff_U_hat0(m, Complex(0, -1)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(coeff_U_hat0(1.0, random_mu()).cwiseAbs().maxCoeff() < 1e-15);

        const Complex mu = random_mu();
        const Matrix2 diff = coeff_U_hat0(m, mu) - coeff_U_hat(m, mu);
        const Complex expected = -I_UNIT * (mu * mu - 1.0) * (m - 1.0) / (4.0 * mu);
        CHECK(std::abs(diff(0, 0) - expected) < 1e-13 * (1.0 + std::abs(expected)));
        CHECK(std::abs(diff(0, 1)) < 1e-14);
        CHECK(std::abs(diff(0, 0) + diff(1, 1)) < 1e-14);
    }
}

TEST_CASE("coeff_tilde_U at reference points") {
    CHECK(coeff_tilde_U(0.0, random_mu()).cwiseAbs().maxCoeff() < 1e-15);

    // brute-force complex arithmetic oracle for mu = i, f = 1
    {
        const Complex mu(0, 1);
        Matrix2 m1, m2, m3;
        m1 << 1, -1, 1, -1;
        m2 << 1, 1, -1, -1;
        m3 << 0, -1, 1, 0;
        const Matrix2 oracle =
            I_UNIT / (mu - 1.0) * m1 + I_UNIT / (mu + 1.0) * m2 + I_UNIT * m3;
        const Matrix2 got = coeff_tilde_U(1.0, mu);
        CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-15);
        // which evaluates to diag(1, -1)
        CHECK(std::abs(got(0, 0) - Complex(1.0)) < 1e-15);
        CHECK(std::abs(got(1, 1) - Complex(-1.0)) < 1e-15);
        CHECK(std::abs(got(0, 1)) < 1e-15);
        CHECK(std::abs(got(1, 0)) < 1e-15);
    }

    std::uniform_real_distribution<double> fd(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double f = fd(rng);
        const Complex mu = random_mu();
        const Matrix2 u = coeff_tilde_U(f, mu);
        CHECK(std::abs(u(0, 0) + u(1, 1)) < 1e-14);
        const Matrix2 d = sigma1() * conj(coeff_tilde_U(f, std::conj(mu))) * sigma1() - u;
        CHECK(d.cwiseAbs().maxCoeff() < 1e-13 * (1.0 + u.cwiseAbs().maxCoeff()));
    }
    CHECK_THROWS_AS((void)coeff_tilde_U(1.0, Complex(-1, 0)), DomainError);
}

TEST_CASE("coeff_tilde_V structure") {
    CHECK(coeff_tilde_V(0, 0, 0, random_mu()).cwiseAbs().maxCoeff() < 1e-15);

    // substitution of the coefficient map at u=0.1, u_x=0
    const TildeCoefficients tc = tilde_coefficients(0.1, 0.0, 1.0);
    CHECK(tc.q == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(tc.g1 == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(tc.g2 == doctest::Approx(0.1).epsilon(1e-15));

    // residue of entry (1,2) at mu = i equals g1
    const double q = 0.3, g1 = -0.7, g2 = 0.2;
    const Complex eps(3e-6, -2e-6);
    const Complex res = eps * coeff_tilde_V(q, g1, g2, Complex(0, 1) + eps)(0, 1);
    CHECK(std::abs(res - Complex(g1)) < 1e-5);
    for (int i = 0; i < 20; ++i) {
        const Matrix2 v = coeff_tilde_V(q, g1, g2, random_mu());
        CHECK(std::abs(v(0, 0) + v(1, 1)) < 1e-14);
    }
    CHECK_THROWS_AS((void)coeff_tilde_V(1, 1, 1, Complex(0, 1)), DomainError);
}

namespace {
FieldProfile constant_background(int n = 101) {
    FieldProfile p;
    for (int i = 0; i < n; ++i) {
        p.x.push_back(-10.0 + 20.0 * i / (n - 1));
        p.u.push_back(0.0);
        p.u_x.push_back(0.0);
        p.m.push_back(1.0);
    }
    p.tail_bound = 0.0;
    return p;
}
}  // namespace

TEST_CASE("zero-curvature residual: background, exact soliton, detector") {
    const std::vector<Complex> mus = {Complex(2.0, 0.0), Complex(0.3, 0.7),
                                      Complex(-1.3, 0.4)};
    SUBCASE("constant background is flat") {
        const FieldProfile p1 = constant_background(), p2 = constant_background();
        CHECK(zero_curvature_residual(p1, p2, mus, 1e-3) <= 1e-10);
    }
    SUBCASE("exact one-soliton passes at FD order") {
        const SolitonParams sp{M_PI / 5, 1.0};
        const double dt = 1e-3;
        auto profile_at = [&](double t) {
            std::vector<double> yg(120001), xg(60001);
            for (std::size_t i = 0; i < yg.size(); ++i)
                yg[i] = -45.0 + 90.0 * double(i) / double(yg.size() - 1);
            const ParametricSolution ps = soliton_profile(sp, t, yg);
            for (std::size_t i = 0; i < xg.size(); ++i)
                xg[i] = -30.0 + 60.0 * double(i) / double(xg.size() - 1);
            return resample_profile_to_x(ps, xg);
        };
        const FieldProfile p1 = profile_at(0.0), p2 = profile_at(dt);
        CHECK(zero_curvature_residual(p1, p2, mus, dt) <= 1e-5);

        SUBCASE("perturbed profile is detected") {
            FieldProfile bad = p1;
            for (double& u : bad.u) u *= 1.02;
            CHECK(zero_curvature_residual(bad, p2, mus, dt) > 1e-3);
        }
    }
    SUBCASE("grid mismatch is an error") {
        const FieldProfile p1 = constant_background(101), p2 = constant_background(102);
        CHECK_THROWS_AS((void)zero_curvature_residual(p1, p2, mus, 1e-3), ConfigError);
    }
}

TEST_CASE("RH solution drives the (y,t)-scale Lax pair") {
    // Psi = M e^{-p_hat sigma3} must satisfy Psi_y = (-i(mu^2-1)/(4mu) s3 + tU) Psi
    // and Psi_t = (2i(mu^2-1)mu/(mu^2+1)^2 s3 + tV) Psi with coefficients taken
    // from the recovered fields.
    const SolitonParams sp{0.55, 1.2};
    const double y = 0.37, t = 0.21;
    const Complex mu(0.45, 0.95);

    auto psi = [&](double yy, double tt) -> Matrix2 {
        const Complex ph = phase_p_hat(yy, tt, mu);
        Matrix2 e = Matrix2::Zero();
        e(0, 0) = std::exp(-ph);
        e(1, 1) = std::exp(ph);
        return full_M(sp, yy, tt, mu) * e;
    };
    const RHEvaluation ev = one_soliton_eval(sp, y, t);
    const RecoveredFields f = recover_fields(ev);
    const TildeCoefficients tc = tilde_coefficients(f.u, f.u_x, f.m);

    const double h = 1e-5;
    const Matrix2 dpsi_y =
        (8.0 * (psi(y + h / 2, t) - psi(y - h / 2, t)) - (psi(y + h, t) - psi(y - h, t))) /
        (6.0 * h);
    const Complex mu2 = mu * mu;
    Matrix2 rhs_y = (-I_UNIT * (mu2 - 1.0) / (4.0 * mu)) * sigma3() + coeff_tilde_U(tc.f, mu);
    const double defect_y = (dpsi_y - rhs_y * psi(y, t)).cwiseAbs().maxCoeff();
    CHECK(defect_y <= 1e-8 * psi(y, t).cwiseAbs().maxCoeff());

    const Matrix2 dpsi_t =
        (8.0 * (psi(y, t + h / 2) - psi(y, t - h / 2)) - (psi(y, t + h) - psi(y, t - h))) /
        (6.0 * h);
    const Complex onep = mu2 + 1.0;
    Matrix2 rhs_t = (2.0 * I_UNIT * (mu2 - 1.0) * mu / (onep * onep)) * sigma3() +
                    coeff_tilde_V(tc.q, tc.g1, tc.g2, mu);
    const double defect_t = (dpsi_t - rhs_t * psi(y, t)).cwiseAbs().maxCoeff();
    CHECK(defect_t <= 1e-8 * psi(y, t).cwiseAbs().maxCoeff());
}
