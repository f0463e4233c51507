#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "mch/numeric.hpp"
#include "mch/soliton_rh.hpp"
#include "mch/verification.hpp"

using namespace mch;

namespace {
std::mt19937 rng(1357911);

// y at which z(y,t) equals a requested value
double y_for_z(const SolitonParams& p, double z, double t) {
    const double s = std::sin(p.theta), c = std::cos(p.theta);
    return std::log(z / (2.0 * p.delta_hat * s)) / s + 2.0 * t / (c * c);
}

Complex random_mu_off_poles(const SolitonParams& p) {
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(-3.0, 3.0);
    const Complex w = std::exp(Complex(0, p.theta));
    while (true) {
        const Complex mu(re(rng), im(rng));
        bool ok = std::abs(mu) > 0.05;
        for (Complex pole : {Complex(1, 0), Complex(-1, 0), w, -std::conj(w),
                             std::conj(w), -w})
            ok = ok && std::abs(mu - pole) > 5e-2 && std::abs(1.0 / mu - pole) > 5e-2;
        if (ok) return mu;
    }
}
}  // namespace

TEST_CASE("z_of closed form and traveling-wave structure") {
    const SolitonParams p{0.9, -0.7};
    CHECK(z_of(p, 0.0, 0.0) ==
          doctest::Approx(2.0 * p.delta_hat * std::sin(p.theta)).epsilon(1e-15));

    // theta = pi/3 specialization of the exponent
    const SolitonParams q{M_PI / 3, 0.4};
    std::uniform_real_distribution<double> yy(-6.0, 6.0), tt(0.0, 1.5);
    for (int i = 0; i < 30; ++i) {
        const double y = yy(rng), t = tt(rng);
        const double expected = q.delta_hat * std::sqrt(3.0) *
                                std::exp(0.5 * std::sqrt(3.0) * y) *
                                std::exp(-4.0 * std::sqrt(3.0) * t);
        CHECK(z_of(q, y, t) == doctest::Approx(expected).epsilon(1e-12));
        // z depends on y - 2t/cos^2(theta) only
        const double shift = 1.7;
        const double c2 = std::cos(q.theta) * std::cos(q.theta);
        CHECK(z_of(q, y + 2.0 * shift / c2, t + shift) ==
              doctest::Approx(z_of(q, y, t)).epsilon(1e-12));
    }

    bool saturated = false;
    (void)z_of({0.5, 1.0}, 5000.0, 0.0, &saturated);
    CHECK(saturated);
    CHECK_THROWS_AS((void)z_of({1.8, 1.0}, 0, 0), ConfigError);   // theta range
    CHECK_THROWS_AS((void)z_of({0.5, 0.0}, 0, 0), ConfigError);   // zero delta
}

TEST_CASE("one-soliton evaluation at the hand-computed reference point") {
    // theta = pi/3, z = 1/2: kappa2 = -sqrt(3)/3, kappa1 = +sqrt(3)/3,
    // a1 = 2 + sqrt(3)   (direct substitution into the closed forms)
    const SolitonParams p{M_PI / 3, 1.0};
    const RHEvaluation e = one_soliton_eval(p, y_for_z(p, 0.5, 0.25), 0.25);
    CHECK(e.z == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.kappa2 == doctest::Approx(-std::sqrt(3.0) / 3.0).epsilon(1e-12));
    CHECK(e.kappa1 == doctest::Approx(std::sqrt(3.0) / 3.0).epsilon(1e-12));
    CHECK(e.a1 == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(e.alpha_plus == doctest::Approx(2.0 * e.kappa2).epsilon(1e-15));
    // a3/a2 = (1+s)/(1-s)
    const double s = std::sin(p.theta);
    CHECK(e.a3 / e.a2 == doctest::Approx((1.0 + s) / (1.0 - s)).epsilon(1e-12));
}

TEST_CASE("one-soliton evaluation limits and singular set") {
    const SolitonParams p{0.7, 1.0};
    const double s = std::sin(p.theta);
    // z -> 0+ : kappa2 -> 0, a1 -> (1+s)/(1-s)
    const RHEvaluation e = one_soliton_eval(p, y_for_z(p, 1e-12, 0.0), 0.0);
    CHECK(std::abs(e.kappa2) < 1e-10);
    CHECK(e.a1 == doctest::Approx((1.0 + s) / (1.0 - s)).epsilon(1e-9));

    // delta < 0 reaches the singular set z = -1 +- sin(theta)
    const SolitonParams q{0.7, -1.0};
    const double y_bad = y_for_z({0.7, 1.0}, 1.0 - s, 0.0);  // |z| = 1 - s, z < 0
    CHECK_THROWS_AS((void)one_soliton_eval(q, y_bad, 0.0), DomainError);
}

TEST_CASE("full_M normalization, value at i, and determinant") {
    const SolitonParams p{0.6, 1.0};
    const double y = 0.3, t = 0.2;

    const Matrix2 at_inf = full_M(p, y, t, Complex(2.0e8, 1.0e8));
    CHECK((at_inf - Matrix2::Identity()).cwiseAbs().maxCoeff() < 1e-7);

    const Matrix2 at_zero = full_M(p, y, t, Complex(0, 0));
    CHECK((at_zero - Matrix2::Identity()).cwiseAbs().maxCoeff() < 1e-14);

    const RHEvaluation e = one_soliton_eval(p, y, t);
    const Matrix2 at_i = full_M(p, y, t, Complex(0, 1));
    CHECK(std::abs(at_i(0, 0) - Complex(e.a1)) < 1e-12);
    CHECK(std::abs(at_i(1, 1) - Complex(1.0 / e.a1)) < 1e-12);
    CHECK(std::abs(at_i(0, 1)) + std::abs(at_i(1, 0)) < 1e-12);

    for (int i = 0; i < 20; ++i) {
        const Complex mu = random_mu_off_poles(p);
        CHECK(std::abs(full_M(p, y, t, mu).determinant() - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS((void)full_M(p, y, t, std::exp(Complex(0, p.theta))), DomainError);
}

TEST_CASE("full_M satisfies the RH invariant suite") {
    const SolitonParams p{1.1, -0.6};
    std::vector<Complex> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(random_mu_off_poles(p));
    auto M = [&](Complex mu) { return full_M(p, -1.2, 0.7, mu); };
    for (const ResidualReport& r : rh_invariant_suite(M, samples, 1e-10)) {
        INFO(r.name);
        CHECK(r.pass);
    }
}

TEST_CASE("residue conditions and singularity structure of the solved M") {
    const SolitonParams p{M_PI / 4, 1.0};
    const ReflectionlessData data = ReflectionlessData::one_soliton(p);
    const ReflectionlessSolution sol = solve_reflectionless(data, 0.4, 0.1);
    auto M = [&](Complex mu) { return sol.M(mu); };

    for (std::size_t j = 0; j < sol.pole_mu.size(); ++j)
        CHECK(residue_defect(M, sol.pole_mu[j], sol.kappa_hat[j]) <= 1e-9);
    CHECK(singularity_defect_at_one(M, sol.alpha_plus) <= 1e-9);

    // kappa_hat symmetry: conj(kappa) = -e^{2 i theta} kappa
    const Complex kh = sol.kappa_hat[0];
    CHECK(std::abs(std::conj(kh) + std::exp(Complex(0, 2.0 * p.theta)) * kh) <=
          1e-12 * std::abs(kh));
}

TEST_CASE("reflectionless solver reproduces the closed form") {
    const SolitonParams p{0.85, 1.3};
    const ReflectionlessData data = ReflectionlessData::one_soliton(p);
    std::uniform_real_distribution<double> yy(-12.0, 12.0), tt(0.0, 2.0);
    for (int i = 0; i < 25; ++i) {
        const double y = yy(rng), t = tt(rng);
        const RHEvaluation a = one_soliton_eval(p, y, t);
        const RHEvaluation b = reflectionless_solve(data, y, t);
        CHECK(std::abs(a.a1 - b.a1) <= 1e-10 * (1.0 + std::abs(a.a1)));
        CHECK(std::abs(a.a2 - b.a2) <= 1e-10);
        CHECK(std::abs(a.a3 - b.a3) <= 1e-10);
        CHECK(std::abs(a.eta - b.eta) <= 1e-10);
        CHECK(std::abs(a.alpha_plus - b.alpha_plus) <= 1e-10);
    }
}

TEST_CASE("empty pole set solves to the identity") {
    ReflectionlessData data;
    const RHEvaluation e = reflectionless_solve(data, 1.0, 1.0);
    CHECK(e.a1 == 1.0);
    CHECK(e.eta == 0.0);
    CHECK(e.alpha_plus == 0.0);
}

TEST_CASE("general complex assembly agrees with the circle assembly") {
    const SolitonParams p{0.5, 0.8};
    const ReflectionlessData data = ReflectionlessData::one_soliton(p);
    const RHEvaluation a = reflectionless_solve(data, 0.6, 0.3, Assembly::RealCircle);
    const RHEvaluation b = reflectionless_solve(data, 0.6, 0.3, Assembly::ComplexGeneral);
    CHECK(std::abs(a.a1 - b.a1) <= 1e-10);
    CHECK(std::abs(a.a2 - b.a2) <= 1e-10);
    CHECK(std::abs(a.a3 - b.a3) <= 1e-10);
    CHECK(std::abs(a.eta - b.eta) <= 1e-10);
    CHECK(std::abs(a.alpha_plus - b.alpha_plus) <= 1e-10);
}

TEST_CASE("two pole pairs: solved M passes every invariant") {
    ReflectionlessData data;
    {
        const auto d1 = ReflectionlessData::one_soliton({M_PI / 6, 1.0});
        const auto d2 = ReflectionlessData::one_soliton({M_PI / 4, 1.0});
        data.poles = d1.poles;
        data.poles.insert(data.poles.end(), d2.poles.begin(), d2.poles.end());
    }
    const ReflectionlessSolution sol = solve_reflectionless(data, 0.25, 0.15);
    auto M = [&](Complex mu) { return sol.M(mu); };

    std::vector<Complex> samples;
    const SolitonParams guard1{M_PI / 6, 1.0};
    while (samples.size() < 40) {
        const Complex mu = random_mu_off_poles(guard1);
        bool ok = true;
        const Complex w2 = std::exp(Complex(0, M_PI / 4));
        for (Complex pole : {w2, -std::conj(w2), std::conj(w2), -w2})
            ok = ok && std::abs(mu - pole) > 5e-2 && std::abs(1.0 / mu - pole) > 5e-2;
        if (ok) samples.push_back(mu);
    }
    for (const ResidualReport& r : rh_invariant_suite(M, samples, 1e-9)) {
        INFO(r.name);
        CHECK(r.pass);
    }
    for (std::size_t j = 0; j < sol.pole_mu.size(); ++j)
        CHECK(residue_defect(M, sol.pole_mu[j], sol.kappa_hat[j]) <= 1e-9);
    CHECK(singularity_defect_at_one(M, sol.alpha_plus) <= 1e-9);
}

TEST_CASE("off-circle quadruple through the complex assembly") {
    // No closed form exists here; the invariant suite is the correctness
    // statement. Pole set: full orbit of mu0 with the consistent rho chain.
    const Complex mu0 = std::polar(0.8, 1.0);
    const Complex rho0(0.3, 0.7);
    ReflectionlessData data;
    data.poles = {{mu0, rho0},
                  {-std::conj(mu0), std::conj(rho0)},
                  {-1.0 / mu0, -mu0 * mu0 * rho0},
                  {1.0 / std::conj(mu0), std::conj(-mu0 * mu0 * rho0)}};
    data.validate();
    CHECK(!data.all_on_unit_circle());

    const ReflectionlessSolution sol = solve_reflectionless(data, 0.2, 0.1);
    auto M = [&](Complex mu) { return sol.M(mu); };
    std::vector<Complex> samples;
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(-2.5, 2.5);
    while (samples.size() < 40) {
        const Complex mu(re(rng), im(rng));
        bool ok = std::abs(mu) > 0.05 && std::abs(mu - 1.0) > 0.05 &&
                  std::abs(mu + 1.0) > 0.05;
        for (const PoleData& pd : data.poles)
            ok = ok && std::abs(mu - pd.mu) > 5e-2 &&
                 std::abs(mu - std::conj(pd.mu)) > 5e-2 &&
                 std::abs(1.0 / mu - pd.mu) > 5e-2 &&
                 std::abs(1.0 / mu - std::conj(pd.mu)) > 5e-2;
        if (ok) samples.push_back(mu);
    }
    for (const ResidualReport& r : rh_invariant_suite(M, samples, 1e-9)) {
        INFO(r.name);
        CHECK(r.pass);
    }
    for (std::size_t j = 0; j < sol.pole_mu.size(); ++j)
        CHECK(residue_defect(M, sol.pole_mu[j], sol.kappa_hat[j]) <= 1e-9);
}

TEST_CASE("reflectionless data validation rejects broken inputs") {
    const SolitonParams p{0.8, 1.0};
    SUBCASE("c != 1") {
        ReflectionlessData data = ReflectionlessData::one_soliton(p);
        data.c = 0.0;
        CHECK_THROWS_AS((void)reflectionless_solve(data, 0, 0), ConfigError);
    }
    SUBCASE("orbit not closed") {
        ReflectionlessData data = ReflectionlessData::one_soliton(p);
        data.poles.pop_back();
        CHECK_THROWS_AS(data.validate(), ConfigError);
    }
    SUBCASE("rho inconsistent across the orbit") {
        ReflectionlessData data = ReflectionlessData::one_soliton(p);
        data.poles[1].rho *= 1.5;
        CHECK_THROWS_AS(data.validate(), ConfigError);
    }
    SUBCASE("pole in the lower half plane") {
        ReflectionlessData data = ReflectionlessData::one_soliton(p);
        data.poles[0].mu = std::conj(data.poles[0].mu);
        CHECK_THROWS_AS(data.validate(), ConfigError);
    }
}

TEST_CASE("reflectionless data JSON round trip") {
    const auto path = std::filesystem::temp_directory_path() / "mch_refl.json";
    const ReflectionlessData data = ReflectionlessData::one_soliton({0.9, -1.4});
    data.save_json(path);
    const ReflectionlessData back = ReflectionlessData::load_json(path);
    REQUIRE(back.poles.size() == data.poles.size());
    for (std::size_t i = 0; i < data.poles.size(); ++i) {
        CHECK(std::abs(back.poles[i].mu - data.poles[i].mu) < 1e-15);
        CHECK(std::abs(back.poles[i].rho - data.poles[i].rho) < 1e-15);
    }
    CHECK(back.c == data.c);
    std::remove(path.c_str());
}
