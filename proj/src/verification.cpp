#include "mch/verification.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mch/numeric.hpp"

namespace mch {

std::string to_json_line(const ResidualReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["grid_meta"] = r.grid_meta;
    return j.dump();
}

void save_reports_jsonl(std::span<const ResidualReport> reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    for (const auto& r : reports) out << to_json_line(r) << '\n';
}

namespace {

std::string grid_meta(std::span<const double> y_grid, double t, double h) {
    return "y[" + format_g17(y_grid.front()) + ":" + format_g17(y_grid.back()) + ":" +
           std::to_string(y_grid.size()) + "] t=" + format_g17(t) +
           " h=" + format_g17(h);
}

ResidualReport finish(std::string name, double max_residual, double tolerance,
                      std::string meta) {
    return {std::move(name), max_residual, tolerance, max_residual <= tolerance,
            std::move(meta)};
}

// Pointwise residual with on-demand Richardson refinement: `plain` uses the
// h-step difference; if it exceeds half the tolerance, `refined` (the
// Richardson-extrapolated difference) decides.
template <typename Plain, typename Refined>
double max_refined_residual(std::size_t n, double tolerance, Plain&& plain,
                            Refined&& refined) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = plain(i);
        if (!(r <= 0.5 * tolerance)) r = refined(i);
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace

ResidualReport pde_residual_y(const YTSampler& source, std::span<const double> y_grid,
                              double t, double h, double tolerance) {
    auto inv_m = [&](double y, double tau) { return 1.0 / source(y, tau).m; };
    auto residual_with = [&](std::size_t i, bool richardson) {
        const double y = y_grid[i];
        auto f = [&](double tau) { return inv_m(y, tau); };
        const double d = richardson ? central_diff_richardson(f, t, h)
                                    : central_diff(f, t, h);
        return std::abs(d - 2.0 * source(y, t).u_x);
    };
    const double worst = max_refined_residual(
        y_grid.size(), tolerance, [&](std::size_t i) { return residual_with(i, false); },
        [&](std::size_t i) { return residual_with(i, true); });
    return finish("pde_residual_y", worst, tolerance, grid_meta(y_grid, t, h));
}

ResidualReport constitutive_residual(const YTSampler& source,
                                     std::span<const double> y_grid, double t, double h,
                                     double tolerance) {
    auto residual_with = [&](std::size_t i, bool richardson) {
        const double y = y_grid[i];
        auto ux = [&](double yy) { return source(yy, t).u_x; };
        const double d = richardson ? central_diff_richardson(ux, y, h)
                                    : central_diff(ux, y, h);
        const FieldsYT f = source(y, t);
        return std::abs(f.m - f.u + d * f.m - 1.0);
    };
    const double worst = max_refined_residual(
        y_grid.size(), tolerance, [&](std::size_t i) { return residual_with(i, false); },
        [&](std::size_t i) { return residual_with(i, true); });
    return finish("constitutive_residual", worst, tolerance, grid_meta(y_grid, t, h));
}

std::vector<ResidualReport> rel_residuals(const YTSampler& source,
                                          std::span<const double> y_grid, double t,
                                          double h, double tolerance) {
    auto beta1 = [&](double y, double tau) {
        const FieldsYT f = source(y, tau);
        return -(f.m - 1.0) / (2.0 * f.m);
    };
    auto gammas = [&](double y, double tau) {
        const FieldsYT f = source(y, tau);
        return std::pair<double, double>{-f.u - f.u_x, f.u - f.u_x};
    };

    const std::string meta = grid_meta(y_grid, t, h);
    std::vector<ResidualReport> out;

    auto rel_a = [&](std::size_t i, bool rich) {
        const double y = y_grid[i];
        auto b1 = [&](double tau) { return beta1(y, tau); };
        const double d = rich ? central_diff_richardson(b1, t, h) : central_diff(b1, t, h);
        const auto [g1, g2] = gammas(y, t);
        return std::abs(d + 0.5 * (g1 + g2));
    };
    out.push_back(finish("rel_a", max_refined_residual(
                                      y_grid.size(), tolerance,
                                      [&](std::size_t i) { return rel_a(i, false); },
                                      [&](std::size_t i) { return rel_a(i, true); }),
                         tolerance, meta));

    double worst_b = 0.0;
    for (double y : y_grid) {
        const FieldsYT f = source(y, t);
        const auto [g1, g2] = gammas(y, t);
        worst_b = std::max(worst_b, std::abs(f.u - 0.5 * (g2 - g1)));
    }
    out.push_back(finish("rel_b", worst_b, tolerance, meta));

    auto rel_c = [&](std::size_t i, bool rich) {
        const double y = y_grid[i];
        auto gdiff = [&](double yy) {
            const auto [g1, g2] = gammas(yy, t);
            return g1 - g2;
        };
        const double d =
            rich ? central_diff_richardson(gdiff, y, h) : central_diff(gdiff, y, h);
        const auto [g1, g2] = gammas(y, t);
        return std::abs(d - (1.0 + 2.0 * beta1(y, t)) * (g1 + g2));
    };
    out.push_back(finish("rel_c", max_refined_residual(
                                      y_grid.size(), tolerance,
                                      [&](std::size_t i) { return rel_c(i, false); },
                                      [&](std::size_t i) { return rel_c(i, true); }),
                         tolerance, meta));

    auto rel_d = [&](std::size_t i, bool rich) {
        const double y = y_grid[i];
        auto gsum = [&](double yy) {
            const auto [g1, g2] = gammas(yy, t);
            return g1 + g2;
        };
        const double d =
            rich ? central_diff_richardson(gsum, y, h) : central_diff(gsum, y, h);
        const auto [g1, g2] = gammas(y, t);
        const double b1 = beta1(y, t);
        return std::abs(d + 4.0 * b1 - (1.0 + 2.0 * b1) * (g1 - g2));
    };
    out.push_back(finish("rel_d", max_refined_residual(
                                      y_grid.size(), tolerance,
                                      [&](std::size_t i) { return rel_d(i, false); },
                                      [&](std::size_t i) { return rel_d(i, true); }),
                         tolerance, meta));
    return out;
}

std::vector<ResidualReport> rh_invariant_suite(const MuEvaluator& M,
                                               std::span<const Complex> mu_samples,
                                               double tolerance) {
    const std::string meta = std::to_string(mu_samples.size()) + " mu samples";
    double det_defect = 0.0, sym_conj = 0.0, sym_neg = 0.0, sym_inv = 0.0;
    const Matrix2 s1 = sigma1(), s2 = sigma2();
    for (const Complex& mu : mu_samples) {
        const Matrix2 m = M(mu);
        det_defect = std::max(det_defect, std::abs(m.determinant() - 1.0));
        sym_conj = std::max(
            sym_conj,
            ((s1 * conj(M(std::conj(mu))) * s1) - m).cwiseAbs().maxCoeff());
        sym_neg = std::max(sym_neg, ((s2 * M(-mu) * s2) - m).cwiseAbs().maxCoeff());
        sym_inv = std::max(sym_inv, ((s1 * M(1.0 / mu) * s1) - m).cwiseAbs().maxCoeff());
    }
    const Matrix2 mi = M(Complex(0, 1));
    const double offdiag = std::abs(mi(0, 1)) + std::abs(mi(1, 0));
    const double at0 = (M(Complex(0, 0)) - Matrix2::Identity()).cwiseAbs().maxCoeff();

    std::vector<ResidualReport> out;
    out.push_back(finish("rh_det_minus_one", det_defect, tolerance, meta));
    out.push_back(finish("rh_sym_conjugate", sym_conj, tolerance, meta));
    out.push_back(finish("rh_sym_negation", sym_neg, tolerance, meta));
    out.push_back(finish("rh_sym_inversion", sym_inv, tolerance, meta));
    out.push_back(finish("rh_M_at_i_offdiagonal", offdiag, tolerance, meta));
    out.push_back(finish("rh_M_at_zero_minus_identity", at0, tolerance, meta));
    return out;
}

double residue_defect(const MuEvaluator& M, Complex mu_j, Complex kappa_hat,
                      double radius) {
    // One circle of samples gives both sides: mean((mu-mu_j) M) has the
    // column-1 residue, and the plain mean recovers the regular column 2 at
    // the pole (Cauchy integral, spectrally accurate for trapezoid).
    const int n = 64;
    Matrix2 weighted = Matrix2::Zero(), plain = Matrix2::Zero();
    for (int k = 0; k < n; ++k) {
        const Complex w = radius * std::exp(Complex(0, 2.0 * M_PI * k / n));
        const Matrix2 m = M(mu_j + w);
        weighted += m * w;
        plain += m;
    }
    weighted /= double(n);
    plain /= double(n);
    const Vector2 expected = plain.col(1) / kappa_hat;
    return (weighted.col(0) - expected).cwiseAbs().maxCoeff();
}

double singularity_defect_at_one(const MuEvaluator& M, double alpha_plus) {
    auto probe = [&](double eps) -> Matrix2 {
        const Complex mu(1.0, eps);
        return (mu - 1.0) * M(mu);
    };
    const Matrix2 lim = extrapolate_to_zero<Matrix2>(probe, 1e-2, 6);
    Matrix2 expected;
    expected << -1, 1, -1, 1;
    expected *= Complex(0, 0.5 * alpha_plus);
    return (lim - expected).cwiseAbs().maxCoeff();
}

ResidualReport pde_residual_x(const FieldProfile& at_t, const FieldProfile& at_t_plus_dt,
                              double dt, double tolerance, std::span<const int> mask) {
    const std::size_t n = at_t.size();
    if (at_t_plus_dt.size() != n) throw ConfigError("profile grids differ in length");
    const double dx = at_t.spacing();

    auto omega_m = [](const FieldProfile& p, std::size_t i) {
        const double om = p.u[i] * p.u[i] - p.u_x[i] * p.u_x[i] + 2.0 * p.u[i];
        return om * p.m[i];
    };
    std::vector<double> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) {
        w1[i] = omega_m(at_t, i);
        w2[i] = omega_m(at_t_plus_dt, i);
    }
    auto skip = [&](std::size_t i) {
        if (mask.empty()) return false;
        for (std::size_t j = (i >= 2 ? i - 2 : 0); j <= std::min(i + 2, n - 1); ++j)
            if (mask[j]) return true;
        return false;
    };

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (skip(i)) continue;
        const double mt = (at_t_plus_dt.m[i] - at_t.m[i]) / dt;
        const double wx =
            0.5 * ((w1[i + 1] - w1[i - 1]) + (w2[i + 1] - w2[i - 1])) / (2.0 * dx);
        worst = std::max(worst, std::abs(mt + wx));
    }
    const std::string meta = "x[" + format_g17(at_t.x.front()) + ":" +
                             format_g17(at_t.x.back()) + ":" + std::to_string(n) +
                             "] dt=" + format_g17(dt);
    return finish("pde_residual_x", worst, tolerance, meta);
}

}  // namespace mch
