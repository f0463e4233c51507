#include "mch/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <boost/numeric/odeint.hpp>
#include <nlohmann/json.hpp>

#include "mch/interp.hpp"
#include "mch/lax.hpp"
#include "mch/numeric.hpp"
#include "mch/spectral_plane.hpp"

namespace mch {

namespace {

namespace odeint = boost::numeric::odeint;

using ColumnState = std::array<Complex, 2>;
using MatrixState = std::array<Complex, 4>;  // row-major [phi11 phi12 phi21 phi22]

// Shared per-profile integration context: spline of m and the trapezoid
// cumulative integral I(x_i) = int_{x_i}^{x_end} (m-1).
struct Workspace {
    const FieldProfile& profile;
    CubicInterpolant m_of_x;
    double rtol, atol;

    explicit Workspace(const FieldProfile& p, double rt = 1e-10, double at = 1e-12)
        : profile(p),
          m_of_x(p.x, p.m, CubicInterpolant::Kind::Natural),
          rtol(rt),
          atol(at) {
        p.validate();
    }

    double m_at(double x) const {
        const double lo = profile.x.front(), hi = profile.x.back();
        if (x <= lo) return profile.m.front();
        if (x >= hi) return profile.m.back();
        return m_of_x(x);
    }

    // int_x^{x_end} (m-1), through the spline's exact segment integrals
    double I_spline(double x) const {
        const double hi = profile.x.back();
        return m_of_x.integrate(x, hi) - (hi - x);
    }
};

// d/dx Phi = U_hat Phi - p_x [sigma3, Phi], with p_x = i (mu^2-1) m(x) / (4 mu).
// Columns evolve independently; column 0 picks up +2 p_x on its second entry,
// column 1 picks up -2 p_x on its first.
struct ColumnOde {
    const Workspace& ws;
    Complex mu;
    int column;

    void operator()(const ColumnState& phi, ColumnState& dphi, double x) const {
        const double m = ws.m_at(x);
        const Complex mu2 = mu * mu;
        const Complex off = I_UNIT * (mu2 + 1.0) * (m - 1.0) / (2.0 * (mu2 - 1.0));
        const Complex dia = -I_UNIT * mu * (m - 1.0) / (mu2 - 1.0);
        const Complex px = I_UNIT * (mu2 - 1.0) * m / (4.0 * mu);
        dphi[0] = dia * phi[0] + off * phi[1];
        dphi[1] = -off * phi[0] - dia * phi[1];
        if (column == 0)
            dphi[1] += 2.0 * px * phi[1];
        else
            dphi[0] -= 2.0 * px * phi[0];
    }
};

ColumnState integrate_column(const Workspace& ws, Complex mu, int column, double x_from,
                             double x_to, ColumnState phi) {
    if (x_from == x_to) return phi;
    ColumnOde ode{ws, mu, column};
    auto stepper = odeint::make_controlled(ws.atol, ws.rtol,
                                           odeint::runge_kutta_dopri5<ColumnState>());
    const double dt0 = (x_to - x_from) / 256.0;
    try {
        odeint::integrate_adaptive(stepper, ode, phi, x_from, x_to, dt0);
    } catch (const std::overflow_error&) {
        throw SolverError("Jost integration step size underflow at mu = (" +
                          format_g17(mu.real()) + "," + format_g17(mu.imag()) + ")");
    }
    if (!std::isfinite(std::abs(phi[0])) || !std::isfinite(std::abs(phi[1])))
        throw SolverError("Jost integration produced non-finite values");
    return phi;
}

// Jost column of the given side evaluated at x_eval. side=Plus starts from
// the right grid end, side=Minus from the left, both from the identity.
ColumnState jost_column(const Workspace& ws, Complex mu, Side side, int column,
                        double x_eval) {
    const double x0 = side == Side::Plus ? ws.profile.x.back() : ws.profile.x.front();
    ColumnState init{column == 0 ? 1.0 : 0.0, column == 0 ? 0.0 : 1.0};
    return integrate_column(ws, mu, column, x0, x_eval, init);
}

void require_scattering_mu(Complex mu) {
    require_mu_off_excluded_set(mu, true, true, false);
}

Complex a_at(const Workspace& ws, Complex mu, std::size_t match_index) {
    require_scattering_mu(mu);
    const double xm = ws.profile.x[match_index];
    const ColumnState minus1 = jost_column(ws, mu, Side::Minus, 0, xm);
    const ColumnState plus2 = jost_column(ws, mu, Side::Plus, 1, xm);
    return minus1[0] * plus2[1] - plus2[0] * minus1[1];
}

std::pair<Complex, Complex> ab_at(const Workspace& ws, Complex mu,
                                  std::size_t match_index) {
    require_scattering_mu(mu);
    const double xm = ws.profile.x[match_index];
    const ColumnState minus1 = jost_column(ws, mu, Side::Minus, 0, xm);
    const ColumnState minus2 = jost_column(ws, mu, Side::Minus, 1, xm);
    const ColumnState plus2 = jost_column(ws, mu, Side::Plus, 1, xm);
    const Complex a = minus1[0] * plus2[1] - plus2[0] * minus1[1];
    const Complex det_b = plus2[0] * minus2[1] - minus2[0] * plus2[1];
    const Complex p = phase_p(xm, 0.0, mu, ws.I_spline(xm));
    const Complex b = std::exp(2.0 * p) * det_b;
    return {a, b};
}

// ---------------------------------------------------------------------------
// Argument-principle zero search
// ---------------------------------------------------------------------------

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    Complex center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    bool contains(Complex z, double margin = 0.0) const {
        return z.real() >= re_lo - margin && z.real() <= re_hi + margin &&
               z.imag() >= im_lo - margin && z.imag() <= im_hi + margin;
    }
};

class CachedA {
  public:
    CachedA(const Workspace& ws, std::size_t match_index)
        : ws_(ws), match_(match_index) {}

    Complex operator()(Complex mu) const {
        const auto key = std::make_pair(mu.real(), mu.imag());
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Complex v = a_at(ws_, mu, match_);
        cache_.emplace(key, v);
        return v;
    }

  private:
    const Workspace& ws_;
    std::size_t match_;
    mutable std::map<std::pair<double, double>, Complex> cache_;
};

struct Winding {
    int count = 0;
    double min_abs = 0.0;
    bool reliable = false;
};

Winding boundary_winding(const CachedA& f, const Rect& r) {
    const Complex corners[5] = {{r.re_lo, r.im_lo},
                                {r.re_hi, r.im_lo},
                                {r.re_hi, r.im_hi},
                                {r.re_lo, r.im_hi},
                                {r.re_lo, r.im_lo}};
    double total = 0.0;
    double min_abs = std::numeric_limits<double>::max();
    bool depth_ok = true;

    const std::function<void(Complex, Complex, Complex, Complex, int)> refine =
        [&](Complex z0, Complex z1, Complex f0, Complex f1, int depth) {
            const double d = std::arg(f1 / f0);
            min_abs = std::min({min_abs, std::abs(f0), std::abs(f1)});
            if (std::abs(d) <= 0.8 && depth > 0) {
                total += d;
                return;
            }
            if (depth >= 16) {
                total += d;
                depth_ok = false;
                return;
            }
            const Complex zm = 0.5 * (z0 + z1);
            const Complex fm = f(zm);
            refine(z0, zm, f0, fm, depth + 1);
            refine(zm, z1, fm, f1, depth + 1);
        };

    for (int e = 0; e < 4; ++e) {
        const Complex z0 = corners[e], z1 = corners[e + 1];
        const int n0 = 8;
        Complex prev_z = z0, prev_f = f(z0);
        for (int k = 1; k <= n0; ++k) {
            const Complex zk = z0 + (z1 - z0) * (double(k) / n0);
            const Complex fk = f(zk);
            refine(prev_z, zk, prev_f, fk, 0);
            prev_z = zk;
            prev_f = fk;
        }
    }
    Winding w;
    w.count = int(std::lround(total / (2.0 * M_PI)));
    w.min_abs = min_abs;
    w.reliable = depth_ok && std::abs(total - 2.0 * M_PI * w.count) < 0.5 &&
                 min_abs > 1e-9;
    return w;
}

std::optional<Complex> newton_polish(const CachedA& f, Complex z0, double tol,
                                     const Rect& r) {
    Complex z = z0;
    for (int it = 0; it < 60; ++it) {
        const Complex fz = f(z);
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const Complex df = (f(z + h) - f(z - h)) / (2.0 * h);
        if (std::abs(df) == 0.0) return std::nullopt;
        const Complex step = fz / df;
        z -= step;
        if (!r.contains(z, 0.5 * (r.width() + r.height()))) return std::nullopt;
        if (std::abs(step) < 1e-13) break;
    }
    return std::abs(f(z)) < tol ? std::optional<Complex>(z) : std::nullopt;
}

void find_in_rect(const CachedA& f, const Rect& r, double tol, int depth,
                  std::vector<Complex>& out) {
    Winding w = boundary_winding(f, r);
    if (!w.reliable) {
        // nudge the rectangle a little; a zero or near-zero sits on the boundary
        Rect shifted = r;
        const double eps = 0.013 * std::max(r.width(), r.height());
        shifted.re_lo -= eps;
        shifted.re_hi += eps;
        shifted.im_hi += eps;
        shifted.im_lo = std::max(1e-4, r.im_lo - eps);
        w = boundary_winding(f, shifted);
        if (!w.reliable)
            throw SolverError("zero count unreliable on a search rectangle");
    }
    if (w.count == 0) return;
    if (w.count == 1) {
        if (auto z = newton_polish(f, r.center(), tol, r)) {
            out.push_back(*z);
            return;
        }
    }
    if (depth >= 24)
        throw SolverError("zero search failed to isolate zeros (count mismatch)");

    const bool split_re = r.width() >= r.height();
    for (double frac : {0.5, 0.46, 0.57}) {
        Rect a = r, b = r;
        if (split_re) {
            const double mid = r.re_lo + frac * r.width();
            a.re_hi = mid;
            b.re_lo = mid;
        } else {
            const double mid = r.im_lo + frac * r.height();
            a.im_hi = mid;
            b.im_lo = mid;
        }
        try {
            std::vector<Complex> got;
            find_in_rect(f, a, tol, depth + 1, got);
            find_in_rect(f, b, tol, depth + 1, got);
            out.insert(out.end(), got.begin(), got.end());
            return;
        } catch (const SolverError&) {
            if (frac == 0.57) throw;  // all split fractions exhausted
        }
    }
}

}  // namespace

std::vector<double> default_mu_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 16; ++k) {
        const double v = 1.06 * std::pow(8.0 / 1.06, double(k) / 15.0);
        grid.push_back(v);
        grid.push_back(1.0 / v);
        grid.push_back(-v);
        grid.push_back(-1.0 / v);
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

JostSolution jost_solve(const FieldProfile& profile, Complex mu, Side side,
                        double x_eval, double rtol, double atol) {
    require_scattering_mu(mu);
    if (x_eval < profile.x.front() || x_eval > profile.x.back())
        throw ConfigError("x_eval outside the profile grid");
    Workspace ws(profile, rtol, atol);
    const ColumnState c0 = jost_column(ws, mu, side, 0, x_eval);
    const ColumnState c1 = jost_column(ws, mu, side, 1, x_eval);
    Matrix2 value;
    value << c0[0], c1[0], c0[1], c1[1];
    return {value, side};
}

std::pair<Complex, Complex> scattering_ab(const FieldProfile& profile, Complex mu) {
    Workspace ws(profile);
    return ab_at(ws, mu, profile.size() / 2);
}

std::pair<Complex, Complex> scattering_ab_at(const FieldProfile& profile, Complex mu,
                                             std::size_t match_index) {
    if (match_index >= profile.size()) throw ConfigError("match index out of range");
    Workspace ws(profile);
    return ab_at(ws, mu, match_index);
}

Complex scattering_a(const FieldProfile& profile, Complex mu) {
    Workspace ws(profile);
    return a_at(ws, mu, profile.size() / 2);
}

std::vector<Complex> find_zeros_a(const FieldProfile& profile, const SearchRegion& region,
                                  double tol) {
    if (region.im_lo <= 0.0) throw ConfigError("search region must lie in C+");
    const double d1 = std::hypot(std::max(0.0, std::max(region.re_lo - 1.0,
                                                        1.0 - region.re_hi)),
                                 region.im_lo);
    const double dm1 = std::hypot(std::max(0.0, std::max(region.re_lo + 1.0,
                                                         -1.0 - region.re_hi)),
                                  region.im_lo);
    if (std::min(d1, dm1) < 0.05)
        throw ConfigError("search region must avoid disks of radius 0.05 around +-1");

    Workspace ws(profile);
    CachedA f(ws, profile.size() / 2);
    Rect rect{region.re_lo, region.re_hi, region.im_lo, region.im_hi};
    std::vector<Complex> raw;
    find_in_rect(f, rect, tol, 0, raw);

    // annulus restriction, dedupe, orbit completion
    std::vector<Complex> zeros;
    auto push_unique = [&](Complex z) {
        if (z.imag() <= 1e-6) return;
        const double r = std::abs(z);
        if (r < 0.1 || r > 10.0) return;
        for (const Complex& w : zeros)
            if (std::abs(w - z) < 1e-6) return;
        zeros.push_back(z);
    };
    for (const Complex& z : raw) push_unique(z);
    const std::size_t found = zeros.size();
    for (std::size_t i = 0; i < found; ++i)
        for (const Complex& w : symmetry_orbit(zeros[i], 1e-9)) push_unique(w);
    std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return zeros;
}

std::vector<PoleData> norming_constants(const FieldProfile& profile,
                                        const std::vector<Complex>& zeros) {
    Workspace ws(profile, 1e-11, 1e-13);
    const std::size_t n = profile.size();
    std::vector<PoleData> out;
    for (const Complex& mu_j : zeros) {
        // da/dmu at the zero: Richardson-refined central difference of the
        // analytic function a
        const std::size_t mid = n / 2;
        auto a_of = [&](Complex mu) { return a_at(ws, mu, mid); };
        const double h = 1e-4 * std::max(1.0, std::abs(mu_j));
        const Complex d1 = (a_of(mu_j + h) - a_of(mu_j - h)) / (2.0 * h);
        const Complex d2 = (a_of(mu_j + h / 2) - a_of(mu_j - h / 2)) / h;
        const Complex adot = (4.0 * d2 - d1) / 3.0;
        if (std::abs(adot) < 1e-8)
            throw SolverError("zero of a is not simple within tolerance");

        // delta_j from Phi+^(2) = delta_j e^{-2p} Phi-^(1) at 5 matching points
        // near the middle of the grid, fitted by least squares with each point
        // normalized to unit scale (the columns span a large dynamic range)
        const std::size_t idx[5] = {(42 * n) / 100, (46 * n) / 100, n / 2,
                                    (54 * n) / 100, (58 * n) / 100};
        Complex num = 0.0;
        double den = 0.0;
        std::vector<std::pair<ColumnState, ColumnState>> samples;
        for (std::size_t q : idx) {
            const double xq = profile.x[q];
            ColumnState w = jost_column(ws, mu_j, Side::Plus, 1, xq);
            ColumnState v = jost_column(ws, mu_j, Side::Minus, 0, xq);
            const Complex damp =
                std::exp(-2.0 * phase_p(xq, 0.0, mu_j, ws.I_spline(xq)));
            v[0] *= damp;
            v[1] *= damp;
            const double scale = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
            if (scale == 0.0) throw SolverError("degenerate Jost column at zero of a");
            for (auto* col : {&v, &w}) {
                (*col)[0] /= scale;
                (*col)[1] /= scale;
            }
            samples.push_back({v, w});
            num += std::conj(v[0]) * w[0] + std::conj(v[1]) * w[1];
            den += std::norm(v[0]) + std::norm(v[1]);
        }
        if (den == 0.0) throw SolverError("degenerate Jost columns at a zero of a");
        const Complex delta = num / den;
        double err2 = 0.0;
        for (const auto& [v, w] : samples)
            err2 += std::norm(w[0] - delta * v[0]) + std::norm(w[1] - delta * v[1]);
        const double residual = std::sqrt(err2 / double(samples.size()));
        if (!(residual < 1e-6))
            throw SolverError(
                "Jost columns not proportional at reported zero (residual " +
                format_g17(residual) + "; spurious zero?)");
        out.push_back({mu_j, adot * delta});
    }
    return out;
}

SingularityConstants singularity_constant(const FieldProfile& profile) {
    Workspace ws(profile);
    const std::size_t mid = profile.size() / 2;

    auto g = [&](double eps) {
        const Complex mu(1.0, eps);
        return -2.0 * I_UNIT * (mu - 1.0) * a_at(ws, mu, mid);
    };
    const Complex gamma_c = extrapolate_to_zero<Complex>(g, 1e-2, 3);
    const double gamma = gamma_c.real();

    SingularityConstants out;
    out.gamma = gamma;
    constexpr double kGammaLo = 1e-4, kGammaHi = 1e-2;
    if (std::abs(gamma) > kGammaHi) {
        out.generic = true;
        out.c = 0.0;
        return out;
    }
    if (std::abs(gamma) >= kGammaLo)
        throw SolverError("singularity constant in the ambiguous dead band: |gamma| = " +
                          format_g17(std::abs(gamma)));
    auto r_near_1 = [&](double eps) {
        const auto [a, b] = ab_at(ws, 1.0 + eps, mid);
        return b / std::conj(a);
    };
    const Complex r1 = extrapolate_to_zero<Complex>(r_near_1, 1e-2, 3);
    out.generic = false;
    out.c = 1.0 + r1.real();
    return out;
}

double SpectralData::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
        worst = std::max(worst,
                         std::abs(std::norm(a[i]) - std::norm(b[i]) - 1.0));
    return worst;
}

SpectralData compute_spectral_data(const FieldProfile& profile,
                                   const ScatterOptions& options) {
    Workspace ws(profile, options.ode_rtol, options.ode_atol);
    const std::size_t mid = profile.size() / 2;

    SpectralData data;
    data.mu_grid = options.mu_grid.empty() ? default_mu_grid() : options.mu_grid;
    data.ode_rtol = options.ode_rtol;
    data.ode_atol = options.ode_atol;
    data.zero_tol = options.zero_tol;
    data.grid_n = profile.size();
    data.x_min = profile.x.front();
    data.x_max = profile.x.back();

    for (double mu : data.mu_grid) {
        const auto [a, b] = ab_at(ws, mu, mid);
        data.a.push_back(a);
        data.b.push_back(b);
        data.r.push_back(b / std::conj(a));
    }
    if (options.with_zeros) {
        const std::vector<Complex> zeros =
            find_zeros_a(profile, options.region, options.zero_tol);
        data.zeros = norming_constants(profile, zeros);
    }
    const SingularityConstants sc = singularity_constant(profile);
    data.gamma = sc.gamma;
    data.c = sc.c;
    return data;
}

namespace {
nlohmann::json complex_pair(const Complex& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}
}  // namespace

void save_spectral_json(const SpectralData& data, const std::string& path) {
    nlohmann::json j;
    j["mu_grid"] = data.mu_grid;
    for (const Complex& z : data.a) j["a"].push_back(complex_pair(z));
    for (const Complex& z : data.b) j["b"].push_back(complex_pair(z));
    for (const Complex& z : data.r) j["r"].push_back(complex_pair(z));
    j["zeros"] = nlohmann::json::array();
    for (const PoleData& p : data.zeros)
        j["zeros"].push_back(
            {{"mu", complex_pair(p.mu)}, {"rho", complex_pair(p.rho)}});
    j["gamma"] = data.gamma;
    j["c"] = data.c;
    j["meta"] = {{"tolerances",
                  {{"ode_rtol", data.ode_rtol},
                   {"ode_atol", data.ode_atol},
                   {"zero_tol", data.zero_tol}}},
                 {"grid", {{"n", data.grid_n}, {"x_min", data.x_min},
                           {"x_max", data.x_max}}}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << '\n';
}

SpectralData load_spectral_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    SpectralData d;
    d.mu_grid = j.at("mu_grid").get<std::vector<double>>();
    auto read_c = [&](const char* key, std::vector<Complex>& dst) {
        for (const auto& e : j.at(key)) dst.push_back({e.at(0), e.at(1)});
    };
    read_c("a", d.a);
    read_c("b", d.b);
    read_c("r", d.r);
    for (const auto& p : j.at("zeros"))
        d.zeros.push_back({{p.at("mu").at(0), p.at("mu").at(1)},
                           {p.at("rho").at(0), p.at("rho").at(1)}});
    d.gamma = j.at("gamma");
    d.c = j.at("c");
    return d;
}

}  // namespace mch
