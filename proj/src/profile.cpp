#include "mch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fftw3.h>

#include "mch/numeric.hpp"

namespace mch {

void FieldProfile::validate() const {
    const std::size_t n = x.size();
    if (n < 3) throw ConfigError("profile needs at least 3 grid points");
    if (u.size() != n || u_x.size() != n || m.size() != n)
        throw ConfigError("profile column lengths differ");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw ConfigError("x grid must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i)
        if (!(m[i] > 0.0)) throw ConfigError("m must be strictly positive");
    const double tail = std::max(std::abs(m.front() - 1.0), std::abs(m.back() - 1.0));
    if (tail > std::max(tail_bound, 1e-3))
        throw ConfigError("m does not settle to the unit background at the grid ends");
}

bool FieldProfile::uniform(double rel_tol) const {
    if (x.size() < 2) return false;
    const double h = (x.back() - x.front()) / double(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i] - x[i - 1] - h) > rel_tol * std::abs(h)) return false;
    return true;
}

double FieldProfile::spacing() const {
    if (!uniform()) throw ConfigError("grid is not uniform");
    return (x.back() - x.front()) / double(x.size() - 1);
}

namespace {

// 4th-order centered first and second derivatives on a uniform grid.
// Near the ends the stencil falls back to 2nd order; profiles decay there.
void derivatives_fd(const std::vector<double>& x, const std::vector<double>& f,
                    std::vector<double>& d1, std::vector<double>& d2) {
    const std::size_t n = x.size();
    const double h = (x.back() - x.front()) / double(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h)
            throw ConfigError("finite-difference scheme requires a uniform grid");
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d1[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
        d2[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) /
                (12 * h * h);
    }
    for (std::size_t i : {std::size_t(1), n - 2}) {
        d1[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        d2[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
    }
    d1[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
    d1[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
    d2[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
    d2[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / (h * h);
}

// Fourier differentiation, treating the truncated domain as one period.
// Valid only when the field has decayed to ~0 well inside the grid ends.
void derivatives_spectral(const std::vector<double>& x, const std::vector<double>& f,
                          std::vector<double>& d1, std::vector<double>& d2) {
    const std::size_t n = x.size();
    const double h = (x.back() - x.front()) / double(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h)
            throw ConfigError("spectral scheme requires a uniform grid");
    const double period = h * double(n);

    std::vector<double> in(f);
    std::vector<fftw_complex> spec(n / 2 + 1);
    fftw_plan fwd =
        fftw_plan_dft_r2c_1d(int(n), in.data(), spec.data(), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const std::size_t nspec = n / 2 + 1;
    std::vector<fftw_complex> s1(nspec), s2(nspec);
    for (std::size_t k = 0; k < nspec; ++k) {
        const double kappa = 2.0 * M_PI * double(k) / period;
        // d/dx -> i*kappa, d2/dx2 -> -kappa^2 (Nyquist mode dropped for d1)
        const double re = spec[k][0] / double(n), im = spec[k][1] / double(n);
        const bool nyquist = (n % 2 == 0) && (k == n / 2);
        s1[k][0] = nyquist ? 0.0 : -kappa * im;
        s1[k][1] = nyquist ? 0.0 : kappa * re;
        s2[k][0] = -kappa * kappa * re;
        s2[k][1] = -kappa * kappa * im;
    }
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    fftw_plan b1 = fftw_plan_dft_c2r_1d(int(n), s1.data(), d1.data(), FFTW_ESTIMATE);
    fftw_execute(b1);
    fftw_destroy_plan(b1);
    fftw_plan b2 = fftw_plan_dft_c2r_1d(int(n), s2.data(), d2.data(), FFTW_ESTIMATE);
    fftw_execute(b2);
    fftw_destroy_plan(b2);
}

}  // namespace

FieldProfile profile_from_u(std::vector<double> x_grid, std::vector<double> u_values,
                            DiffScheme scheme, const std::vector<double>* u_x_supplied,
                            const std::vector<double>* u_xx_supplied, double decay_tol) {
    const std::size_t n = x_grid.size();
    if (n < 5 || u_values.size() != n) throw ConfigError("bad profile input arrays");
    if (std::max(std::abs(u_values.front()), std::abs(u_values.back())) > decay_tol)
        throw ConfigError("u does not decay at the grid ends (background not subtracted?)");

    std::vector<double> d1, d2;
    switch (scheme) {
        case DiffScheme::AnalyticSupplied:
            if (!u_x_supplied || !u_xx_supplied || u_x_supplied->size() != n ||
                u_xx_supplied->size() != n)
                throw ConfigError("analytic scheme requires supplied u_x and u_xx");
            d1 = *u_x_supplied;
            d2 = *u_xx_supplied;
            break;
        case DiffScheme::Spectral:
            derivatives_spectral(x_grid, u_values, d1, d2);
            break;
        case DiffScheme::FiniteDifference:
            derivatives_fd(x_grid, u_values, d1, d2);
            break;
    }

    FieldProfile p;
    p.x = std::move(x_grid);
    p.u = std::move(u_values);
    p.u_x = std::move(d1);
    p.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.m[i] = p.u[i] - d2[i] + 1.0;
        if (!(p.m[i] > 0.0))
            throw ConfigError("m = u - u_xx + 1 is non-positive at x = " +
                              format_g17(p.x[i]));
    }
    p.tail_bound = std::max(std::abs(p.m.front() - 1.0), std::abs(p.m.back() - 1.0));
    p.validate();
    return p;
}

FieldProfile load_profile_csv(const std::string& path, DiffScheme scheme_if_missing) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file: " + path);

    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        if (header.empty()) {
            while (std::getline(ss, cell, ',')) header.push_back(cell);
            cols.resize(header.size());
            continue;
        }
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= cols.size()) throw ConfigError("ragged CSV row in " + path);
            cols[c++].push_back(std::stod(cell));
        }
        if (c != cols.size()) throw ConfigError("ragged CSV row in " + path);
    }
    auto col = [&](const std::string& name) -> const std::vector<double>* {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return &cols[i];
        return nullptr;
    };
    const auto* xc = col("x");
    const auto* uc = col("u");
    if (!xc || !uc) throw ConfigError("profile CSV needs at least x,u columns");
    const auto* uxc = col("u_x");
    const auto* mc = col("m");

    if (uxc && mc) {
        FieldProfile p;
        p.x = *xc;
        p.u = *uc;
        p.u_x = *uxc;
        p.m = *mc;
        p.tail_bound = std::max(std::abs(p.m.front() - 1.0), std::abs(p.m.back() - 1.0));
        p.validate();
        return p;
    }
    FieldProfile p = profile_from_u(*xc, *uc, scheme_if_missing);
    if (uxc) p.u_x = *uxc;
    return p;
}

void save_profile_csv(const FieldProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write profile file: " + path);
    out << "x,u,u_x,m\n";
    for (std::size_t i = 0; i < profile.size(); ++i)
        out << format_g17(profile.x[i]) << ',' << format_g17(profile.u[i]) << ','
            << format_g17(profile.u_x[i]) << ',' << format_g17(profile.m[i]) << '\n';
}

std::vector<double> cumulative_integral_from_right(const FieldProfile& profile) {
    const std::size_t n = profile.size();
    std::vector<double> acc(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double dx = profile.x[i + 1] - profile.x[i];
        acc[i] = acc[i + 1] +
                 0.5 * dx * ((profile.m[i] - 1.0) + (profile.m[i + 1] - 1.0));
    }
    return acc;
}

}  // namespace mch
