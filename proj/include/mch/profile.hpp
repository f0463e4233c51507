#pragma once

#include <string>
#include <vector>

#include "mch/types.hpp"

namespace mch {

/// Sampled field data at one time on a strictly increasing x-grid, with
/// constant-background tails: m -> 1 at both ends within tail_bound.
/// m must be strictly positive so that the y-change of variables stays
/// monotone (x_y = 1/m).
struct FieldProfile {
    std::vector<double> x;
    std::vector<double> u;    // u-tilde (background already subtracted)
    std::vector<double> u_x;
    std::vector<double> m;    // m-tilde = u - u_xx + 1
    double tail_bound = 0.0;  // max |m - 1| outside the grid (truncation bound)

    std::size_t size() const { return x.size(); }
    void validate() const;  // throws ConfigError on any broken invariant
    bool uniform(double rel_tol = 1e-9) const;
    double spacing() const;  // grid step; requires uniform()
};

enum class DiffScheme { AnalyticSupplied, Spectral, FiniteDifference };

/// Build a FieldProfile from samples of u alone (or with supplied
/// derivatives). m = u - u_xx + 1 via the selected scheme. Throws on
/// non-positive m or insufficient decay of |u| at the grid ends.
FieldProfile profile_from_u(std::vector<double> x_grid, std::vector<double> u_values,
                            DiffScheme scheme,
                            const std::vector<double>* u_x_supplied = nullptr,
                            const std::vector<double>* u_xx_supplied = nullptr,
                            double decay_tol = 1e-6);

/// CSV with header `x,u,u_x,m`; the u_x and m columns are optional and are
/// computed with `scheme_if_missing` when absent. Lines starting with `#`
/// are comments.
FieldProfile load_profile_csv(const std::string& path,
                              DiffScheme scheme_if_missing = DiffScheme::FiniteDifference);

void save_profile_csv(const FieldProfile& profile, const std::string& path);

/// Trapezoid cumulative integral I(x_i) = int_{x_i}^{x_end} (m - 1) dxi on the
/// profile grid (tail beyond the grid is dropped; tail_bound certifies it).
std::vector<double> cumulative_integral_from_right(const FieldProfile& profile);

}  // namespace mch
