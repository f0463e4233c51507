#pragma once

#include <memory>
#include <vector>

#include "mch/types.hpp"

namespace mch {

/// Cubic interpolation of samples (x_i, f_i), x strictly increasing.
/// Kind::Natural is the natural cubic spline (C2); Kind::Monotone is
/// Steffen's monotonicity-preserving cubic (C1, no overshoot).
class CubicInterpolant {
  public:
    enum class Kind { Natural, Monotone };

    CubicInterpolant(std::vector<double> x, std::vector<double> f,
                     Kind kind = Kind::Natural);
    ~CubicInterpolant();
    CubicInterpolant(CubicInterpolant&&) noexcept;
    CubicInterpolant& operator=(CubicInterpolant&&) noexcept;
    CubicInterpolant(const CubicInterpolant&) = delete;
    CubicInterpolant& operator=(const CubicInterpolant&) = delete;

    double operator()(double x) const;  // throws DomainError outside the range
    double integrate(double a, double b) const;  // integral of the interpolant
    double x_min() const;
    double x_max() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mch
