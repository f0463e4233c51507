#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mch {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

inline constexpr Complex I_UNIT{0.0, 1.0};

inline Matrix2 sigma1() {
    Matrix2 s;
    s << 0, 1, 1, 0;
    return s;
}

inline Matrix2 sigma2() {
    Matrix2 s;
    s << 0, Complex(0, -1), Complex(0, 1), 0;
    return s;
}

inline Matrix2 sigma3() {
    Matrix2 s;
    s << 1, 0, 0, -1;
    return s;
}

/// Entry-wise complex conjugate (Eigen's conjugate() as a plain matrix).
inline Matrix2 conj(const Matrix2& m) { return m.conjugate(); }

// Error taxonomy. CLI maps these onto exit codes.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResampleError : std::runtime_error {
    int monotonicity_intervals = 0;
    explicit ResampleError(const std::string& what, int intervals = 0)
        : std::runtime_error(what), monotonicity_intervals(intervals) {}
};

}  // namespace mch
