#include "mch/interp.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>
#include <gsl/gsl_spline.h>

namespace mch {

struct CubicInterpolant::Impl {
    std::vector<double> x, f;
    gsl_spline* spline = nullptr;
    gsl_interp_accel* accel = nullptr;

    ~Impl() {
        if (spline) gsl_spline_free(spline);
        if (accel) gsl_interp_accel_free(accel);
    }
};

namespace {
struct GslHandlerGuard {
    gsl_error_handler_t* old;
    GslHandlerGuard() : old(gsl_set_error_handler_off()) {}
    ~GslHandlerGuard() { gsl_set_error_handler(old); }
};
}  // namespace

CubicInterpolant::CubicInterpolant(std::vector<double> x, std::vector<double> f,
                                   Kind kind)
    : impl_(std::make_unique<Impl>()) {
    if (x.size() != f.size() || x.size() < 3)
        throw ConfigError("interpolant needs >= 3 matched samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw ConfigError("interpolation abscissae must increase strictly");
    impl_->x = std::move(x);
    impl_->f = std::move(f);
    GslHandlerGuard guard;
    const gsl_interp_type* type =
        kind == Kind::Natural ? gsl_interp_cspline : gsl_interp_steffen;
    impl_->spline = gsl_spline_alloc(type, impl_->x.size());
    impl_->accel = gsl_interp_accel_alloc();
    if (!impl_->spline || !impl_->accel) throw SolverError("gsl spline allocation failed");
    gsl_spline_init(impl_->spline, impl_->x.data(), impl_->f.data(), impl_->x.size());
}

CubicInterpolant::~CubicInterpolant() = default;
CubicInterpolant::CubicInterpolant(CubicInterpolant&&) noexcept = default;
CubicInterpolant& CubicInterpolant::operator=(CubicInterpolant&&) noexcept = default;

double CubicInterpolant::operator()(double x) const {
    if (x < impl_->x.front() || x > impl_->x.back())
        throw DomainError("interpolation point outside the sample range");
    GslHandlerGuard guard;
    return gsl_spline_eval(impl_->spline, x, impl_->accel);
}

double CubicInterpolant::integrate(double a, double b) const {
    if (a < impl_->x.front() || b > impl_->x.back() || a > b)
        throw DomainError("integration limits outside the sample range");
    GslHandlerGuard guard;
    return gsl_spline_eval_integ(impl_->spline, a, b, impl_->accel);
}

double CubicInterpolant::x_min() const { return impl_->x.front(); }
double CubicInterpolant::x_max() const { return impl_->x.back(); }

}  // namespace mch
