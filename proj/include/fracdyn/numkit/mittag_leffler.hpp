#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracdyn/error.hpp"

namespace fracdyn::numkit {

struct MittagLefflerValue {
    double value = 0.0;
    bool converged = false;
    /// Absolute error estimate of the evaluation route that was taken.
    double error_estimate = 0.0;
};

inline constexpr double mittag_leffler_max_abs_z = 20.0;

namespace detail {

/// Series sum_j z^j / Gamma(alpha j + 1) with Neumaier compensation, in long double.
inline MittagLefflerValue mittag_leffler_series(double alpha, double z, int max_terms = 2000) {
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double zl = z;
    for (int j = 0; j < max_terms; ++j) {
        const long double term = std::pow(zl, j) / std::tgamma(static_cast<long double>(alpha) * j + 1.0L);
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        // Terms decrease monotonically once past the peak, so the first
        // negligible term bounds the tail.
        if (j > 2 && std::fabs(term) <= 1e-18L * std::max(1.0L, std::fabs(sum + comp))) {
            const double v = static_cast<double>(sum + comp);
            return {v, std::isfinite(v), static_cast<double>(std::fabs(term))};
        }
    }
    return {static_cast<double>(sum + comp), false, std::numeric_limits<double>::infinity()};
}

/// E_alpha(-x) for 0 < alpha < 1 and x > 0 through the completely monotone
/// representation E_alpha(-t^alpha) = int_0^inf exp(-r t) K_alpha(r) dr with
/// K_alpha(r) = sin(alpha pi)/pi * r^(alpha-1) / (r^(2 alpha) + 2 r^alpha cos(alpha pi) + 1).
inline MittagLefflerValue mittag_leffler_negative_integral(double alpha, double x) {
    const double t = std::pow(x, 1.0 / alpha);
    const double s = std::sin(alpha * std::numbers::pi);
    const double c = std::cos(alpha * std::numbers::pi);
    auto kernel = [=](double r) {
        if (r <= 0.0) return 0.0;
        const double ra = std::pow(r, alpha);
        return std::exp(-r * t) * s / std::numbers::pi * (ra / r) / (ra * ra + 2.0 * ra * c + 1.0);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double err_lo = 0.0;
    double err_hi = 0.0;
    const double lo = ts.integrate(kernel, 0.0, 1.0, 1e-15, &err_lo);
    const double hi = es.integrate(kernel, 1.0, std::numeric_limits<double>::infinity(), 1e-15, &err_hi);
    const double value = lo + hi;
    const double err = std::abs(err_lo * lo) + std::abs(err_hi * hi);
    return {value, err <= 1e-11, err};
}

}  // namespace detail

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_j z^j / Gamma(alpha j + 1)
/// for alpha in (0, 1] and |z| <= 20.
///
/// Routes: alpha = 1 is exp(z); z >= -1 uses the compensated power series (no
/// destructive cancellation there); z < -1 with alpha < 1 uses the integral
/// representation, where the alternating series would lose all digits.
[[nodiscard]] inline MittagLefflerValue mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
    }
    if (!std::isfinite(z) || std::abs(z) > mittag_leffler_max_abs_z) {
        throw DomainError("mittag_leffler: |z| must not exceed 20");
    }
    if (alpha == 1.0) {
        return {std::exp(z), true, 0.0};
    }
    if (z >= -1.0) {
        return detail::mittag_leffler_series(alpha, z);
    }
    return detail::mittag_leffler_negative_integral(alpha, -z);
}

}  // namespace fracdyn::numkit
