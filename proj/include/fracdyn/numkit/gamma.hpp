#pragma once

#include <cmath>

#include "fracdyn/error.hpp"

namespace fracdyn::numkit {

/// Euler gamma function restricted to positive arguments.
[[nodiscard]] inline double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma: argument must be a positive finite number");
    }
    return std::tgamma(x);
}

}  // namespace fracdyn::numkit
