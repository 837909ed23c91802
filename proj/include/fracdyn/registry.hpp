#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/error.hpp"
#include "fracdyn/maxwell_bloch.hpp"
#include "fracdyn/numkit/mittag_leffler.hpp"
#include "fracdyn/system.hpp"

namespace fracdyn::registry {

inline constexpr const char* linear_decay_name = "linear-decay";
inline constexpr const char* zero_field_name = "zero-field";

/// Scalar test problem D^alpha x = -x.
[[nodiscard]] inline SystemDef linear_decay() {
    return SystemDef(
        linear_decay_name, 1, [](std::span<const double> x) { return State{-x[0]}; },
        [](std::span<const double>) { return Matrix{{-1.0}}; });
}

/// Exact solution x0 E_alpha(-t^alpha) of the linear decay problem.
[[nodiscard]] inline std::function<State(double)> linear_decay_solution(double alpha, double x0) {
    return [alpha, x0](double t) {
        if (t == 0.0) return State{x0};
        const auto e = numkit::mittag_leffler(alpha, -std::pow(t, alpha));
        if (!e.converged) throw DomainError("linear decay oracle: Mittag-Leffler evaluation did not converge");
        return State{x0 * e.value};
    };
}

/// f = 0 on R^n.
[[nodiscard]] inline SystemDef zero_field(std::size_t dim = 5) {
    return SystemDef(
        zero_field_name, dim, [dim](std::span<const double>) { return State(dim, 0.0); },
        [dim](std::span<const double>) { return Matrix(dim); });
}

[[nodiscard]] inline std::vector<std::string> names() {
    return {mb::registry_name, mb::controlled_registry_name, linear_decay_name, zero_field_name};
}

/// Builds a registered system. Gains (with a target) turn the Maxwell-Bloch
/// model into its controlled variant; the "-controlled" name requires both.
[[nodiscard]] inline SystemDef make_system(std::string_view name, const std::optional<std::vector<double>>& gains,
                                           const std::optional<mb::EquilibriumFamily>& target) {
    if (name == mb::registry_name || name == mb::controlled_registry_name) {
        const bool wants_control = name == mb::controlled_registry_name || gains.has_value();
        if (!wants_control) return mb::maxwell_bloch_system();
        if (!gains || !target) {
            throw DomainError("controlled Maxwell-Bloch model needs both gains and a target equilibrium");
        }
        return mb::maxwell_bloch_controlled(GainVector(*gains), *target);
    }
    if (gains) throw DomainError("system '" + std::string(name) + "' does not accept feedback gains");
    if (name == linear_decay_name) return linear_decay();
    if (name == zero_field_name) return zero_field();
    throw DomainError("unknown system '" + std::string(name) + "'");
}

}  // namespace fracdyn::registry
