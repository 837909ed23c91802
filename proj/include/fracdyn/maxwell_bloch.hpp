#pragma once

// Real five-dimensional Maxwell-Bloch system
//
//   D^alpha x1 = x3
//   D^alpha x2 = x4
//   D^alpha x3 = x1 x5
//   D^alpha x4 = x2 x5
//   D^alpha x5 = -(x1 x3 + x2 x4)
//
// (x1, x2): electric field, (x3, x4): polarization, x5: population inversion.
// This is the real form of the complex system with u = x1 + i x2,
// v = x3 + i x4, w = x5, and the field is equivariant under a common rotation
// of (x1, x2) and (x3, x4).

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <variant>

#include "fracdyn/error.hpp"
#include "fracdyn/format.hpp"
#include "fracdyn/numkit/matrix.hpp"
#include "fracdyn/system.hpp"

namespace fracdyn::mb {

inline constexpr std::size_t dim = 5;
inline constexpr const char* registry_name = "maxwell-bloch-5d";
inline constexpr const char* controlled_registry_name = "maxwell-bloch-5d-controlled";

using MBState = std::array<double, dim>;

[[nodiscard]] inline MBState to_mb_state(std::span<const double> x) {
    if (x.size() != dim) throw DomainError("Maxwell-Bloch: state must have 5 components");
    MBState s{};
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(x[i])) throw DomainError("Maxwell-Bloch: state components must be finite");
        s[i] = x[i];
    }
    return s;
}

[[nodiscard]] inline State mb_field(std::span<const double> x) {
    const MBState s = to_mb_state(x);
    return {s[2], s[3], s[0] * s[4], s[1] * s[4], -(s[0] * s[2] + s[1] * s[3])};
}

/// Constant matrices of the quadratic form f(x) = A x + x1 A1 x + x2 A2 x.
struct MBMatrices {
    Matrix A{dim};
    Matrix A1{dim};
    Matrix A2{dim};
};

[[nodiscard]] inline MBMatrices mb_matrices() {
    MBMatrices m;
    m.A(0, 2) = 1.0;
    m.A(1, 3) = 1.0;
    m.A1(2, 4) = 1.0;
    m.A1(4, 2) = -1.0;
    m.A2(3, 4) = 1.0;
    m.A2(4, 3) = -1.0;
    return m;
}

[[nodiscard]] inline State mb_field_matrix_form(std::span<const double> x) {
    static const MBMatrices m = mb_matrices();
    const MBState s = to_mb_state(x);
    State out = m.A.apply(s);
    const State y1 = m.A1.apply(s);
    const State y2 = m.A2.apply(s);
    for (std::size_t i = 0; i < dim; ++i) out[i] += s[0] * y1[i] + s[1] * y2[i];
    return out;
}

[[nodiscard]] inline Matrix mb_jacobian(std::span<const double> x) {
    const MBState s = to_mb_state(x);
    return Matrix{
        {0.0, 0.0, 1.0, 0.0, 0.0},
        {0.0, 0.0, 0.0, 1.0, 0.0},
        {s[4], 0.0, 0.0, 0.0, s[0]},
        {0.0, s[4], 0.0, 0.0, s[1]},
        {-s[2], -s[3], -s[0], -s[1], 0.0},
    };
}

[[nodiscard]] inline Matrix mb_controlled_jacobian(std::span<const double> x, const GainVector& k) {
    if (k.size() != dim) throw DomainError("Maxwell-Bloch: gain vector must have 5 components");
    Matrix j = mb_jacobian(x);
    for (std::size_t i = 0; i < dim; ++i) j(i, i) -= k[i];
    return j;
}

[[nodiscard]] inline SystemDef maxwell_bloch_system() {
    return SystemDef(registry_name, dim, [](std::span<const double> x) { return mb_field(x); },
                     [](std::span<const double> x) { return mb_jacobian(x); });
}

/// e1(m, n) = (m, n, 0, 0, 0) with m^2 + n^2 != 0.
struct E1 {
    double m = 0.0;
    double n = 0.0;
    bool operator==(const E1&) const = default;
};

/// e2(m) = (0, 0, 0, 0, m).
struct E2 {
    double m = 0.0;
    bool operator==(const E2&) const = default;
};

using EquilibriumFamily = std::variant<E1, E2>;

[[nodiscard]] inline State mb_equilibrium(const EquilibriumFamily& fam) {
    return std::visit(
        [](const auto& f) -> State {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, E1>) {
                if (!std::isfinite(f.m) || !std::isfinite(f.n)) throw DomainError("E1: parameters must be finite");
                if (f.m * f.m + f.n * f.n == 0.0) throw DomainError("E1: requires m^2 + n^2 != 0");
                return {f.m, f.n, 0.0, 0.0, 0.0};
            } else {
                if (!std::isfinite(f.m)) throw DomainError("E2: parameter must be finite");
                return {0.0, 0.0, 0.0, 0.0, f.m};
            }
        },
        fam);
}

/// "e1:m,n" or "e2:m"; inverse of parse_family.
[[nodiscard]] inline std::string describe(const EquilibriumFamily& fam) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, E1>) {
                return "e1:" + fmt::real(f.m) + "," + fmt::real(f.n);
            } else {
                return "e2:" + fmt::real(f.m);
            }
        },
        fam);
}

[[nodiscard]] inline EquilibriumFamily parse_family(std::string_view text) {
    if (text.size() < 4 || text[2] != ':' || (text.substr(0, 2) != "e1" && text.substr(0, 2) != "e2")) {
        throw DomainError("equilibrium must be written e1:m,n or e2:m, got '" + std::string(text) + "'");
    }
    const std::vector<double> p = fmt::parse_list(text.substr(3));
    if (text[1] == '1') {
        if (p.size() != 2) throw DomainError("e1 takes two parameters m,n");
        return E1{p[0], p[1]};
    }
    if (p.size() != 1) throw DomainError("e2 takes one parameter m");
    return E2{p[0]};
}

/// Membership in E1 or E2 (exact zeros in the structural slots).
[[nodiscard]] inline bool in_equilibrium_families(std::span<const double> x) {
    const MBState s = to_mb_state(x);
    const bool e1 = s[2] == 0.0 && s[3] == 0.0 && s[4] == 0.0 && (s[0] != 0.0 || s[1] != 0.0);
    const bool e2 = s[0] == 0.0 && s[1] == 0.0 && s[2] == 0.0 && s[3] == 0.0;
    return e1 || e2;
}

/// Controlled system around a family member.
[[nodiscard]] inline SystemDef maxwell_bloch_controlled(const GainVector& k, const EquilibriumFamily& target) {
    if (k.size() != dim) throw DomainError("Maxwell-Bloch: gain vector must have 5 components");
    SystemDef sys = controlled(maxwell_bloch_system(), k, mb_equilibrium(target));
    return SystemDef(controlled_registry_name, dim, [sys](std::span<const double> x) { return sys.field(x); },
                     [sys](std::span<const double> x) { return sys.jacobian(x); });
}

/// f(x) - k (x - x_e) for x_e in E1 or E2.
[[nodiscard]] inline State mb_controlled_field(std::span<const double> x, const GainVector& k, std::span<const double> x_e) {
    if (!in_equilibrium_families(x_e)) {
        throw DomainError("Maxwell-Bloch: controlled target must belong to E1 or E2");
    }
    return controlled(maxwell_bloch_system(), k, State(x_e.begin(), x_e.end())).field(x);
}

/// Lipschitz constant sqrt(2) (1 + 4 |x0| + 2 delta) of the field on the
/// neighbourhood D(x0, delta); |x0| is the Euclidean norm of the full state.
/// The sqrt(2) factor is the Frobenius norm of each of A, A1, A2.
[[nodiscard]] inline double mb_lipschitz_bound(std::span<const double> x0, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("Lipschitz bound: delta must be positive");
    const MBState s = to_mb_state(x0);
    double n2 = 0.0;
    for (double v : s) n2 += v * v;
    return std::numbers::sqrt2 * (1.0 + 4.0 * std::sqrt(n2) + 2.0 * delta);
}

/// Quantities conserved by the classical (alpha = 1) uncontrolled flow.
[[nodiscard]] inline double bloch_sphere_invariant(std::span<const double> x) {
    const MBState s = to_mb_state(x);
    return s[2] * s[2] + s[3] * s[3] + s[4] * s[4];
}

[[nodiscard]] inline double angular_invariant(std::span<const double> x) {
    const MBState s = to_mb_state(x);
    return s[1] * s[2] - s[0] * s[3];
}

}  // namespace fracdyn::mb
