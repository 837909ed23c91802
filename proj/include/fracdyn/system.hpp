#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracdyn/error.hpp"
#include "fracdyn/numkit/matrix.hpp"

namespace fracdyn {

using State = std::vector<double>;
using numkit::Matrix;

/// Order of the Caputo derivative, restricted to (0, 1].
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw DomainError("fractional order must lie in (0, 1]");
        }
    }

    [[nodiscard]] double value() const noexcept { return alpha_; }
    [[nodiscard]] bool is_classical() const noexcept { return alpha_ == 1.0; }
    [[nodiscard]] bool operator==(const FracOrder&) const = default;

private:
    double alpha_;
};

/// Diagonal feedback gains k_1..k_n, all non-negative.
class GainVector {
public:
    explicit GainVector(std::vector<double> k) : k_(std::move(k)) {
        for (double v : k_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw DomainError("feedback gains must be finite and non-negative");
            }
        }
    }

    [[nodiscard]] static GainVector uniform(std::size_t n, double k) { return GainVector(std::vector<double>(n, k)); }
    [[nodiscard]] static GainVector zero(std::size_t n) { return uniform(n, 0.0); }

    [[nodiscard]] std::size_t size() const noexcept { return k_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return k_; }
    [[nodiscard]] double operator[](std::size_t i) const { return k_.at(i); }
    [[nodiscard]] bool all_positive() const noexcept {
        return std::all_of(k_.begin(), k_.end(), [](double v) { return v > 0.0; });
    }
    [[nodiscard]] bool operator==(const GainVector&) const = default;

private:
    std::vector<double> k_;
};

/// Autonomous vector field x -> f(x) on R^n together with its Jacobian.
/// Immutable once built; copies share the underlying callables.
class SystemDef {
public:
    using Field = std::function<State(std::span<const double>)>;
    using Jacobian = std::function<Matrix(std::span<const double>)>;

    SystemDef(std::string name, std::size_t dim, Field field, Jacobian jacobian)
        : name_(std::move(name)), dim_(dim), field_(std::move(field)), jacobian_(std::move(jacobian)) {
        if (dim_ == 0) throw DomainError("SystemDef: dimension must be at least 1");
        if (!field_ || !jacobian_) throw DomainError("SystemDef: field and jacobian are required");
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] State field(std::span<const double> x) const {
        check(x.size());
        return field_(x);
    }

    [[nodiscard]] Matrix jacobian(std::span<const double> x) const {
        check(x.size());
        return jacobian_(x);
    }

private:
    void check(std::size_t n) const {
        if (n != dim_) {
            throw DomainError("system '" + name_ + "': expected state of dimension " + std::to_string(dim_) +
                              ", got " + std::to_string(n));
        }
    }

    std::string name_;
    std::size_t dim_;
    Field field_;
    Jacobian jacobian_;
};

inline constexpr double default_equilibrium_tol = 1e-10;

[[nodiscard]] inline double max_abs(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// True iff the sup-norm of f(x) does not exceed tol.
[[nodiscard]] inline bool is_equilibrium(const SystemDef& sys, std::span<const double> x,
                                         double tol = default_equilibrium_tol) {
    if (!(tol > 0.0)) throw DomainError("is_equilibrium: tolerance must be positive");
    return max_abs(sys.field(x)) <= tol;
}

/// A point verified to be an equilibrium of some system.
class EquilibriumPoint {
public:
    EquilibriumPoint(const SystemDef& sys, State x, double tol = default_equilibrium_tol) : x_(std::move(x)) {
        if (!is_equilibrium(sys, x_, tol)) {
            throw DomainError("point is not an equilibrium of '" + sys.name() + "'");
        }
    }

    [[nodiscard]] const State& coords() const noexcept { return x_; }
    [[nodiscard]] std::size_t dim() const noexcept { return x_.size(); }

private:
    State x_;
};

/// Feedback-controlled system f(x) - k (x - x_e). The equilibrium is checked
/// against sys with tolerance 1e-8.
[[nodiscard]] inline SystemDef controlled(const SystemDef& sys, const GainVector& k, const State& x_e) {
    if (k.size() != sys.dim() || x_e.size() != sys.dim()) {
        throw DomainError("controlled: gain and equilibrium dimensions must match the system");
    }
    if (!is_equilibrium(sys, x_e, 1e-8)) {
        throw DomainError("controlled: target is not an equilibrium of '" + sys.name() + "'");
    }
    auto field = [sys, k, x_e](std::span<const double> x) {
        State f = sys.field(x);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] -= k[i] * (x[i] - x_e[i]);
        return f;
    };
    auto jac = [sys, k](std::span<const double> x) {
        Matrix j = sys.jacobian(x);
        for (std::size_t i = 0; i < j.dim(); ++i) j(i, i) -= k[i];
        return j;
    };
    return SystemDef(sys.name() + "-controlled", sys.dim(), std::move(field), std::move(jac));
}

[[nodiscard]] inline SystemDef controlled(const SystemDef& sys, const GainVector& k, const EquilibriumPoint& x_e) {
    return controlled(sys, k, x_e.coords());
}

/// Central-difference Jacobian, used to audit analytic Jacobians.
[[nodiscard]] inline Matrix finite_difference_jacobian(const SystemDef& sys, std::span<const double> x,
                                                       double step = 1e-6) {
    const std::size_t n = sys.dim();
    Matrix j(n);
    State xp(x.begin(), x.end());
    for (std::size_t c = 0; c < n; ++c) {
        const double hc = step * std::max(1.0, std::abs(x[c]));
        xp[c] = x[c] + hc;
        const State fp = sys.field(xp);
        xp[c] = x[c] - hc;
        const State fm = sys.field(xp);
        xp[c] = x[c];
        for (std::size_t r = 0; r < n; ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * hc);
    }
    return j;
}

/// Largest entrywise deviation between analytic and central-difference
/// Jacobians, relative to max(1, |analytic entry|).
[[nodiscard]] inline double jacobian_consistency_error(const SystemDef& sys, std::span<const double> x) {
    const Matrix a = sys.jacobian(x);
    const Matrix fd = finite_difference_jacobian(sys, x);
    double worst = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) {
            worst = std::max(worst, std::abs(a(r, c) - fd(r, c)) / std::max(1.0, std::abs(a(r, c))));
        }
    return worst;
}

}  // namespace fracdyn
