#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "fracdyn/error.hpp"
#include "fracdyn/numkit/matrix.hpp"

namespace fracdyn::numkit {

using Complex = std::complex<double>;

inline constexpr double default_zero_tol = 1e-9;

/// Argument in (-pi, pi]. A negative-zero imaginary part is read as +0 so that
/// negative reals map to +pi rather than -pi.
[[nodiscard]] inline double principal_arg(Complex z) noexcept {
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return std::atan2(im, z.real());
}

/// Argument of z, or nothing when |z| <= zero_tol.
[[nodiscard]] inline std::optional<double> checked_arg(Complex z, double zero_tol = default_zero_tol) noexcept {
    if (std::abs(z) <= zero_tol) return std::nullopt;
    return principal_arg(z);
}

/// Real polynomial with coefficients in ascending degree order.
class Polynomial {
public:
    static constexpr std::size_t max_degree = 8;

    Polynomial(std::initializer_list<double> ascending) : Polynomial(std::vector<double>(ascending)) {}

    explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
        if (c_.empty()) {
            throw DomainError("Polynomial: zero polynomial");
        }
        if (c_.size() - 1 > max_degree) {
            throw DomainError("Polynomial: degree above supported maximum");
        }
        for (double v : c_) {
            if (!std::isfinite(v)) throw DomainError("Polynomial: non-finite coefficient");
        }
    }

    /// Monic polynomial with the given roots. Conjugate pairs give real coefficients;
    /// any residual imaginary parts are dropped.
    [[nodiscard]] static Polynomial from_roots(std::span<const Complex> roots) {
        std::vector<Complex> c{Complex{1.0, 0.0}};
        for (const Complex& r : roots) {
            std::vector<Complex> next(c.size() + 1, Complex{});
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        std::vector<double> re(c.size());
        std::transform(c.begin(), c.end(), re.begin(), [](Complex z) { return z.real(); });
        return Polynomial(std::move(re));
    }

    [[nodiscard]] std::size_t degree() const noexcept { return c_.size() - 1; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return c_; }
    [[nodiscard]] double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
    [[nodiscard]] double leading() const noexcept { return c_.back(); }

    [[nodiscard]] double max_abs_coeff() const noexcept {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    template <class T>
    [[nodiscard]] T operator()(T x) const {
        T acc{c_.back()};
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + T{c_[i]};
        return acc;
    }

    [[nodiscard]] Polynomial derivative() const {
        if (degree() == 0) throw DomainError("Polynomial: derivative of a constant is the zero polynomial");
        std::vector<double> d(degree());
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
        return Polynomial(std::move(d));
    }

    [[nodiscard]] Polynomial scaled(double s) const {
        std::vector<double> c = c_;
        for (double& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    [[nodiscard]] bool operator==(const Polynomial&) const = default;

private:
    std::vector<double> c_;
};

namespace detail {

inline void horner_with_derivative(std::span<const double> monic, Complex z, Complex& p, Complex& dp) {
    p = Complex{monic.back()};
    dp = Complex{};
    for (std::size_t i = monic.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + monic[i];
    }
}

/// Pairs near-conjugate roots and replaces each pair with an exact conjugate
/// pair; near-real singletons become real.
inline void enforce_conjugate_symmetry(std::vector<Complex>& roots) {
    const std::size_t n = roots.size();
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        done[i] = true;
        const Complex target = std::conj(roots[i]);
        std::size_t best = n;
        double best_d = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            const double d = std::abs(roots[j] - target);
            if (best == n || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        const double scale = 1.0 + std::abs(roots[i]);
        const bool near_real = std::abs(roots[i].imag()) <= 1e-12 * scale;
        if (best != n && !near_real && best_d <= 1e-6 * scale) {
            const double re = 0.5 * (roots[i].real() + roots[best].real());
            const double im = 0.5 * (std::abs(roots[i].imag()) + std::abs(roots[best].imag()));
            roots[i] = Complex{re, im};
            roots[best] = Complex{re, -im};
            done[best] = true;
        } else if (near_real) {
            roots[i] = Complex{roots[i].real(), 0.0};
        }
    }
}

}  // namespace detail

/// All complex roots of p with multiplicity, via Aberth-Ehrlich simultaneous
/// iteration followed by Newton polishing. Exact zero roots are deflated first.
/// Output is sorted by (real, imag).
[[nodiscard]] inline std::vector<Complex> poly_roots(const Polynomial& p) {
    if (p.degree() < 1) {
        throw DomainError("poly_roots: degree must be at least 1");
    }
    std::vector<Complex> roots;
    std::vector<double> c(p.coeffs().begin(), p.coeffs().end());

    std::size_t zeros = 0;
    while (zeros < c.size() - 1 && c[zeros] == 0.0) ++zeros;
    roots.assign(zeros, Complex{});
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));

    const std::size_t n = c.size() - 1;
    if (n > 0) {
        const double lead = c.back();
        for (double& v : c) v /= lead;

        // Fujiwara-type bound for the initial circle.
        double radius = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            radius = std::max(radius, std::pow(std::abs(c[n - k]), 1.0 / static_cast<double>(k)));
        }
        radius = radius > 0.0 ? radius : 1.0;

        std::vector<Complex> z(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
            z[k] = std::polar(radius, theta);
        }

        constexpr int max_iter = 1000;
        for (int it = 0; it < max_iter; ++it) {
            double max_step = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Complex pv, dpv;
                detail::horner_with_derivative(c, z[i], pv, dpv);
                if (pv == Complex{}) continue;
                const Complex ratio = pv / dpv;
                Complex sum{};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) sum += 1.0 / (z[i] - z[j]);
                }
                const Complex w = ratio / (1.0 - ratio * sum);
                if (std::isfinite(w.real()) && std::isfinite(w.imag())) {
                    z[i] -= w;
                    max_step = std::max(max_step, std::abs(w) / (1.0 + std::abs(z[i])));
                }
            }
            if (max_step < 1e-16) break;
        }

        // Newton polish against the monic polynomial; keep only improvements.
        for (Complex& r : z) {
            for (int k = 0; k < 3; ++k) {
                Complex pv, dpv;
                detail::horner_with_derivative(c, r, pv, dpv);
                if (dpv == Complex{}) break;
                const Complex cand = r - pv / dpv;
                Complex pc, dpc;
                detail::horner_with_derivative(c, cand, pc, dpc);
                if (std::abs(pc) < std::abs(pv)) {
                    r = cand;
                } else {
                    break;
                }
            }
        }
        roots.insert(roots.end(), z.begin(), z.end());
    }

    detail::enforce_conjugate_symmetry(roots);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

/// Monic characteristic polynomial det(lambda*I - M) by Faddeev-LeVerrier.
[[nodiscard]] inline Polynomial characteristic_polynomial(const Matrix& m) {
    const std::size_t n = m.dim();
    if (n > Polynomial::max_degree) {
        throw DomainError("characteristic_polynomial: dimension above supported maximum");
    }
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    Matrix mk(n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = M * M_{k-1} + c_{n-k+1} I
        Matrix next = m * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        mk = std::move(next);
        c[n - k] = -(m * mk).trace() / static_cast<double>(k);
    }
    return Polynomial(std::move(c));
}

}  // namespace fracdyn::numkit
