#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/error.hpp"
#include "fracdyn/format.hpp"
#include "fracdyn/maxwell_bloch.hpp"
#include "fracdyn/numkit/eigen.hpp"
#include "fracdyn/numkit/polynomial.hpp"
#include "fracdyn/system.hpp"

namespace fracdyn::stability {

using numkit::Complex;

enum class Verdict { AsymptoticallyStable, Stable, Unstable, Indeterminate };

[[nodiscard]] constexpr std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::AsymptoticallyStable: return "AsymptoticallyStable";
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

struct Tolerances {
    double zero_tol = numkit::default_zero_tol;  // |lambda| at or below this is a zero eigenvalue
    double arg_tol = 1e-9;                       // radians; |margin| at or below this is critical
    double rank_threshold = numkit::default_rank_threshold;
};

struct EquilibriumReport {
    State point;
    double alpha = 1.0;
    std::vector<Complex> eigenvalues;
    /// |arg lambda| - alpha pi / 2 per eigenvalue; empty for zero eigenvalues.
    std::vector<std::optional<double>> margins;
    Verdict verdict = Verdict::Indeterminate;
    std::size_t zero_eigs = 0;
    std::size_t critical_eigs = 0;
    /// Supremum of orders for which the eigenvalues satisfy the strict
    /// argument condition: min over eigenvalues of 2 |arg lambda| / pi
    /// (0 when a zero eigenvalue is present).
    double alpha_bound = 0.0;
};

/// Matignon argument test. Critical eigenvalues (|margin| <= arg_tol) need the
/// Jacobian to decide between Stable and Unstable through their geometric
/// multiplicity; without it the verdict is Indeterminate. Zero eigenvalues
/// always fail the strict inequality. When the Jacobian is supplied, a rank
/// deficiency of J also counts as zero eigenvalues (the smallest-modulus ones),
/// which protects against defective zero eigenvalues that the eigensolver
/// resolves only to sqrt(machine epsilon).
[[nodiscard]] inline EquilibriumReport matignon_classify(std::span<const Complex> eigs, FracOrder alpha,
                                                         const std::optional<Matrix>& jac = std::nullopt,
                                                         const Tolerances& tol = {}) {
    if (eigs.empty()) throw DomainError("matignon_classify: eigenvalue list is empty");
    EquilibriumReport rep;
    rep.alpha = alpha.value();
    rep.eigenvalues.assign(eigs.begin(), eigs.end());
    const std::size_t n = eigs.size();
    const double half_angle = alpha.value() * std::numbers::pi / 2.0;

    std::vector<bool> is_zero(n);
    for (std::size_t i = 0; i < n; ++i) is_zero[i] = std::abs(eigs[i]) <= tol.zero_tol;
    if (jac && jac->dim() == n) {
        const std::size_t nullity = numkit::geometric_multiplicity(*jac, Complex{}, tol.rank_threshold);
        std::size_t zeros = static_cast<std::size_t>(std::count(is_zero.begin(), is_zero.end(), true));
        if (nullity > zeros) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return std::abs(eigs[a]) < std::abs(eigs[b]); });
            for (std::size_t i : order) {
                if (zeros >= nullity) break;
                if (!is_zero[i]) {
                    is_zero[i] = true;
                    ++zeros;
                }
            }
        }
    }

    bool violation = false;
    std::vector<Complex> critical;
    rep.alpha_bound = std::numeric_limits<double>::infinity();
    rep.margins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_zero[i]) {
            ++rep.zero_eigs;
            violation = true;
            rep.alpha_bound = 0.0;
            continue;
        }
        const double a = std::abs(numkit::principal_arg(eigs[i]));
        const double margin = a - half_angle;
        rep.margins[i] = margin;
        rep.alpha_bound = std::min(rep.alpha_bound, 2.0 * a / std::numbers::pi);
        if (margin < -tol.arg_tol) {
            violation = true;
        } else if (margin <= tol.arg_tol) {
            critical.push_back(eigs[i]);
        }
    }
    rep.critical_eigs = critical.size();

    if (violation) {
        rep.verdict = Verdict::Unstable;
    } else if (critical.empty()) {
        rep.verdict = Verdict::AsymptoticallyStable;
    } else if (!jac) {
        rep.verdict = Verdict::Indeterminate;
    } else {
        const bool simple = std::all_of(critical.begin(), critical.end(), [&](Complex l) {
            return numkit::geometric_multiplicity(*jac, l, tol.rank_threshold) == 1;
        });
        rep.verdict = simple ? Verdict::Stable : Verdict::Unstable;
    }
    return rep;
}

/// Jacobian eigenvalues at an equilibrium and their Matignon verdict.
[[nodiscard]] inline EquilibriumReport classify_equilibrium(const SystemDef& sys, const State& x_e, FracOrder alpha,
                                                            const Tolerances& tol = {},
                                                            double equilibrium_tol = default_equilibrium_tol) {
    if (!is_equilibrium(sys, x_e, equilibrium_tol)) {
        throw DomainError("classify_equilibrium: point is not an equilibrium of '" + sys.name() + "'");
    }
    const Matrix j = sys.jacobian(x_e);
    const auto eigs = numkit::eigenvalues(j);
    EquilibriumReport rep = matignon_classify(eigs, alpha, j, tol);
    rep.point = x_e;
    return rep;
}

// --- Routh-Hurwitz path for the cubic factor at E1 --------------------------

struct CubicCoeffs {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double discriminant = 0.0;

    [[nodiscard]] static double discriminant_of(double a1, double a2, double a3) noexcept {
        return 18.0 * a1 * a2 * a3 + a1 * a1 * a2 * a2 - 4.0 * a3 * a1 * a1 * a1 - 4.0 * a2 * a2 * a2 -
               27.0 * a3 * a3;
    }

    [[nodiscard]] static CubicCoeffs make(double a1, double a2, double a3) noexcept {
        return {a1, a2, a3, discriminant_of(a1, a2, a3)};
    }

    /// lambda^3 + a1 lambda^2 + a2 lambda + a3.
    [[nodiscard]] numkit::Polynomial polynomial() const { return numkit::Polynomial({a3, a2, a1, 1.0}); }
};

/// Cubic factor P of the controlled Jacobian's characteristic polynomial at e1(m, n).
[[nodiscard]] inline CubicCoeffs cubic_from_gains(double k3, double k4, double k5, double m, double n) {
    if (m * m + n * n == 0.0) throw DomainError("cubic_from_gains: (m, n) must satisfy m^2 + n^2 != 0");
    const double r2 = m * m + n * n;
    return CubicCoeffs::make(k3 + k4 + k5, k3 * k4 + k3 * k5 + k4 * k5 + r2, k3 * k4 * k5 + k3 * n * n + k4 * m * m);
}

enum class RouthHurwitzClass { StableAllAlpha01, StableAlphaBelowTwoThirds, NotDecided };

[[nodiscard]] constexpr std::string_view to_string(RouthHurwitzClass c) noexcept {
    switch (c) {
        case RouthHurwitzClass::StableAllAlpha01: return "StableAllAlpha01";
        case RouthHurwitzClass::StableAlphaBelowTwoThirds: return "StableAlphaBelowTwoThirds";
        case RouthHurwitzClass::NotDecided: return "NotDecided";
    }
    return "NotDecided";
}

struct RouthHurwitzResult {
    RouthHurwitzClass cls = RouthHurwitzClass::NotDecided;
    /// The class guarantees stability at the requested order.
    bool covers_alpha = false;
};

/// Fractional Routh-Hurwitz classification of a cubic with positive coefficients.
[[nodiscard]] inline RouthHurwitzResult routh_hurwitz_cubic(const CubicCoeffs& c, FracOrder alpha) {
    if (!(c.a1 > 0.0 && c.a2 > 0.0 && c.a3 > 0.0)) {
        throw DomainError("routh_hurwitz_cubic: requires a1 > 0, a2 > 0, a3 > 0");
    }
    RouthHurwitzResult r;
    if (c.discriminant > 0.0 && c.a1 * c.a2 > c.a3) {
        r.cls = RouthHurwitzClass::StableAllAlpha01;
        r.covers_alpha = alpha.value() < 1.0;
    } else if (c.discriminant < 0.0) {
        r.cls = RouthHurwitzClass::StableAlphaBelowTwoThirds;
        r.covers_alpha = alpha.value() < 2.0 / 3.0;
    }
    return r;
}

// --- Gain conditions at E2 --------------------------------------------------

/// Diagnostics for the controlled system at e2(m). The five gain conditions
/// are evaluated twice, in their stated form and in the form the derivation
/// produces (the mixed-sign cases 3 and 4 are swapped between the two). Neither is authoritative; the verdict comes from the
/// closed-form eigenvalues through the Matignon test.
struct E2GainDiagnostics {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double u = 0.0;
    double v = 0.0;
    std::array<bool, 5> statement{};
    std::array<bool, 5> proof{};
    /// Positional labels (1-based) where statement and proof forms disagree.
    std::vector<int> disagreements;
    /// lambda1 = -k5, lambda2,3 from Delta1, lambda4,5 from Delta2.
    std::vector<Complex> eigenvalues;
    /// Matignon report at alpha = 1 on the closed-form eigenvalues.
    EquilibriumReport report;
    bool stable_all_alpha = false;
};

[[nodiscard]] inline E2GainDiagnostics e2_gain_condition(const GainVector& k, double m) {
    if (k.size() != mb::dim) throw DomainError("e2_gain_condition: five gains required");
    if (!k.all_positive()) throw DomainError("e2_gain_condition: all gains must be positive");
    if (!std::isfinite(m)) throw DomainError("e2_gain_condition: m must be finite");
    const double k1 = k[0], k2 = k[1], k3 = k[2], k4 = k[3], k5 = k[4];
    E2GainDiagnostics d;
    d.delta1 = (k1 - k3) * (k1 - k3) + 4.0 * m;
    d.delta2 = (k2 - k4) * (k2 - k4) + 4.0 * m;
    d.u = -0.25 * (k1 - k3) * (k1 - k3);
    d.v = -0.25 * (k2 - k4) * (k2 - k4);
    const double u = d.u, v = d.v;
    const double p1 = k1 * k3, p2 = k2 * k4;

    const bool c1 = std::abs(k1 - k3) == std::abs(k2 - k4) && m == u && m != 0.0;
    const bool c2 = std::max(u, v) < m && m < std::min(p1, p2);
    const bool c3_stmt = u < m && m < std::min(v, p1);
    const bool c4_stmt = v < m && m < std::min(u, p2);
    const bool c5 = m < std::min(u, v);
    d.statement = {c1, c2, c3_stmt, c4_stmt, c5};
    // Proof: case (3) is Delta1 < 0 < Delta2 giving v < m < min(u, k2 k4);
    // the symmetric case is u < m < min(v, k1 k3).
    d.proof = {c1, c2, c4_stmt, c3_stmt, c5};
    for (int i = 0; i < 5; ++i) {
        if (d.statement[i] != d.proof[i]) d.disagreements.push_back(i + 1);
    }

    auto pair = [](double s, double delta) {
        const Complex r = std::sqrt(Complex{delta, 0.0});
        return std::array<Complex, 2>{(Complex{-s, 0.0} + r) / 2.0, (Complex{-s, 0.0} - r) / 2.0};
    };
    const auto l23 = pair(k1 + k3, d.delta1);
    const auto l45 = pair(k2 + k4, d.delta2);
    d.eigenvalues = {Complex{-k5, 0.0}, l23[0], l23[1], l45[0], l45[1]};

    const State xe = mb::mb_equilibrium(mb::E2{m});
    d.report = matignon_classify(d.eigenvalues, FracOrder(1.0), mb::mb_controlled_jacobian(xe, k));
    d.report.point = xe;
    d.stable_all_alpha = d.report.verdict == Verdict::AsymptoticallyStable;
    return d;
}

// --- Serialization -----------------------------------------------------------

[[nodiscard]] inline std::string margin_text(const std::optional<double>& m) {
    return m ? fmt::real(*m) : std::string("undefined");
}

/// Line-oriented human-readable report.
[[nodiscard]] inline std::string to_text(const EquilibriumReport& r) {
    std::string s;
    s += "point: (" + fmt::vector(r.point, ',') + ")\n";
    s += "alpha: " + fmt::real(r.alpha) + "\n";
    s += "eigenvalues:\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        s += "  " + fmt::complex(r.eigenvalues[i]) + "  margin " + margin_text(r.margins[i]) + "\n";
    }
    s += "zero eigenvalues: " + std::to_string(r.zero_eigs) + "\n";
    s += "critical eigenvalues: " + std::to_string(r.critical_eigs) + "\n";
    s += "alpha bound: " + fmt::real(r.alpha_bound) + "\n";
    s += "verdict: " + std::string(to_string(r.verdict)) + "\n";
    return s;
}

/// Newline-delimited key=value document.
[[nodiscard]] inline std::string to_kv(const EquilibriumReport& r) {
    std::string s;
    s += "point=" + fmt::vector(r.point) + "\n";
    s += "alpha=" + fmt::real(r.alpha) + "\n";
    s += "eigenvalue_count=" + std::to_string(r.eigenvalues.size()) + "\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        const std::string k = "eigenvalue." + std::to_string(i);
        s += k + ".re=" + fmt::real(r.eigenvalues[i].real()) + "\n";
        s += k + ".im=" + fmt::real(r.eigenvalues[i].imag()) + "\n";
        s += k + ".margin=" + margin_text(r.margins[i]) + "\n";
    }
    s += "zero_eigenvalues=" + std::to_string(r.zero_eigs) + "\n";
    s += "critical_eigenvalues=" + std::to_string(r.critical_eigs) + "\n";
    s += "alpha_bound=" + fmt::real(r.alpha_bound) + "\n";
    s += "verdict=" + std::string(to_string(r.verdict)) + "\n";
    return s;
}

}  // namespace fracdyn::stability
