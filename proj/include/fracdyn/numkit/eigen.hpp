#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fracdyn/error.hpp"
#include "fracdyn/numkit/matrix.hpp"
#include "fracdyn/numkit/polynomial.hpp"

namespace fracdyn::numkit {

inline constexpr std::size_t max_eigen_dim = 8;
inline constexpr double default_rank_threshold = 1e-7;

/// Eigenvalues with multiplicity, sorted by (real, imag). Conjugate pairs are
/// made exactly symmetric.
[[nodiscard]] inline std::vector<Complex> eigenvalues(const Matrix& m) {
    if (m.dim() > max_eigen_dim) {
        throw DomainError("eigenvalues: dimension above supported maximum");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.to_eigen(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw DomainError("eigenvalues: QR iteration did not converge");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<Complex> out(ev.data(), ev.data() + ev.size());
    detail::enforce_conjugate_symmetry(out);
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

/// Numerical rank of (M - lambda I): singular values above threshold * max(1, sigma_max).
[[nodiscard]] inline std::size_t shifted_rank(const Matrix& m, Complex lambda,
                                              double threshold = default_rank_threshold) {
    Eigen::MatrixXcd a = m.to_eigen().cast<Complex>();
    a.diagonal().array() -= lambda;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    const double cut = threshold * std::max(1.0, s(0));
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut) ++r;
    }
    return r;
}

/// n - rank(M - lambda I).
[[nodiscard]] inline std::size_t geometric_multiplicity(const Matrix& m, Complex lambda,
                                                        double threshold = default_rank_threshold) {
    return m.dim() - shifted_rank(m, lambda, threshold);
}

}  // namespace fracdyn::numkit
