#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracdyn/error.hpp"

namespace fracdyn::numkit {

/// Dense square matrix, row-major storage.
class Matrix {
public:
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) {
            throw DomainError("Matrix: dimension must be at least 1");
        }
    }

    Matrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
        if (n == 0 || a_.size() != n * n) {
            throw DomainError("Matrix: entry count must equal n*n with n >= 1");
        }
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
        if (n_ == 0) {
            throw DomainError("Matrix: dimension must be at least 1");
        }
        a_.reserve(n_ * n_);
        for (const auto& r : rows) {
            if (r.size() != n_) {
                throw DomainError("Matrix: ragged initializer");
            }
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    [[nodiscard]] static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] static Matrix diagonal(std::span<const double> d) {
        Matrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return a_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const {
        check_dim(x.size());
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    [[nodiscard]] Matrix operator*(const Matrix& o) const {
        check_dim(o.n_);
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Matrix& operator-=(const Matrix& o) {
        check_dim(o.n_);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    Matrix& operator+=(const Matrix& o) {
        check_dim(o.n_);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    [[nodiscard]] friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    [[nodiscard]] friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }

    [[nodiscard]] double trace() const noexcept {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] double frobenius_norm() const noexcept {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    [[nodiscard]] bool operator==(const Matrix&) const = default;

    [[nodiscard]] Eigen::MatrixXd to_eigen() const {
        Eigen::MatrixXd m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

private:
    void check_dim(std::size_t n) const {
        if (n != n_) throw DomainError("Matrix: dimension mismatch");
    }

    std::size_t n_;
    std::vector<double> a_;
};

/// Largest singular value.
[[nodiscard]] inline double spectral_norm(const Matrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.to_eigen());
    return svd.singularValues()(0);
}

}  // namespace fracdyn::numkit
