#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "fracdyn/numkit/polynomial.hpp"

namespace fracdyn::testing {

using Complex = std::complex<double>;

/// Seed for sampled properties; FRACDYN_SEED overrides the default.
inline std::uint64_t seed(std::uint64_t fallback = 20240611) {
    if (const char* s = std::getenv("FRACDYN_SEED")) return std::strtoull(s, nullptr, 10);
    return fallback;
}

class Rng {
public:
    explicit Rng(std::uint64_t salt = 0) : g_(seed() ^ (salt * 0x9e3779b97f4a7c15ULL)) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
    std::vector<double> vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 g_;
};

/// Greedy nearest matching of two multisets; returns the worst pair distance,
/// or infinity when the sizes differ.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (const Complex& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

/// Independent Mittag-Leffler oracle: 200 terms of the defining series in
/// long double with Neumaier compensation, each term built from lgamma.
/// Only used for |z| small enough that the series does not cancel badly.
inline long double ml_series_oracle(long double alpha, long double z) {
    long double sum = 0.0L, comp = 0.0L;
    for (int k = 0; k < 200; ++k) {
        const long double mag = k == 0 ? 0.0L : k * std::log(std::fabs(z)) - std::lgamma(alpha * k + 1.0L);
        long double term = k == 0 ? 1.0L : std::exp(mag);
        if (z < 0 && (k % 2 == 1)) term = -term;
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace fracdyn::testing
