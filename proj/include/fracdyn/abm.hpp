#pragma once

// Fractional Adams-Bashforth-Moulton predictor-corrector for Caputo IVPs
//
//   D^alpha x(t) = f(x(t)),  x(0) = x0,  0 < alpha <= 1,
//
// discretising the equivalent Volterra equation
//
//   x(t) = x0 + 1/Gamma(alpha) int_0^t (t - s)^(alpha - 1) f(x(s)) ds
//
// on the uniform grid t_n = n h. With F[j] = f(x[j]):
//
//   predictor  x_p[n+1] = x0 + h^alpha / (alpha Gamma(alpha)) sum_{j=0..n} b[j,n+1] F[j]
//   corrector  x[n+1]   = x0 + h^alpha / Gamma(alpha + 2)
//                              (sum_{j=0..n} a[j,n+1] F[j] + f(x_p[n+1]))
//
//   b[j,n+1] = (n + 1 - j)^alpha - (n - j)^alpha
//   a[0,n+1] = n^(alpha+1) - (n - alpha)(n + 1)^alpha
//   a[j,n+1] = (n - j + 2)^(alpha+1) + (n - j)^(alpha+1) - 2 (n - j + 1)^(alpha+1),  1 <= j <= n
//
// Every history term is kept (O(N^2) work); f is evaluated once per accepted
// state and once per predictor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracdyn/error.hpp"
#include "fracdyn/numkit/gamma.hpp"
#include "fracdyn/system.hpp"

namespace fracdyn::abm {

/// Constant term of the predictor line. `WithX0` is the standard scheme;
/// `AsPrinted` drops x0 from the predictor only (the corrector stays anchored).
enum class PredictorAnchor { WithX0, AsPrinted };

inline constexpr std::size_t max_steps = 1'000'000;

struct SolverConfig {
    FracOrder alpha{1.0};
    double h = 0.01;
    std::size_t steps = 1;
    State x0;
    PredictorAnchor anchor = PredictorAnchor::WithX0;

    [[nodiscard]] double horizon() const noexcept { return h * static_cast<double>(steps); }

    void validate(std::size_t dim) const {
        if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("solver: step size must be positive and finite");
        if (steps < 1 || steps > max_steps) throw DomainError("solver: step count must lie in [1, 1e6]");
        if (x0.size() != dim) throw DomainError("solver: initial state has the wrong dimension");
        for (double v : x0) {
            if (!std::isfinite(v)) throw DomainError("solver: initial state must be finite");
        }
    }
};

struct Trajectory {
    double h = 0.0;
    std::vector<double> times;
    std::vector<State> states;
    /// predictor_states[n - 1] holds x_p[n]; empty unless requested.
    std::vector<State> predictor_states;

    [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
    [[nodiscard]] std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
    [[nodiscard]] const State& back() const { return states.back(); }
};

namespace detail {

inline void check_indices(std::size_t j, std::size_t n) {
    if (j > n) throw DomainError("ABM weight: index j must satisfy 0 <= j <= n");
}

/// Pairwise summation of term(lo..hi-1).
template <class Term>
double pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
    if (hi - lo <= 32) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

}  // namespace detail

/// b[j, n+1].
[[nodiscard]] inline double predictor_weight(std::size_t j, std::size_t n, FracOrder alpha) {
    detail::check_indices(j, n);
    const double a = alpha.value();
    const double k = static_cast<double>(n - j);
    return std::pow(k + 1.0, a) - std::pow(k, a);
}

/// a[j, n+1].
[[nodiscard]] inline double corrector_weight(std::size_t j, std::size_t n, FracOrder alpha) {
    detail::check_indices(j, n);
    const double a = alpha.value();
    const double nn = static_cast<double>(n);
    if (j == 0) {
        return std::pow(nn, a + 1.0) - (nn - a) * std::pow(nn + 1.0, a);
    }
    const double k = static_cast<double>(n - j);
    return std::pow(k + 2.0, a + 1.0) + std::pow(k, a + 1.0) - 2.0 * std::pow(k + 1.0, a + 1.0);
}

struct StepResult {
    State predicted;
    State corrected;
};

/// Advances one Caputo IVP step at a time, caching f at every accepted state.
class AbmStepper {
public:
    AbmStepper(SystemDef sys, SolverConfig cfg) : sys_(std::move(sys)), cfg_(std::move(cfg)) {
        cfg_.validate(sys_.dim());
        const double a = cfg_.alpha.value();
        const std::size_t n_max = cfg_.steps;
        // Apart from a[0, n+1], the weights depend on k = n - j only:
        // b_[k] = b[j, n+1] and a_[k] = a[j, n+1] for j >= 1.
        b_.resize(n_max);
        a_.resize(n_max);
        for (std::size_t k = 0; k < n_max; ++k) {
            b_[k] = predictor_weight(0, k, cfg_.alpha);
            a_[k] = corrector_weight(1, k + 1, cfg_.alpha);
        }
        const double ha = std::pow(cfg_.h, a);
        pred_scale_ = ha / (a * numkit::gamma(a));
        corr_scale_ = ha / numkit::gamma(a + 2.0);

        states_.reserve(n_max + 1);
        f_.reserve((n_max + 1) * sys_.dim());
        states_.push_back(cfg_.x0);
        append_field(cfg_.x0, 0);
    }

    [[nodiscard]] std::size_t current_step() const noexcept { return states_.size() - 1; }
    [[nodiscard]] bool done() const noexcept { return current_step() >= cfg_.steps; }
    [[nodiscard]] const std::vector<State>& states() const noexcept { return states_; }
    [[nodiscard]] const SolverConfig& config() const noexcept { return cfg_; }

    /// Computes x_p[n+1] and x[n+1] from the history 0..n and accepts x[n+1].
    StepResult step() {
        if (done()) throw DomainError("solver: all configured steps already taken");
        const std::size_t n = current_step();
        const std::size_t dim = sys_.dim();
        const double t_next = static_cast<double>(n + 1) * cfg_.h;
        const State& x0 = cfg_.x0;

        StepResult r{State(dim), State(dim)};
        for (std::size_t i = 0; i < dim; ++i) {
            const double s = detail::pairwise_sum(0, n + 1, [&](std::size_t j) { return b_[n - j] * f_[j * dim + i]; });
            const double anchor = cfg_.anchor == PredictorAnchor::WithX0 ? x0[i] : 0.0;
            r.predicted[i] = anchor + pred_scale_ * s;
        }
        const State fp = evaluate(r.predicted, n + 1, t_next, "predictor");

        const double a0 = corrector_weight(0, n, cfg_.alpha);
        for (std::size_t i = 0; i < dim; ++i) {
            const double hist =
                n == 0 ? 0.0 : detail::pairwise_sum(1, n + 1, [&](std::size_t j) { return a_[n - j] * f_[j * dim + i]; });
            r.corrected[i] = x0[i] + corr_scale_ * (a0 * f_[i] + hist + fp[i]);
        }
        states_.push_back(r.corrected);
        append_field(r.corrected, n + 1);
        return r;
    }

private:
    State evaluate(const State& x, std::size_t step, double t, const char* what) const {
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw NumericalFailure(std::string("non-finite ") + what + " state", step, t);
            }
        }
        State f = sys_.field(x);
        for (double v : f) {
            if (!std::isfinite(v)) {
                throw NumericalFailure(std::string("non-finite field value at ") + what + " state", step, t);
            }
        }
        return f;
    }

    void append_field(const State& x, std::size_t step) {
        const State f = evaluate(x, step, static_cast<double>(step) * cfg_.h, "corrected");
        f_.insert(f_.end(), f.begin(), f.end());
    }

    SystemDef sys_;
    SolverConfig cfg_;
    std::vector<double> b_;
    std::vector<double> a_;
    double pred_scale_ = 0.0;
    double corr_scale_ = 0.0;
    std::vector<State> states_;
    std::vector<double> f_;  // row-major: f_[j * dim + i] = F_i[j]
};

/// Runs all configured steps. Identical inputs give bitwise-identical output.
[[nodiscard]] inline Trajectory integrate(const SystemDef& sys, const SolverConfig& cfg, bool keep_predictor = false) {
    AbmStepper stepper(sys, cfg);
    Trajectory out;
    out.h = cfg.h;
    if (keep_predictor) out.predictor_states.reserve(cfg.steps);
    while (!stepper.done()) {
        StepResult r = stepper.step();
        if (keep_predictor) out.predictor_states.push_back(std::move(r.predicted));
    }
    out.states = stepper.states();
    out.times.resize(out.states.size());
    for (std::size_t j = 0; j < out.times.size(); ++j) out.times[j] = static_cast<double>(j) * cfg.h;
    return out;
}

struct ConvergenceRow {
    double h = 0.0;
    std::size_t steps = 0;
    /// Max-norm error at t = horizon.
    double final_error = 0.0;
    /// Max-norm error over the whole grid 0..horizon.
    double max_error = 0.0;
};

struct OrderFit {
    double slope = 0.0;
    /// RMS residual of the log-log fit.
    double residual = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    /// Empirical order: slope of log(max error over the grid) against log(h).
    /// Empty when fewer than two step sizes have a nonzero error. For
    /// non-smooth Caputo solutions the max error sits in the first few steps
    /// (the t = 0 layer) and this slope tends to 2 alpha rather than 1 + alpha.
    std::optional<OrderFit> order;
    /// Same fit on the errors at t = horizon only, away from the t = 0 layer.
    std::optional<OrderFit> final_order;
    /// Every error was exactly zero, so no order can be fitted.
    bool all_errors_zero = false;
};

namespace detail {

/// Least-squares slope of log(err) against log(h), skipping zero errors.
inline std::optional<OrderFit> loglog_fit(const std::vector<std::pair<double, double>>& h_err) {
    std::vector<std::pair<double, double>> pts;
    for (auto [h, e] : h_err) {
        if (e > 0.0) pts.emplace_back(std::log(h), std::log(e));
    }
    if (pts.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    OrderFit f;
    f.slope = sxy / sxx;
    double ss = 0.0;
    for (auto [x, y] : pts) {
        const double e = y - (my + f.slope * (x - mx));
        ss += e * e;
    }
    f.residual = std::sqrt(ss / static_cast<double>(pts.size()));
    return f;
}

}  // namespace detail

/// Errors against an exact solution for each step size on [0, horizon], plus
/// the fitted empirical orders.
[[nodiscard]] inline ConvergenceReport convergence_order(const SystemDef& sys, FracOrder alpha, const State& x0,
                                                         double horizon,
                                                         const std::function<State(double)>& exact,
                                                         std::span<const double> h_list) {
    if (h_list.empty()) throw DomainError("convergence: at least one step size is required");
    if (!(horizon > 0.0)) throw DomainError("convergence: horizon must be positive");
    ConvergenceReport rep;
    for (double h : h_list) {
        if (!(h > 0.0)) throw DomainError("convergence: step sizes must be positive");
        const double steps_real = horizon / h;
        const auto steps = static_cast<std::size_t>(std::llround(steps_real));
        if (steps == 0 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real) {
            throw DomainError("convergence: horizon must be an integer multiple of every step size");
        }
        const Trajectory tr = integrate(sys, SolverConfig{alpha, h, steps, x0});
        ConvergenceRow row{h, steps, 0.0, 0.0};
        for (std::size_t n = 0; n < tr.size(); ++n) {
            const State ref = exact(tr.times[n]);
            double e = 0.0;
            for (std::size_t i = 0; i < ref.size(); ++i) e = std::max(e, std::abs(tr.states[n][i] - ref[i]));
            row.max_error = std::max(row.max_error, e);
            if (n + 1 == tr.size()) row.final_error = e;
        }
        rep.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> fin, mx;
    for (const auto& r : rep.rows) {
        fin.emplace_back(r.h, r.final_error);
        mx.emplace_back(r.h, r.max_error);
    }
    rep.order = detail::loglog_fit(mx);
    rep.final_order = detail::loglog_fit(fin);
    rep.all_errors_zero = std::all_of(rep.rows.begin(), rep.rows.end(),
                                      [](const ConvergenceRow& r) { return r.max_error == 0.0; });
    return rep;
}

}  // namespace fracdyn::abm
