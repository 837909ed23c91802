#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracdyn {

/// Raised when an argument lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an integration produces a non-finite value.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, std::size_t step, double time)
        : std::runtime_error(what + " (step " + std::to_string(step) + ", t = " + std::to_string(time) + ")"),
          step_(step),
          time_(time) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

}  // namespace fracdyn
