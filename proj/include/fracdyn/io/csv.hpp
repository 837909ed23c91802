#pragma once

#include <cstddef>
#include <string>

#include "fracdyn/abm.hpp"
#include "fracdyn/format.hpp"

namespace fracdyn::io {

/// `step,t,x1,...,xn` followed by one row per grid point, every real printed
/// with 17 significant digits.
[[nodiscard]] inline std::string trajectory_csv(const abm::Trajectory& tr) {
    std::string s = "step,t";
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    for (std::size_t i = 1; i <= n; ++i) s += ",x" + std::to_string(i);
    s += '\n';
    for (std::size_t j = 0; j < tr.states.size(); ++j) {
        s += std::to_string(j);
        s += ',';
        s += fmt::real(tr.times[j]);
        for (double v : tr.states[j]) {
            s += ',';
            s += fmt::real(v);
        }
        s += '\n';
    }
    return s;
}

}  // namespace fracdyn::io
