#pragma once

// Experiment configuration file: sections in brackets, one key = value per
// line, '#' starts a comment.
//
//   [system]
//   name = maxwell-bloch-5d-controlled
//   alpha = 0.65
//
//   [solver]
//   h = 0.01
//   steps = 500
//   predictor_anchor = with_x0
//
//   [initial]
//   x0 = equilibrium+epsilon     (or an explicit list x1,x2,...)
//   epsilon = 0.01
//
//   [control]
//   gains = 1.2,1.2,0.5,0.5,0
//   target = e1:0.4330127018922193,0.25
//
//   [output]
//   dir = out
//   seed = 1

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/abm.hpp"
#include "fracdyn/error.hpp"
#include "fracdyn/format.hpp"
#include "fracdyn/maxwell_bloch.hpp"

namespace fracdyn::io {

class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

struct ExperimentConfig {
    std::string system = mb::registry_name;
    double alpha = 1.0;
    double h = 0.01;
    std::size_t steps = 100;
    abm::PredictorAnchor anchor = abm::PredictorAnchor::WithX0;
    /// Explicit initial state; when empty, x0 = target + epsilon in every component.
    std::optional<State> x0;
    std::optional<double> epsilon;
    std::optional<std::vector<double>> gains;
    std::optional<mb::EquilibriumFamily> target;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    /// Initial state, expanding the equilibrium+epsilon shorthand.
    [[nodiscard]] State initial_state() const {
        if (x0) return *x0;
        if (!epsilon || !target) {
            throw ConfigError("initial state needs either x0 or both epsilon and a target equilibrium");
        }
        State s = mb::mb_equilibrium(*target);
        for (double& v : s) v += *epsilon;
        return s;
    }
};

[[nodiscard]] inline std::string anchor_name(abm::PredictorAnchor a) {
    return a == abm::PredictorAnchor::WithX0 ? "with_x0" : "as_printed";
}

[[nodiscard]] inline abm::PredictorAnchor parse_anchor(std::string_view s) {
    if (s == "with_x0") return abm::PredictorAnchor::WithX0;
    if (s == "as_printed") return abm::PredictorAnchor::AsPrinted;
    throw ConfigError("predictor_anchor must be with_x0 or as_printed");
}

[[nodiscard]] inline std::string serialize(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "[system]\n";
    o << "name = " << c.system << "\n";
    o << "alpha = " << fmt::real(c.alpha) << "\n\n";
    o << "[solver]\n";
    o << "h = " << fmt::real(c.h) << "\n";
    o << "steps = " << c.steps << "\n";
    o << "predictor_anchor = " << anchor_name(c.anchor) << "\n\n";
    o << "[initial]\n";
    if (c.x0) {
        o << "x0 = " << fmt::vector(*c.x0) << "\n";
    } else {
        o << "x0 = equilibrium+epsilon\n";
    }
    if (c.epsilon) o << "epsilon = " << fmt::real(*c.epsilon) << "\n";
    o << "\n[control]\n";
    if (c.gains) o << "gains = " << fmt::vector(*c.gains) << "\n";
    if (c.target) o << "target = " << mb::describe(*c.target) << "\n";
    o << "\n[output]\n";
    o << "dir = " << c.output_dir << "\n";
    o << "seed = " << c.seed << "\n";
    return o.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::uint64_t parse_unsigned(std::string_view s, std::string_view key) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
    }
    return v;
}

}  // namespace detail

/// Applies one key=value pair; `section.key` names are also accepted by the CLI.
inline void apply_setting(ExperimentConfig& c, std::string_view section, std::string_view key, std::string_view value) {
    const std::string full = std::string(section) + "." + std::string(key);
    try {
        if (full == "system.name") {
            c.system = std::string(value);
        } else if (full == "system.alpha") {
            c.alpha = fmt::parse_real(value);
        } else if (full == "solver.h") {
            c.h = fmt::parse_real(value);
        } else if (full == "solver.steps") {
            c.steps = detail::parse_unsigned(value, key);
        } else if (full == "solver.predictor_anchor") {
            c.anchor = parse_anchor(value);
        } else if (full == "initial.x0") {
            if (value == "equilibrium+epsilon") {
                c.x0.reset();
            } else {
                c.x0 = fmt::parse_list(value);
            }
        } else if (full == "initial.epsilon") {
            c.epsilon = fmt::parse_real(value);
        } else if (full == "control.gains") {
            c.gains = fmt::parse_list(value);
        } else if (full == "control.target") {
            c.target = mb::parse_family(value);
        } else if (full == "output.dir") {
            c.output_dir = std::string(value);
        } else if (full == "output.seed") {
            c.seed = detail::parse_unsigned(value, key);
        } else {
            throw ConfigError("unknown setting '" + full + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError("setting '" + full + "': " + e.what());
    }
}

[[nodiscard]] inline ExperimentConfig parse(std::string_view text) {
    ExperimentConfig c;
    std::string section;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "setting outside of a section");
        try {
            apply_setting(c, section, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return c;
}

[[nodiscard]] inline ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace fracdyn::io
