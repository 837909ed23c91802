#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracdyn/io/config.hpp"
#include "fracdyn/maxwell_bloch.hpp"

namespace fracdyn::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

enum class Format { Text, Kv };

/// Seed used for sampled checks: FRACDYN_SEED when set, else the configured one.
[[nodiscard]] std::uint64_t effective_seed(std::uint64_t configured);

/// Integrates one experiment, writes trajectory.csv, fig<i>.svg, report.kv and
/// config.ini under cfg.output_dir, and prints the final state.
int cmd_simulate(const io::ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

struct StabilityOptions {
    std::string system = mb::registry_name;
    double alpha = 1.0;
    std::optional<mb::EquilibriumFamily> family;
    std::optional<State> point;
    std::optional<std::vector<double>> gains;
    Format format = Format::Text;
    std::optional<std::string> output_dir;
};

int cmd_stability(const StabilityOptions& opt, std::ostream& out, std::ostream& err);

struct GainsCheckOptions {
    std::vector<double> gains;
    std::optional<mb::EquilibriumFamily> family;
    std::optional<double> alpha;
    Format format = Format::Text;
};

int cmd_gains_check(const GainsCheckOptions& opt, std::ostream& out, std::ostream& err);

struct ConvergenceOptions {
    std::string system = "linear-decay";
    double alpha = 1.0;
    std::vector<double> h_list;
    double horizon = 1.0;
    double x0 = 1.0;
    Format format = Format::Text;
};

int cmd_convergence(const ConvergenceOptions& opt, std::ostream& out, std::ostream& err);

/// Runs independent experiments concurrently; output directories must differ.
/// Returns the largest exit code of the individual runs.
int cmd_sweep(const std::vector<io::ExperimentConfig>& cfgs, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracdyn::cli
