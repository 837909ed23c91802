#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fracdyn/abm.hpp"
#include "fracdyn/format.hpp"
#include "fracdyn/io/csv.hpp"
#include "fracdyn/io/svg.hpp"
#include "fracdyn/numkit/eigen.hpp"
#include "fracdyn/numkit/polynomial.hpp"
#include "fracdyn/registry.hpp"
#include "fracdyn/stability.hpp"

namespace fracdyn::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw io::ConfigError("cannot write '" + p.string() + "'");
    f << content;
    if (!f) throw io::ConfigError("failed writing '" + p.string() + "'");
}

double distance(const State& a, const State& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Largest analytic-vs-central-difference Jacobian deviation at sampled points.
double audit_jacobian(const SystemDef& sys, std::uint64_t seed, std::size_t samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    State x(sys.dim());
    for (std::size_t s = 0; s < samples; ++s) {
        for (double& v : x) v = u(rng);
        worst = std::max(worst, jacobian_consistency_error(sys, x));
    }
    return worst;
}

std::string verdict_range(stability::RouthHurwitzClass c) {
    switch (c) {
        case stability::RouthHurwitzClass::StableAllAlpha01: return "(0,1)";
        case stability::RouthHurwitzClass::StableAlphaBelowTwoThirds: return "(0,2/3)";
        case stability::RouthHurwitzClass::NotDecided: return "undecided";
    }
    return "undecided";
}

std::string matignon_range(double alpha_bound) {
    if (alpha_bound > 1.0) return "(0,1]";
    if (alpha_bound <= 0.0) return "empty";
    return "(0," + fmt::real(alpha_bound) + ")";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int run_simulation(const io::ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    SystemDef sys = registry::make_system(cfg.system, cfg.gains, cfg.target);
    const State x0 = cfg.initial_state();
    const abm::SolverConfig sc{FracOrder(cfg.alpha), cfg.h, cfg.steps, x0, cfg.anchor};
    sc.validate(sys.dim());

    const std::uint64_t seed = effective_seed(cfg.seed);
    const double jac_err = audit_jacobian(sys, seed, 16);

    abm::Trajectory tr;
    try {
        tr = abm::integrate(sys, sc);
    } catch (const NumericalFailure& e) {
        err << "error: numerical failure at step " << e.step() << ": " << e.what() << "\n";
        return exit_numerical;
    }

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_file(dir / "trajectory.csv", io::trajectory_csv(tr));
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        write_file(dir / ("fig" + std::to_string(i + 1) + ".svg"), io::orbit_svg(tr, i));
    }
    write_file(dir / "config.ini", io::serialize(cfg));

    std::string kv;
    kv += "system=" + sys.name() + "\n";
    kv += "alpha=" + fmt::real(cfg.alpha) + "\n";
    kv += "h=" + fmt::real(cfg.h) + "\n";
    kv += "steps=" + std::to_string(cfg.steps) + "\n";
    kv += "horizon=" + fmt::real(sc.horizon()) + "\n";
    kv += "predictor_anchor=" + io::anchor_name(cfg.anchor) + "\n";
    kv += "seed=" + std::to_string(seed) + "\n";
    kv += "jacobian_audit_max_rel_error=" + fmt::real(jac_err) + "\n";
    kv += "x0=" + fmt::vector(x0) + "\n";
    kv += "final_state=" + fmt::vector(tr.back()) + "\n";

    out << "system: " << sys.name() << " (alpha " << fmt::real(cfg.alpha) << ", h " << fmt::real(cfg.h) << ", "
        << cfg.steps << " steps)\n";
    out << "final state: (" << fmt::vector(tr.back(), ',') << ")\n";
    if (cfg.target) {
        const State xe = mb::mb_equilibrium(*cfg.target);
        if (xe.size() == sys.dim()) {
            const double d0 = distance(x0, xe);
            const double dn = distance(tr.back(), xe);
            kv += "target=" + mb::describe(*cfg.target) + "\n";
            kv += "initial_distance=" + fmt::real(d0) + "\n";
            kv += "final_distance=" + fmt::real(dn) + "\n";
            out << "distance to target " << mb::describe(*cfg.target) << ": initial " << fmt::real(d0) << ", final "
                << fmt::real(dn) << "\n";
        }
    }
    if (jac_err > 1e-5) {
        err << "warning: analytic Jacobian deviates from finite differences by " << fmt::real(jac_err) << "\n";
    }
    write_file(dir / "report.kv", kv);
    out << "wrote " << (dir / "trajectory.csv").string() << " and " << sys.dim() << " figure(s)\n";
    return exit_ok;
}

}  // namespace

std::uint64_t effective_seed(std::uint64_t configured) {
    if (const char* env = std::getenv("FRACDYN_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') return v;
    }
    return configured;
}

int cmd_simulate(const io::ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return run_simulation(cfg, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_stability(const StabilityOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.family.has_value() == opt.point.has_value()) {
            throw DomainError("give exactly one of --e1, --e2 or --point");
        }
        const State x_e = opt.point ? *opt.point : mb::mb_equilibrium(*opt.family);
        std::optional<mb::EquilibriumFamily> target = opt.family;
        if (opt.gains && !target) {
            if (!mb::in_equilibrium_families(x_e)) throw DomainError("gains require an E1 or E2 target point");
            target = x_e[4] == 0.0 && (x_e[0] != 0.0 || x_e[1] != 0.0)
                         ? mb::EquilibriumFamily{mb::E1{x_e[0], x_e[1]}}
                         : mb::EquilibriumFamily{mb::E2{x_e[4]}};
        }
        const SystemDef sys = registry::make_system(opt.system, opt.gains, target);
        const auto rep = stability::classify_equilibrium(sys, x_e, FracOrder(opt.alpha));
        const std::string body = opt.format == Format::Kv ? "system=" + sys.name() + "\n" + stability::to_kv(rep)
                                                          : "system: " + sys.name() + "\n" + stability::to_text(rep);
        out << body;
        if (opt.output_dir) {
            fs::create_directories(*opt.output_dir);
            write_file(fs::path(*opt.output_dir) / "report.kv", "system=" + sys.name() + "\n" + stability::to_kv(rep));
        }
        return exit_ok;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_gains_check(const GainsCheckOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (!opt.family) throw DomainError("give --e1 m,n or --e2 m");
        if (opt.gains.size() != mb::dim) throw DomainError("five gains k1..k5 are required");
        const GainVector k(opt.gains);
        std::optional<FracOrder> alpha;
        if (opt.alpha) alpha = FracOrder(*opt.alpha);
        std::vector<std::pair<std::string, std::string>> kv;
        auto put = [&](std::string key, std::string value) { kv.emplace_back(std::move(key), std::move(value)); };

        if (const auto* e2 = std::get_if<mb::E2>(&*opt.family)) {
            const auto d = stability::e2_gain_condition(k, e2->m);
            put("equilibrium", mb::describe(*opt.family));
            put("delta1", fmt::real(d.delta1));
            put("delta2", fmt::real(d.delta2));
            put("u", fmt::real(d.u));
            put("v", fmt::real(d.v));
            for (int i = 0; i < 5; ++i) {
                put("condition.C" + std::to_string(i + 1) + ".statement", yes_no(d.statement[i]));
                put("condition.C" + std::to_string(i + 1) + ".proof", yes_no(d.proof[i]));
            }
            std::string dis;
            for (int c : d.disagreements) dis += (dis.empty() ? "C" : ",C") + std::to_string(c);
            put("condition_disagreements", dis.empty() ? "none" : dis);
            for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
                put("eigenvalue." + std::to_string(i + 1), fmt::complex(d.eigenvalues[i]));
            }
            put("matignon_alpha_bound", fmt::real(d.report.alpha_bound));
            put("matignon_stable_alpha_range", matignon_range(d.report.alpha_bound));
            put("stable_all_alpha", yes_no(d.stable_all_alpha));
            if (alpha) {
                const auto r = stability::matignon_classify(d.eigenvalues, *alpha,
                                                            mb::mb_controlled_jacobian(d.report.point, k));
                put("alpha", fmt::real(alpha->value()));
                put("verdict", std::string(stability::to_string(r.verdict)));
            }
        } else {
            const auto& e1 = std::get<mb::E1>(*opt.family);
            if (!(k[0] > 0.0 && k[1] > 0.0)) throw DomainError("the E1 criteria need k1 > 0 and k2 > 0");
            const auto c = stability::cubic_from_gains(k[2], k[3], k[4], e1.m, e1.n);
            const auto rh = stability::routh_hurwitz_cubic(c, alpha.value_or(FracOrder(0.5)));
            const State xe = mb::mb_equilibrium(*opt.family);
            const Matrix j = mb::mb_controlled_jacobian(xe, k);
            const auto eigs = numkit::eigenvalues(j);
            const auto rep = stability::matignon_classify(eigs, FracOrder(1.0), j);
            put("equilibrium", mb::describe(*opt.family));
            put("a1", fmt::real(c.a1));
            put("a2", fmt::real(c.a2));
            put("a3", fmt::real(c.a3));
            put("a1a2_minus_a3", fmt::real(c.a1 * c.a2 - c.a3));
            put("discriminant", fmt::real(c.discriminant));
            put("routh_hurwitz", std::string(stability::to_string(rh.cls)));
            put("routh_hurwitz_alpha_range", verdict_range(rh.cls));
            const auto roots = numkit::poly_roots(c.polynomial());
            for (std::size_t i = 0; i < roots.size(); ++i) put("cubic_root." + std::to_string(i + 1), fmt::complex(roots[i]));
            for (std::size_t i = 0; i < eigs.size(); ++i) put("eigenvalue." + std::to_string(i + 1), fmt::complex(eigs[i]));
            put("matignon_alpha_bound", fmt::real(rep.alpha_bound));
            put("matignon_stable_alpha_range", matignon_range(rep.alpha_bound));
            if (alpha) {
                const auto r = stability::matignon_classify(eigs, *alpha, j);
                put("alpha", fmt::real(alpha->value()));
                put("routh_hurwitz_covers_alpha", yes_no(rh.covers_alpha));
                put("verdict", std::string(stability::to_string(r.verdict)));
            }
        }
        for (const auto& [key, value] : kv) {
            out << key << (opt.format == Format::Kv ? "=" : ": ") << value << "\n";
        }
        return exit_ok;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_convergence(const ConvergenceOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.system != registry::linear_decay_name) {
            throw DomainError("convergence studies need an exact solution; only '" +
                              std::string(registry::linear_decay_name) + "' provides one");
        }
        const FracOrder alpha(opt.alpha);
        const auto rep = abm::convergence_order(registry::linear_decay(), alpha, State{opt.x0}, opt.horizon,
                                                registry::linear_decay_solution(opt.alpha, opt.x0), opt.h_list);
        const bool kv = opt.format == Format::Kv;
        if (kv) {
            out << "system=" << opt.system << "\nalpha=" << fmt::real(opt.alpha) << "\nhorizon=" << fmt::real(opt.horizon)
                << "\n";
            for (std::size_t i = 0; i < rep.rows.size(); ++i) {
                const auto& r = rep.rows[i];
                const std::string row = "row." + std::to_string(i) + ".";
                out << row << "h=" << fmt::real(r.h) << "\n"
                    << row << "steps=" << r.steps << "\n"
                    << row << "final_error=" << fmt::real(r.final_error) << "\n"
                    << row << "max_error=" << fmt::real(r.max_error) << "\n";
            }
        } else {
            out << "system: " << opt.system << ", alpha " << fmt::real(opt.alpha) << ", horizon "
                << fmt::real(opt.horizon) << "\n";
            out << "h,steps,final_error,max_error\n";
            for (const auto& r : rep.rows) {
                out << fmt::real(r.h) << "," << r.steps << "," << fmt::real(r.final_error) << ","
                    << fmt::real(r.max_error) << "\n";
            }
        }
        if (opt.h_list.size() >= 2) {
            auto emit = [&](const char* key, const char* label, const std::optional<abm::OrderFit>& f) {
                if (f) {
                    out << (kv ? std::string(key) + "=" : std::string(label) + ": ") << fmt::real(f->slope) << "\n";
                    out << (kv ? std::string(key) + "_fit_residual=" : std::string(label) + " fit residual: ")
                        << fmt::real(f->residual) << "\n";
                } else {
                    out << (kv ? std::string(key) + "=undefined\n" : std::string(label) + ": undefined (errors vanish)\n");
                }
            };
            emit("order", "order (max error over grid)", rep.order);
            emit("final_order", "order (error at horizon)", rep.final_order);
        }
        return exit_ok;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_sweep(const std::vector<io::ExperimentConfig>& cfgs, std::ostream& out, std::ostream& err) {
    if (cfgs.empty()) {
        err << "error: sweep needs at least one config\n";
        return exit_usage;
    }
    std::set<fs::path> dirs;
    for (const auto& c : cfgs) {
        const fs::path p = fs::weakly_canonical(fs::absolute(c.output_dir));
        if (!dirs.insert(p).second) {
            err << "error: sweep configs share the output directory '" << c.output_dir << "'\n";
            return exit_usage;
        }
    }
    struct Outcome {
        int code;
        std::string out;
        std::string err;
    };
    std::vector<std::future<Outcome>> jobs;
    jobs.reserve(cfgs.size());
    for (const auto& c : cfgs) {
        jobs.push_back(std::async(std::launch::async, [c] {
            std::ostringstream o, e;
            const int code = cmd_simulate(c, o, e);
            return Outcome{code, o.str(), e.str()};
        }));
    }
    int worst = exit_ok;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const Outcome r = jobs[i].get();
        out << "[" << cfgs[i].output_dir << "] exit " << r.code << "\n" << r.out;
        err << r.err;
        worst = std::max(worst, r.code);
    }
    return worst;
}

namespace {

Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "kv") return Format::Kv;
    throw DomainError("--format must be text or kv");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional-order dynamical systems: simulation and stability analysis", "fracdyn"};
    app.require_subcommand(1);
    // "-h" stays free so that "--h" can name the step size.
    app.set_help_flag("--help", "Print this help message and exit");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate an experiment and write CSV, SVG and report files");
    sim->set_help_flag("--help", "Print this help message and exit");
    std::string sim_config;
    std::vector<std::pair<std::string, std::string>> sim_overrides;
    auto sim_flag = [&](const std::string& flag, const std::string& section, const std::string& key,
                        const std::string& help) {
        sim->add_option_function<std::string>(
            flag, [&sim_overrides, section, key](const std::string& v) { sim_overrides.emplace_back(section + "|" + key, v); },
            help);
    };
    sim->add_option("--config", sim_config, "Experiment config file");
    sim_flag("--system", "system", "name", "Registered system name");
    sim_flag("--alpha", "system", "alpha", "Fractional order in (0,1]");
    sim_flag("--h", "solver", "h", "Step size");
    sim_flag("--steps", "solver", "steps", "Number of steps N");
    sim_flag("--predictor-anchor", "solver", "predictor_anchor", "with_x0 or as_printed");
    sim_flag("--x0", "initial", "x0", "Initial state x1,...,xn or equilibrium+epsilon");
    sim_flag("--epsilon", "initial", "epsilon", "Offset added to every target component");
    sim_flag("--gains", "control", "gains", "Feedback gains k1,...,k5");
    sim_flag("--target", "control", "target", "Target equilibrium e1:m,n or e2:m");
    sim_flag("--output", "output", "dir", "Output directory");
    sim_flag("--seed", "output", "seed", "Seed for sampled checks");

    // stability
    auto* stab = app.add_subcommand("stability", "Classify an equilibrium with the Matignon test");
    stab->set_help_flag("--help", "Print this help message and exit");
    std::string stab_system = mb::registry_name, stab_alpha = "1", stab_format = "text";
    std::optional<std::string> stab_e1, stab_e2, stab_point, stab_gains, stab_output;
    stab->add_option("system", stab_system, "Registered system name")->required();
    stab->add_option("--alpha", stab_alpha, "Fractional order in (0,1]");
    stab->add_option("--e1", stab_e1, "E1 member m,n");
    stab->add_option("--e2", stab_e2, "E2 member m");
    stab->add_option("--point", stab_point, "Explicit point x1,...,xn");
    stab->add_option("--gains", stab_gains, "Feedback gains k1,...,k5 (classifies the controlled system)");
    stab->add_option("--format", stab_format, "text or kv");
    stab->add_option("--output", stab_output, "Also write report.kv into this directory");

    // gains-check
    auto* gc = app.add_subcommand("gains-check", "Evaluate the feedback-gain stability conditions");
    gc->set_help_flag("--help", "Print this help message and exit");
    std::string gc_gains, gc_format = "text";
    std::optional<std::string> gc_e1, gc_e2, gc_alpha;
    gc->add_option("--gains", gc_gains, "Feedback gains k1,...,k5")->required();
    gc->add_option("--e1", gc_e1, "E1 member m,n");
    gc->add_option("--e2", gc_e2, "E2 member m");
    gc->add_option("--alpha", gc_alpha, "Also report the verdict at this order");
    gc->add_option("--format", gc_format, "text or kv");

    // convergence
    auto* conv = app.add_subcommand("convergence", "Empirical order of the ABM scheme against an exact solution");
    conv->set_help_flag("--help", "Print this help message and exit");
    std::string conv_system = registry::linear_decay_name, conv_alpha = "1", conv_h, conv_horizon = "1",
                conv_format = "text";
    conv->add_option("system", conv_system, "System with an exact solution (linear-decay)");
    conv->add_option("--alpha", conv_alpha, "Fractional order in (0,1]");
    conv->add_option("--h", conv_h, "Comma-separated step sizes")->required();
    conv->add_option("--horizon", conv_horizon, "Integration horizon");
    conv->add_option("--format", conv_format, "text or kv");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run several experiment configs concurrently");
    sweep->set_help_flag("--help", "Print this help message and exit");
    std::vector<std::string> sweep_configs;
    sweep->add_option("configs", sweep_configs, "Config files (distinct output directories)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (sim->parsed()) {
            io::ExperimentConfig cfg = sim_config.empty() ? io::ExperimentConfig{} : io::load(sim_config);
            for (const auto& [where, value] : sim_overrides) {
                const auto bar = where.find('|');
                io::apply_setting(cfg, where.substr(0, bar), where.substr(bar + 1), value);
            }
            return cmd_simulate(cfg, out, err);
        }
        if (stab->parsed()) {
            StabilityOptions o;
            o.system = stab_system;
            o.alpha = fmt::parse_real(stab_alpha);
            if (int(stab_e1.has_value()) + int(stab_e2.has_value()) + int(stab_point.has_value()) != 1) {
                throw DomainError("give exactly one of --e1, --e2 or --point");
            }
            if (stab_e1) o.family = mb::parse_family("e1:" + *stab_e1);
            if (stab_e2) o.family = mb::parse_family("e2:" + *stab_e2);
            if (stab_point) o.point = fmt::parse_list(*stab_point);
            if (stab_gains) o.gains = fmt::parse_list(*stab_gains);
            o.format = parse_format(stab_format);
            o.output_dir = stab_output;
            return cmd_stability(o, out, err);
        }
        if (gc->parsed()) {
            GainsCheckOptions o;
            o.gains = fmt::parse_list(gc_gains);
            if (gc_e1.has_value() == gc_e2.has_value()) throw DomainError("give exactly one of --e1 or --e2");
            o.family = gc_e1 ? mb::parse_family("e1:" + *gc_e1) : mb::parse_family("e2:" + *gc_e2);
            if (gc_alpha) o.alpha = fmt::parse_real(*gc_alpha);
            o.format = parse_format(gc_format);
            return cmd_gains_check(o, out, err);
        }
        if (conv->parsed()) {
            ConvergenceOptions o;
            o.system = conv_system;
            o.alpha = fmt::parse_real(conv_alpha);
            o.h_list = fmt::parse_list(conv_h);
            o.horizon = fmt::parse_real(conv_horizon);
            o.format = parse_format(conv_format);
            return cmd_convergence(o, out, err);
        }
        if (sweep->parsed()) {
            std::vector<io::ExperimentConfig> cfgs;
            for (const auto& p : sweep_configs) cfgs.push_back(io::load(p));
            return cmd_sweep(cfgs, out, err);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace fracdyn::cli
