#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdyn/format.hpp"
#include "fracdyn/io/config.hpp"
#include "fracdyn/io/csv.hpp"
#include "fracdyn/io/svg.hpp"
#include "fracdyn/maxwell_bloch.hpp"
#include "fracdyn/registry.hpp"
#include "support.hpp"

using namespace fracdyn;
using namespace fracdyn::io;
using fracdyn::testing::Rng;

namespace {

abm::Trajectory short_run() {
    abm::SolverConfig c;
    c.alpha = FracOrder(0.65);
    c.h = 0.01;
    c.steps = 40;
    c.x0 = {0.44, 0.26, 0.01, 0.01, 0.01};
    const auto sys = mb::maxwell_bloch_controlled(GainVector({1.2, 1.2, 0.5, 0.5, 0.0}),
                                                  mb::E1{std::sqrt(3.0) / 4.0, 0.25});
    return abm::integrate(sys, c);
}

}  // namespace

TEST(Format, Reals) {
    EXPECT_EQ(fmt::real(0.0), "0");
    EXPECT_EQ(fmt::real(-0.0), "0");
    EXPECT_EQ(fmt::real(0.5), "0.5");
    EXPECT_EQ(fmt::real(0.1), "0.10000000000000001");
    EXPECT_EQ(fmt::complex({-0.25, -0.5}), "-0.25-0.5i");
    EXPECT_EQ(fmt::parse_real("-1/8"), -0.125);
    EXPECT_EQ(fmt::parse_real(" 2/3 "), 2.0 / 3.0);
    EXPECT_EQ(fmt::parse_real("+1e-3"), 1e-3);
    EXPECT_THROW((void)fmt::parse_real("abc"), DomainError);
    EXPECT_THROW((void)fmt::parse_real("1/0"), DomainError);
    EXPECT_THROW((void)fmt::parse_real(""), DomainError);
    EXPECT_EQ(fmt::parse_list("1, 2/4,-3"), (std::vector<double>{1.0, 0.5, -3.0}));
}

TEST(Format, RealRoundTrip) {
    Rng rng(40);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-300, 300));
        EXPECT_EQ(fmt::parse_real(fmt::real(v)), v);
    }
}

TEST(Config, ParsesDocumentedExample) {
    const auto c = parse(R"(# figure run
[system]
name = maxwell-bloch-5d-controlled
alpha = 0.65

[solver]
h = 0.01
steps = 500
predictor_anchor = with_x0

[initial]
x0 = equilibrium+epsilon
epsilon = 0.01

[control]
gains = 1.2,1.2,0.5,0.5,0
target = e1:0.4330127018922193,0.25

[output]
dir = out/fig
seed = 7
)");
    EXPECT_EQ(c.system, "maxwell-bloch-5d-controlled");
    EXPECT_EQ(c.alpha, 0.65);
    EXPECT_EQ(c.steps, 500u);
    EXPECT_FALSE(c.x0.has_value());
    EXPECT_EQ(*c.epsilon, 0.01);
    EXPECT_EQ(*c.gains, (std::vector<double>{1.2, 1.2, 0.5, 0.5, 0.0}));
    EXPECT_EQ(*c.target, (mb::EquilibriumFamily{mb::E1{0.4330127018922193, 0.25}}));
    EXPECT_EQ(c.output_dir, "out/fig");
    EXPECT_EQ(c.seed, 7u);
    const State x0 = c.initial_state();
    EXPECT_EQ(x0[0], 0.4330127018922193 + 0.01);
    EXPECT_EQ(x0[4], 0.01);
}

TEST(Config, Errors) {
    EXPECT_THROW((void)parse("[system]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW((void)parse("name = x\n"), ConfigError);
    EXPECT_THROW((void)parse("[solver\n"), ConfigError);
    EXPECT_THROW((void)parse("[solver]\nsteps = -4\n"), ConfigError);
    EXPECT_THROW((void)parse("[solver]\nsteps\n"), ConfigError);
    EXPECT_THROW((void)parse("[solver]\npredictor_anchor = sideways\n"), ConfigError);
    EXPECT_THROW((void)parse("[control]\ntarget = e1:0\n"), ConfigError);
    EXPECT_THROW((void)ExperimentConfig{}.initial_state(), ConfigError);
    EXPECT_THROW((void)load("/nonexistent/dir/file.ini"), ConfigError);
    try {
        (void)parse("[system]\nalpha = 0.5\n\n[solver]\nh = fast\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
    }
}

TEST(Config, RoundTripProperty) {
    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        ExperimentConfig c;
        c.system = i % 2 ? "maxwell-bloch-5d" : "linear-decay";
        c.alpha = rng.uniform(0.01, 1.0);
        c.h = rng.uniform(1e-4, 0.5);
        c.steps = static_cast<std::size_t>(rng.uniform(1, 1e6));
        c.anchor = i % 3 ? abm::PredictorAnchor::WithX0 : abm::PredictorAnchor::AsPrinted;
        if (i % 4 == 0) c.x0 = rng.vec(1 + i % 5, -10, 10);
        if (i % 5 != 0) c.epsilon = rng.uniform(-1, 1);
        if (i % 2) c.gains = rng.vec(5, 0, 3);
        if (i % 3 == 1) c.target = mb::E1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (i % 3 == 2) c.target = mb::E2{rng.uniform(-2, 2)};
        c.seed = static_cast<std::uint64_t>(rng.uniform(0, 1e18));
        c.output_dir = "runs/r" + std::to_string(i);
        EXPECT_EQ(parse(serialize(c)), c) << serialize(c);
    }
}

TEST(Csv, SchemaAndDeterminism) {
    const auto tr = short_run();
    const std::string csv = trajectory_csv(tr);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,t,x1,x2,x3,x4,x5");
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), tr.size() + 1);
    EXPECT_EQ(csv, trajectory_csv(short_run()));
    // every value parses back to the stored double
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    for (std::size_t j = 0; j < tr.size(); ++j) {
        std::getline(in, line);
        const auto fields = fmt::parse_list(line);
        ASSERT_EQ(fields.size(), 7u);
        EXPECT_EQ(fields[0], static_cast<double>(j));
        EXPECT_EQ(fields[1], tr.times[j]);
        for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(fields[2 + i], tr.states[j][i]);
    }
}

TEST(Svg, DeterministicAndLabelled) {
    const auto tr = short_run();
    for (std::size_t i = 0; i < 5; ++i) {
        const std::string a = orbit_svg(tr, i);
        EXPECT_EQ(a, orbit_svg(short_run(), i));
        EXPECT_NE(a.find("Fig. " + std::to_string(i + 1)), std::string::npos);
        EXPECT_NE(a.find(">n</text>"), std::string::npos);
        EXPECT_NE(a.find("x^" + std::to_string(i + 1) + "(n)"), std::string::npos);
        EXPECT_NE(a.find("<path"), std::string::npos);
        EXPECT_EQ(a.rfind("</svg>\n"), a.size() - 7);
    }
    EXPECT_THROW((void)orbit_svg(tr, 5), DomainError);
}

TEST(Svg, FlatSeries) {
    abm::SolverConfig c;
    c.alpha = FracOrder(0.5);
    c.h = 0.1;
    c.steps = 10;
    c.x0 = State(5, 1.0);
    const auto tr = abm::integrate(registry::zero_field(5), c);
    const std::string s = orbit_svg(tr, 2);
    EXPECT_EQ(s.find("nan"), std::string::npos);
    EXPECT_EQ(s.find("inf"), std::string::npos);
}
