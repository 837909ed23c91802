// Drive the 5D Maxwell-Bloch system to e1(m, n) with linear feedback and
// check the linearisation first.

#include <cmath>
#include <cstdio>

#include "fracdyn/fracdyn.hpp"

using namespace fracdyn;

int main() {
    const FracOrder alpha(0.65);
    const mb::E1 target{std::sqrt(3.0) / 4, 0.25};
    const GainVector k({1.2, 1.2, 0.5, 0.5, 0.0});
    const State xe = mb::mb_equilibrium(target);

    const auto open = stability::classify_equilibrium(mb::maxwell_bloch_system(), xe, alpha);
    const auto sys = mb::maxwell_bloch_controlled(k, target);
    const auto closed = stability::classify_equilibrium(sys, xe, alpha);
    std::printf("without feedback: %s\nwith feedback:    %s (alpha bound %.4g)\n",
                std::string(stability::to_string(open.verdict)).c_str(),
                std::string(stability::to_string(closed.verdict)).c_str(), closed.alpha_bound);

    abm::SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.h = 0.01;
    cfg.steps = 500;
    cfg.x0 = xe;
    for (double& v : cfg.x0) v += 0.01;
    const auto tr = abm::integrate(sys, cfg);

    for (std::size_t n = 0; n < tr.size(); n += 100) {
        double d = 0.0;
        for (std::size_t i = 0; i < xe.size(); ++i) d += std::pow(tr.states[n][i] - xe[i], 2);
        std::printf("t = %4.1f  |x - xe| = %.3e\n", tr.times[n], std::sqrt(d));
    }
}
