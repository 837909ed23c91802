#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracdyn/maxwell_bloch.hpp"
#include "fracdyn/numkit.hpp"
#include "support.hpp"

using namespace fracdyn;
using namespace fracdyn::mb;
using fracdyn::testing::Rng;

namespace {

/// Coefficients of a product of polynomials given in ascending order.
std::vector<double> mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

/// det(lambda I - J) is monic; the reference forms are det(J - lambda I) = -det(lambda I - J).
void expect_charpoly(const Matrix& j, std::vector<double> ref, double tol) {
    for (double& c : ref) c = -c;
    const auto p = numkit::characteristic_polynomial(j);
    ASSERT_EQ(p.coeffs().size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(p[i], ref[i], tol) << "coeff " << i;
}

}  // namespace

TEST(MaxwellBloch, FieldExamples) {
    EXPECT_EQ(mb_field(State{1, 1, 1, 1, 1}), (State{1, 1, 1, 1, -2}));
    for (double v : mb_field(State{0.3, -4, 0, 0, 0})) EXPECT_EQ(v, 0.0);
    for (double v : mb_field(State{0, 0, 0, 0, 2.5})) EXPECT_EQ(v, 0.0);
    EXPECT_THROW((void)mb_field(State{1, 2}), DomainError);
    EXPECT_THROW((void)to_mb_state(State{1, 2, 3, NAN, 5}), DomainError);
}

TEST(MaxwellBloch, MatrixConstants) {
    const auto m = mb_matrices();
    auto nonzeros = [](const Matrix& a) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> nz;
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 5; ++c)
                if (a(r, c) != 0.0) nz.emplace_back(r, c, a(r, c));
        return nz;
    };
    using T = std::vector<std::tuple<std::size_t, std::size_t, double>>;
    EXPECT_EQ(nonzeros(m.A), (T{{0, 2, 1.0}, {1, 3, 1.0}}));
    EXPECT_EQ(nonzeros(m.A1), (T{{2, 4, 1.0}, {4, 2, -1.0}}));
    EXPECT_EQ(nonzeros(m.A2), (T{{3, 4, 1.0}, {4, 3, -1.0}}));
}

TEST(MaxwellBloch, MatrixNorms) {
    // the sqrt(2) in the Lipschitz bound is the Frobenius norm; the spectral
    // norm of each matrix is 1, so the bound is conservative
    const auto m = mb_matrices();
    for (const Matrix* a : {&m.A, &m.A1, &m.A2}) {
        EXPECT_NEAR(a->frobenius_norm(), std::numbers::sqrt2, 1e-15);
        EXPECT_NEAR(numkit::spectral_norm(*a), 1.0, 1e-14);
    }
}

TEST(MaxwellBloch, MatrixFormEquivalence) {
    EXPECT_EQ(mb_field_matrix_form(State(5, 0.0)), State(5, 0.0));
    EXPECT_EQ(mb_field_matrix_form(State{1, 0, 0, 0, 1}), (State{0, 0, 1, 0, 0}));
    EXPECT_EQ(mb_field(State{1, 0, 0, 0, 1}), (State{0, 0, 1, 0, 0}));
    Rng rng(20);
    for (int i = 0; i < 1000; ++i) {
        const State x = rng.vec(5, -5, 5);
        const State a = mb_field(x);
        const State b = mb_field_matrix_form(x);
        for (std::size_t j = 0; j < 5; ++j) EXPECT_LE(std::abs(a[j] - b[j]), 1e-14);
    }
}

TEST(MaxwellBloch, JacobianMatchesClosedForm) {
    const State x{0.3, -0.7, 1.1, 2.0, -1.5};
    const Matrix expected{{0, 0, 1, 0, 0},
                          {0, 0, 0, 1, 0},
                          {x[4], 0, 0, 0, x[0]},
                          {0, x[4], 0, 0, x[1]},
                          {-x[2], -x[3], -x[0], -x[1], 0}};
    EXPECT_EQ(mb_jacobian(x), expected);
}

TEST(MaxwellBloch, JacobianFiniteDifferences) {
    const auto sys = maxwell_bloch_system();
    Rng rng(21);
    for (int i = 0; i < 50; ++i) EXPECT_LE(jacobian_consistency_error(sys, rng.vec(5, -2, 2)), 1e-5);
}

TEST(MaxwellBloch, ControlledJacobian) {
    const GainVector k({0.1, 0.2, 0.3, 0.4, 0.5});
    const State x{0.3, -0.7, 1.1, 2.0, -1.5};
    EXPECT_EQ(mb_controlled_jacobian(x, k), mb_jacobian(x) - Matrix::diagonal(k.values()));
    EXPECT_EQ(mb_controlled_jacobian(x, GainVector::zero(5)), mb_jacobian(x));
}

TEST(MaxwellBloch, CharacteristicPolynomialsUncontrolled) {
    Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        const double m = rng.uniform(-2, 2), n = rng.uniform(-2, 2);
        // -lambda^3 (lambda^2 + m^2 + n^2)
        expect_charpoly(mb_jacobian(mb_equilibrium(E1{m, n})), {0, 0, 0, -(m * m + n * n), 0, -1}, 1e-9);
        // -lambda (lambda^2 - m)^2
        expect_charpoly(mb_jacobian(mb_equilibrium(E2{m})), mul({0, -1}, mul({-m, 0, 1}, {-m, 0, 1})), 1e-9);
    }
}

TEST(MaxwellBloch, CharacteristicPolynomialsControlled) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const auto kv = rng.vec(5, 0, 2);
        const GainVector k(kv);
        const double k1 = kv[0], k2 = kv[1], k3 = kv[2], k4 = kv[3], k5 = kv[4];
        const double m = rng.uniform(-1, 1), n = rng.uniform(-1, 1);
        // at e2: -(lambda + k5)[lambda^2 + (k1+k3) lambda + k1k3 - m][lambda^2 + (k2+k4) lambda + k2k4 - m]
        const auto e2 = mul({-k5, -1}, mul({k1 * k3 - m, k1 + k3, 1}, {k2 * k4 - m, k2 + k4, 1}));
        expect_charpoly(mb_controlled_jacobian(mb_equilibrium(E2{m}), k), e2, 1e-9);
        // at e1: -(lambda + k1)(lambda + k2) P(lambda)
        const double a1 = k3 + k4 + k5;
        const double a2 = k3 * k4 + k3 * k5 + k4 * k5 + m * m + n * n;
        const double a3 = k3 * k4 * k5 + k3 * n * n + k4 * m * m;
        const auto e1 = mul({-k1, -1}, mul({k2, 1}, {a3, a2, a1, 1}));
        expect_charpoly(mb_controlled_jacobian(mb_equilibrium(E1{m, n}), k), e1, 1e-9);
    }
}

TEST(MaxwellBloch, UncontrolledSpectraAtEquilibria) {
    const auto e = numkit::eigenvalues(mb_jacobian(mb_equilibrium(E1{1.0, 0.0})));
    EXPECT_LT(fracdyn::testing::multiset_distance(e, {0.0, 0.0, 0.0, numkit::Complex{0, 1}, numkit::Complex{0, -1}}), 1e-12);
}

TEST(MaxwellBloch, Equilibria) {
    EXPECT_EQ(mb_equilibrium(E1{std::sqrt(3.0) / 4, 0.25}), (State{std::sqrt(3.0) / 4, 0.25, 0, 0, 0}));
    EXPECT_EQ(mb_equilibrium(E2{-0.125}), (State{0, 0, 0, 0, -0.125}));
    EXPECT_EQ(mb_equilibrium(E2{0.0}), State(5, 0.0));
    EXPECT_THROW((void)mb_equilibrium(E1{0.0, 0.0}), DomainError);
    const auto sys = maxwell_bloch_system();
    Rng rng(24);
    for (int i = 0; i < 50; ++i) {
        EXPECT_TRUE(is_equilibrium(sys, mb_equilibrium(E1{rng.uniform(-3, 3), rng.uniform(-3, 3)}), 1e-300));
        EXPECT_TRUE(is_equilibrium(sys, mb_equilibrium(E2{rng.uniform(-3, 3)}), 1e-300));
    }
}

TEST(MaxwellBloch, FamilyTextRoundTrip) {
    const EquilibriumFamily a = E1{0.4330127018922193, 0.25};
    const EquilibriumFamily b = E2{-0.125};
    EXPECT_EQ(describe(a).substr(0, 3), "e1:");
    EXPECT_EQ(describe(b), "e2:-0.125");
    EXPECT_EQ(parse_family(describe(a)), a);
    EXPECT_EQ(parse_family(describe(b)), b);
    EXPECT_EQ(parse_family("e2:-1/8"), b);
    EXPECT_THROW((void)parse_family("e3:1"), DomainError);
    EXPECT_THROW((void)parse_family("e1:1"), DomainError);
}

TEST(MaxwellBloch, EquilibriumCompletenessOnGrid) {
    const double g[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    std::size_t found = 0;
    State x(5);
    for (double a : g)
        for (double b : g)
            for (double c : g)
                for (double d : g)
                    for (double e : g) {
                        x = {a, b, c, d, e};
                        if (max_abs(mb_field(x)) <= 1e-12) {
                            ++found;
                            EXPECT_TRUE(in_equilibrium_families(x)) << fmt::vector(x);
                        }
                    }
    // E1 on the grid: 24 (m, n) pairs; E2: 5 values of m (origin shared)
    EXPECT_EQ(found, 24u + 5u);
}

TEST(MaxwellBloch, ControlledField) {
    const GainVector k({1.2, 1.2, 0.5, 0.5, 0.0});
    const State xe{std::sqrt(3.0) / 4.0, 0.25, 0, 0, 0};
    for (double v : mb_controlled_field(xe, k, xe)) EXPECT_EQ(v, 0.0);
    const State x{xe[0] + 0.01, xe[1] + 0.01, 0.01, 0.01, 0.01};
    const State f = mb_controlled_field(x, k, xe);
    // hand substitution
    const State expected{0.01 - 1.2 * 0.01, 0.01 - 1.2 * 0.01, x[0] * 0.01 - 0.5 * 0.01, x[1] * 0.01 - 0.5 * 0.01,
                         -(x[0] * 0.01 + x[1] * 0.01)};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(f[i], expected[i], 1e-16);
    EXPECT_EQ(mb_controlled_field(x, GainVector::zero(5), xe), mb_field(x));
    EXPECT_THROW((void)mb_controlled_field(x, k, State{0, 0, 1, 0, 0}), DomainError);
    EXPECT_THROW((void)mb_controlled_field(x, k, State{0, 0, 0, 1e-3, 0}), DomainError);
}

TEST(MaxwellBloch, ConservedQuantitiesHaveZeroDerivative) {
    Rng rng(25);
    for (int i = 0; i < 200; ++i) {
        const State x = rng.vec(5, -3, 3);
        const State f = mb_field(x);
        const double dc1 = 2 * x[2] * f[2] + 2 * x[3] * f[3] + 2 * x[4] * f[4];
        const double dc2 = f[1] * x[2] + x[1] * f[2] - f[0] * x[3] - x[0] * f[3];
        EXPECT_LE(std::abs(dc1), 1e-13);
        EXPECT_LE(std::abs(dc2), 1e-13);
    }
}

TEST(MaxwellBloch, RotationalSymmetry) {
    Rng rng(26);
    for (int i = 0; i < 200; ++i) {
        const State x = rng.vec(5, -2, 2);
        const double th = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const double c = std::cos(th), s = std::sin(th);
        auto rot = [&](const State& v) {
            return State{c * v[0] - s * v[1], s * v[0] + c * v[1], c * v[2] - s * v[3], s * v[2] + c * v[3], v[4]};
        };
        const State lhs = mb_field(rot(x));
        const State rhs = rot(mb_field(x));
        for (std::size_t j = 0; j < 5; ++j) EXPECT_LE(std::abs(lhs[j] - rhs[j]), 1e-12);
    }
}

TEST(MaxwellBloch, LipschitzBoundValues) {
    EXPECT_NEAR(mb_lipschitz_bound(State(5, 0.0), 1e-12), std::numbers::sqrt2, 1e-11);
    EXPECT_NEAR(mb_lipschitz_bound(State{0.6, 0, 0.8, 0, 0}, 0.5), std::numbers::sqrt2 * 6.0, 1e-14);
    EXPECT_THROW((void)mb_lipschitz_bound(State(5, 0.0), 0.0), DomainError);
}

TEST(MaxwellBloch, LipschitzBoundHoldsOnSamples) {
    Rng rng(27);
    const double delta = 1.0;
    std::size_t violations = 0;
    for (int centre = 0; centre < 10; ++centre) {
        const State x0 = rng.vec(5, -2, 2);
        const double l = mb_lipschitz_bound(x0, delta);
        for (int s = 0; s < 50; ++s) {
            State x(5), y(5);
            for (std::size_t i = 0; i < 5; ++i) {
                x[i] = x0[i] + rng.uniform(-delta, delta);
                y[i] = x0[i] + rng.uniform(-delta, delta);
            }
            const State fx = mb_field(x), fy = mb_field(y);
            double df = 0.0, dx = 0.0;
            for (std::size_t i = 0; i < 5; ++i) {
                df += (fx[i] - fy[i]) * (fx[i] - fy[i]);
                dx += (x[i] - y[i]) * (x[i] - y[i]);
            }
            if (std::sqrt(df) > l * std::sqrt(dx)) ++violations;
        }
    }
    EXPECT_EQ(violations, 0u);
}

TEST(MaxwellBloch, ControlledRegistryName) {
    const auto sys = maxwell_bloch_controlled(GainVector::uniform(5, 1.0), E2{0.0});
    EXPECT_EQ(sys.name(), controlled_registry_name);
    EXPECT_EQ(sys.dim(), 5u);
    EXPECT_THROW((void)maxwell_bloch_controlled(GainVector::uniform(4, 1.0), E2{0.0}), DomainError);
}
