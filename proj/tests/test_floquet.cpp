#include "rabitherm/floquet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rabitherm;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(DriveParams, Validation) {
    EXPECT_THROW((DriveParams{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((DriveParams{1.0, -1.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((DriveParams{1.0, 1.0, -0.1}.validate()), std::invalid_argument);
    EXPECT_THROW((DriveParams{1.0, NAN, 0.1}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((DriveParams{1.0, 1.0, 0.0}.validate()));
}

TEST(RabiFrequency, IsHypotenuse) {
    EXPECT_DOUBLE_EQ(rabi_frequency({1.0, 0.5, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(rabi_frequency({1.0, 1.0, 0.3}), 0.3);
    EXPECT_DOUBLE_EQ(rabi_frequency({4.0, 1.0, 4.0}), 5.0);
}

TEST(Regime, Classification) {
    EXPECT_EQ(classify_regime({1.0, 0.5, 1.0}), Regime::LowFrequency);
    EXPECT_EQ(classify_regime({1.0, 2.0, 0.5}), Regime::HighFrequency);
    // omega_c = (F^2 + w0^2)/(2 w0) sits on the boundary.
    EXPECT_EQ(classify_regime({1.0, 1.625, 1.5}), Regime::Boundary);
    EXPECT_EQ(classify_regime({1.0, 1.0, 0.5}), Regime::HighFrequency);
    EXPECT_STREQ(to_string(Regime::LowFrequency), "low");
    EXPECT_STREQ(to_string(Regime::Boundary), "boundary");
}

TEST(MixingAngle, Examples) {
    EXPECT_NEAR(mixing_angle({1.0, 1.0, 0.5}), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(mixing_angle({2.0, 1.0, 1.0}), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(mixing_angle({1.0, 2.0, 1.0}), 3 * std::numbers::pi / 4, 1e-15);
    EXPECT_EQ(mixing_angle({1.0, 0.5, 0.0}), 0.0);
    EXPECT_THROW(mixing_angle({1.0, 1.0, 0.0}), std::domain_error);
}

TEST(MixingAngle, EqualsHalfAngleForm) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int k = 0; k < 200; ++k) {
        const DriveParams p{1.0, u(rng), u(rng)};
        const double rabi = rabi_frequency(p);
        const double alt = 2.0 * std::acos(std::sqrt((rabi + p.detuning()) / (2.0 * rabi)));
        EXPECT_NEAR(mixing_angle(p), alt, 1e-7);
    }
}

TEST(Decompose, QuasienergyLadder) {
    const DriveParams p{1.0, 0.5, 1.0};
    const double rabi = rabi_frequency(p);
    const auto integer = decompose(SpinQuantumNumber(2), p);
    EXPECT_DOUBLE_EQ(integer.quasienergies[0], rabi);
    EXPECT_DOUBLE_EQ(integer.quasienergies[1], 0.0);
    EXPECT_DOUBLE_EQ(integer.quasienergies[2], -rabi);
    const auto half = decompose(SpinQuantumNumber(1), p);
    EXPECT_DOUBLE_EQ(half.quasienergies[0], 0.25 + 0.5 * rabi);
    EXPECT_DOUBLE_EQ(half.quasienergies[1], 0.25 - 0.5 * rabi);
    EXPECT_FALSE(half.labels_reversed);
    EXPECT_TRUE(decompose(SpinQuantumNumber(1), {1.0, 2.0, 1.0}).labels_reversed);
}

TEST(PeriodicPart, IsPeriodic) {
    for (int two_s : {1, 2, 3, 6}) {
        const DriveParams p{1.0, 0.7, 0.4};
        const auto d = decompose(SpinQuantumNumber(two_s), p);
        for (double t : {0.0, 0.3, 2.9, 17.5}) {
            EXPECT_LT(max_abs(periodic_part(d, t + p.period()) - periodic_part(d, t)), 1e-12)
                << "2s=" << two_s << " t=" << t;
        }
        EXPECT_LT(max_abs(periodic_part(d, 0.0) - d.xi), 1e-15);
    }
}

TEST(PeriodicPart, StaysAccurateAtLargeTime) {
    const DriveParams p{1.0, 0.7, 0.4};
    const auto d = decompose(SpinQuantumNumber(3), p);
    const double t = 0.4 + 1e6 * p.period();
    EXPECT_LT(max_abs(periodic_part(d, t) - periodic_part(d, 0.4)), 1e-8);
}

// i dPsi/dt = H(t) Psi checked by a fourth-order central difference.
TEST(FloquetSolution, SolvesSchrodingerEquation) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 12; ++trial) {
        const SpinQuantumNumber s(1 + trial % 5);
        const DriveParams p{1.0, u(rng), u(rng)};
        const auto d = decompose(s, p);
        const double t = u(rng);
        const double h = 1e-3;
        const ComplexMatrix dpsi = (-floquet_solution(d, t + 2 * h) + 8.0 * floquet_solution(d, t + h) -
                                    8.0 * floquet_solution(d, t - h) + floquet_solution(d, t - 2 * h)) /
                                   (12.0 * h);
        const ComplexMatrix lhs = Complex(0.0, 1.0) * dpsi;
        const ComplexMatrix rhs = hamiltonian(s, p, t) * floquet_solution(d, t);
        EXPECT_LT(max_abs(lhs - rhs), 1e-6) << "trial " << trial;
    }
}

TEST(FloquetSolution, IsUnitary) {
    const auto d = decompose(SpinQuantumNumber(5), {1.0, 1.3, 0.8});
    const ComplexMatrix u = floquet_solution(d, 2.2);
    EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(6, 6)), 1e-13);
}

TEST(FoldQuasienergy, RangeAndDistance) {
    EXPECT_DOUBLE_EQ(fold_quasienergy(-0.25, 1.0), 0.75);
    EXPECT_DOUBLE_EQ(fold_quasienergy(2.5, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(fold_quasienergy(1.0, 1.0), 0.0);
    EXPECT_NEAR(quasienergy_distance(0.99, 0.01, 1.0), 0.02, 1e-15);
}

TEST(Monodromy, MatchesAnalyticLadder) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lw(std::log(0.2), std::log(3.0));
    for (int trial = 0; trial < 6; ++trial) {
        const SpinQuantumNumber s(1 + trial % 6);
        const DriveParams p{1.0, std::exp(lw(rng)), std::exp(lw(rng))};
        const auto d = decompose(s, p);
        const auto mono = monodromy_oracle(s, p, 1e-12);
        for (int i = 0; i < s.dim(); ++i) {
            EXPECT_LT(quasienergy_distance(mono.quasienergies[i], d.quasienergies[i], p.omega), 1e-8)
                << "2s=" << s.two_s() << " i=" << i;
        }
        EXPECT_LT(mono.unitarity_drift, 1e-9);
    }
}

TEST(Monodromy, SpinHalfOnResonance) {
    // omega = omega0, F = 0.3: eps = w/2 +- F/2.
    const DriveParams p{1.0, 1.0, 0.3};
    const auto mono = monodromy_oracle(SpinQuantumNumber(1), p, 1e-12);
    EXPECT_LT(quasienergy_distance(mono.quasienergies[0], 0.65, 1.0), 1e-8);
    EXPECT_LT(quasienergy_distance(mono.quasienergies[1], 0.35, 1.0), 1e-8);
}

TEST(Monodromy, RejectsTolerance) {
    EXPECT_THROW(monodromy_oracle(SpinQuantumNumber(1), {1.0, 1.0, 0.3}, 1e-3), std::invalid_argument);
    EXPECT_THROW(monodromy_oracle(SpinQuantumNumber(1), {1.0, 1.0, 0.3}, 1e-15), std::invalid_argument);
}

// Spin-1/2 sum rule: eps_up - eps_down = Omega, eps_up + eps_down = omega.
TEST(Decompose, SpinHalfSumRule) {
    const DriveParams p{1.0, 0.37, 1.9};
    const auto d = decompose(SpinQuantumNumber(1), p);
    EXPECT_NEAR(d.quasienergies[0] - d.quasienergies[1], rabi_frequency(p), 1e-15);
    EXPECT_NEAR(d.quasienergies[0] + d.quasienergies[1], p.omega, 1e-15);
}
