#include "rabitherm/observables.hpp"
#include "rabitherm/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace rabitherm;

TEST(Brillouin, FrozenValuesAndSeriesJoin) {
    const SpinQuantumNumber j(7);
    EXPECT_NEAR(brillouin(j, 1e-3), 4.285713906705587e-4, 1e-18);
    EXPECT_NEAR(brillouin(j, 0.5), 0.20969081292923115, 1e-16);
    // a = 8/7, so the series switches at y = 0.0875; both sides stay on the exact curve.
    const double edge = 0.1 * 7.0 / 8.0;
    EXPECT_NEAR(brillouin(j, edge * (1 - 1e-12)), 0.03747463353816002, 4e-16);
    EXPECT_NEAR(brillouin(j, edge * (1 + 1e-12)), 0.03747463353823487, 4e-16);
    EXPECT_NEAR(brillouin(j, 20.0), 0.9990544508848185, 4e-16);
    EXPECT_EQ(brillouin(j, 0.0), 0.0);
}

TEST(Brillouin, OddBoundedMonotone) {
    for (int two_j : {1, 2, 7, 50}) {
        const SpinQuantumNumber j(two_j);
        double prev = -1.0;
        for (double y = -30.0; y <= 30.0; y += 0.37) {
            const double b = brillouin(j, y);
            EXPECT_EQ(b, -brillouin(j, -y));
            EXPECT_LE(std::abs(b), 1.0);
            if (std::abs(y) < 5.0) {
                EXPECT_GT(b, prev);
            } else {
                EXPECT_GE(b, prev);
            }
            prev = b;
        }
    }
    // B_{1/2}(y) = tanh(y)
    EXPECT_NEAR(brillouin(SpinQuantumNumber(1), 0.7), std::tanh(0.7), 1e-15);
}

TEST(Magnetization, FrozenSpinOneValues) {
    const auto mp = quasithermal_magnetization(SpinQuantumNumber(2), {1.0, 1.5, 2.0}, 1.0);
    EXPECT_NEAR(mp.sz_q, 0.10553548134606067, 1e-15);
    EXPECT_NEAR(mp.m_thermal, 0.5752103826044414, 1e-15);
    EXPECT_NEAR(mp.m_quasi / mp.m_thermal, -0.18347283800444702, 1e-14);
}

TEST(Magnetization, VanishesOnSpecialCurves) {
    const SpinQuantumNumber j(5);
    EXPECT_EQ(quasithermal_magnetization(j, {1.0, 1.0, 0.4}, 1.0).m_quasi, 0.0);
    const double wc = critical_frequency({1.0, 0.0, 1.7});
    EXPECT_EQ(quasithermal_magnetization(j, {1.0, wc, 1.7}, 1.0).m_quasi, 0.0);
}

TEST(Magnetization, AgreesWithFloquetExpectation) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lw(std::log(0.1), std::log(4.0));
    for (int trial = 0; trial < 8; ++trial) {
        const SpinQuantumNumber s(1 + trial % 4);
        const DriveParams p{1.0, std::exp(lw(rng)), std::exp(lw(rng))};
        if (std::abs(p.omega - rabi_frequency(p)) < 1e-3) continue;
        const double beta = std::exp(lw(rng));
        const double sz = quasithermal_sz(s, p, beta);
        for (double t : {0.0, 1.3}) {
            EXPECT_NEAR(oracle::floquet_expectation_sz(s, p, beta, t), sz, 1e-9);
        }
    }
}

TEST(Magnetization, PartitionDerivativeIdentity) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> lw(std::log(0.1), std::log(4.0));
    int done = 0;
    while (done < 20) {
        const SpinQuantumNumber j(1 + done % 7);
        const DriveParams p{1.0, std::exp(lw(rng)), std::exp(lw(rng))};
        if (classify_regime(p) == Regime::Boundary) continue;
        const auto chk = partition_derivative_check(j, p, std::exp(lw(rng)));
        if (chk.skipped) continue;
        EXPECT_LT(chk.residual, 1e-6) << chk.derivative << " vs " << chk.expected;
        ++done;
    }
}

TEST(Magnetization, DerivativeCheckSkipsNearPoles) {
    EXPECT_TRUE(partition_derivative_check(SpinQuantumNumber(2), {1.0, 1.0005, 0.5}, 1.0).skipped);
}

TEST(Dissipation, FrozenValues) {
    struct Case { int two_s; double w, f, beta, r; };
    const Case cases[] = {{1, 0.5, 0.5, 1.0, 0.025450291297581662},
                          {2, 0.5, 0.5, 1.0, 0.07196373668613205},
                          {2, 2.0, 0.5, 1.0, 0.07892682173888843},
                          {20, 0.5, 0.5, 1.0, 6.032781203093565},
                          {7, 1.3, 0.2, 0.7, 0.8504516073821457}};
    for (const auto& c : cases) {
        const SpinQuantumNumber s(c.two_s);
        const DriveParams p{1.0, c.w, c.f};
        EXPECT_NEAR(dissipation_closed(s, p, c.beta), c.r, 1e-13 * c.r) << "2s=" << c.two_s;
        EXPECT_NEAR(dissipation_direct(s, p, BathParams{c.beta}), c.r, 1e-12 * c.r) << "2s=" << c.two_s;
    }
}

// Weak drive at high temperature: R ~ F^2 while single channel terms are ~1/beta.
TEST(Dissipation, WeakDriveHighTemperatureFrozenValues) {
    const DriveParams p{1.0, 0.15482358270050053, 0.01147850820440843};
    const double beta = 0.12738230933371134;
    struct Case { int two_s; double r; };
    const Case cases[] = {{3, 8.98014538900868626e-6}, {8, 4.9508241268270496e-5}, {16, 1.9507184047169742e-4}};
    for (const auto& c : cases) {
        const SpinQuantumNumber s(c.two_s);
        EXPECT_NEAR(dissipation_closed(s, p, beta), c.r, 1e-14 * c.r) << "2s=" << c.two_s;
        const DissipationSum direct = dissipation_direct_sum(s, p, BathParams{beta});
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * direct.abs_terms;
        EXPECT_NEAR(direct.r, c.r, 1e-10 * c.r + floor) << "2s=" << c.two_s;
    }
}

TEST(Dissipation, ClosedMatchesDirectAndIsPositive) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> lw(std::log(0.05), std::log(5.0));
    for (int trial = 0; trial < 100; ++trial) {
        const SpinQuantumNumber s(1 + trial % 20);
        const DriveParams p{1.0, std::exp(lw(rng)), std::exp(lw(rng))};
        if (std::abs(p.omega - rabi_frequency(p)) < 1e-3) continue;
        const double beta = std::exp(lw(rng));
        const double closed = dissipation_closed(s, p, beta);
        EXPECT_GT(closed, 0.0);
        EXPECT_NEAR(dissipation_direct(s, p, BathParams{beta}), closed, 1e-10 * closed);
    }
}

TEST(Dissipation, SpecialCurvesAreBetaIndependent) {
    for (int two_s : {1, 2, 20}) {
        const SpinQuantumNumber s(two_s);
        const double expected = s.casimir() / 6.0;
        for (double beta : {0.3, 2.0}) {
            EXPECT_NEAR(dissipation_point(s, {1.0, 1.0, 0.5}, beta).r, expected, 1e-8 * expected);
            const double wc = critical_frequency({1.0, 0.0, 0.5});
            EXPECT_NEAR(dissipation_point(s, {1.0, wc, 0.5}, beta).r, expected, 1e-8 * expected);
        }
    }
    EXPECT_NEAR(dissipation_point(SpinQuantumNumber(20), {1.0, 1.0, 0.5}, 1.0).r, 55.0 / 3.0, 1e-10);
}

TEST(Dissipation, ClosedThrowsOnBoundary) {
    EXPECT_THROW(dissipation_closed(SpinQuantumNumber(1), {1.0, 1.625, 1.5}, 1.0), RegimeBoundaryError);
}

TEST(Dissipation, LargeSpinConvergesMonotonically) {
    const DriveParams p{1.0, 1.3, 0.25};
    const double r_inf = scaled_dissipation_limit(p).r_inf;
    double prev_gap = INFINITY;
    for (int two_s : {10, 20, 40, 100, 400}) {
        const double gap = std::abs(dissipation_point(SpinQuantumNumber(two_s), p, 1.0).r_scaled - r_inf);
        EXPECT_LT(gap, prev_gap) << "2s=" << two_s;
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 0.01);
}

TEST(Dissipation, LimitExamples) {
    const auto lim = scaled_dissipation_limit({1.0, 1.0, 0.25});
    EXPECT_NEAR(lim.omega_m, 1.0307764064044151, 1e-15);
    EXPECT_NEAR(lim.r_m, 0.2538470508005519, 1e-15);
    EXPECT_NEAR(lim.r_inf, 0.25, 1e-15);
    EXPECT_THROW(scaled_dissipation_limit({1.0, 1.0, 0.0}), std::domain_error);
}

TEST(ResonanceShape, TransitionAtSevenHalves) {
    EXPECT_EQ(resonance_shape_classifier(SpinQuantumNumber(1), 1.0, 0.05), ResonanceShape::Max);
    EXPECT_EQ(resonance_shape_classifier(SpinQuantumNumber(2), 1.0, 0.05), ResonanceShape::Max);
    EXPECT_EQ(resonance_shape_classifier(SpinQuantumNumber(7), 1.0, 0.05), ResonanceShape::Max);
    EXPECT_EQ(resonance_shape_classifier(SpinQuantumNumber(8), 1.0, 0.05), ResonanceShape::Min);
    EXPECT_EQ(resonance_shape_classifier(SpinQuantumNumber(20), 1.0, 0.05), ResonanceShape::Min);
    EXPECT_THROW(resonance_shape_classifier(SpinQuantumNumber(1), 1.0, 0.5), std::invalid_argument);
}

TEST(PhysicalMapping, Units) {
    const ParamagnetSample sample{-2.0, 1.0, 0.01, 4.2, 1e27};
    const auto m = map_physical(SpinQuantumNumber(7), sample, 1e11);
    EXPECT_NEAR(m.drive.omega0, 1.7588e11, 1e8);
    EXPECT_NEAR(m.drive.f / m.drive.omega0, 0.01, 1e-15);
    EXPECT_NEAR(m.beta, 1.054571817e-34 / (1.380649e-23 * 4.2), 1e-25);
    EXPECT_GT(m.m0, 0.0);
    EXPECT_THROW(map_physical(SpinQuantumNumber(1), {2.0, 1.0, 0.0, 1.0, 1.0}, 1.0), std::invalid_argument);
}
