#pragma once

// Golden-rule rates between Floquet states for the coupling V = gamma S_x to
// an oscillator bath with constant spectral density.  Rates are stored in
// units of Gamma0 = 2 pi gamma^2 J0.

#include "rabitherm/errors.hpp"
#include "rabitherm/floquet.hpp"
#include "rabitherm/spin_algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace rabitherm {

struct BathParams {
    double beta;
    double j0 = 1.0;
    double gamma = 1.0;

    void validate() const {
        if (!(std::isfinite(beta) && beta > 0.0)) throw std::invalid_argument("beta must be > 0");
        if (!(std::isfinite(j0) && j0 > 0.0)) throw std::invalid_argument("J0 must be > 0");
        if (!(std::isfinite(gamma) && gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    }
    double gamma0() const { return 2.0 * std::numbers::pi * gamma * gamma * j0; }
};

/// Below this |beta w| the Bose factor switches to its Laurent series.
inline constexpr double kBoseSeriesThreshold = 1e-12;

/// N(w) = 1/(e^{beta w} - 1) for w > 0 and 1/(1 - e^{beta w}) for w < 0.
inline double bose_factor(double omega_tilde, double beta) {
    const double x = beta * omega_tilde;
    if (x == 0.0) {
        throw RegimeBoundaryError("Bose factor diverges at zero frequency");
    }
    if (std::abs(x) < kBoseSeriesThreshold) {
        return 1.0 / std::abs(x) - std::copysign(0.5, x);
    }
    return 1.0 / std::abs(std::expm1(x));
}

/// w N(w), the energy-weighted Bose factor.  It jumps from -1/beta to +1/beta
/// across w = 0; at exactly w = 0 the symmetric value 0 is returned, which is
/// what paired resonant channels with equal weight sum to.
inline double bose_weighted_frequency(double omega_tilde, double beta) {
    const double x = beta * omega_tilde;
    if (x == 0.0) {
        return 0.0;
    }
    if (std::abs(x) < kBoseSeriesThreshold) {
        return std::copysign(1.0, x) / beta - 0.5 * omega_tilde;
    }
    return omega_tilde / std::abs(std::expm1(x));
}

struct FourierCoupling {
    ComplexMatrix v_plus;   // l = +1
    ComplexMatrix v_minus;  // l = -1
};

/// Fourier components V^{(+-1)} = (gamma/2)((delta/Omega) S_x + (F/Omega) S_z +- i S_y)
/// of P^dagger(t) gamma S_x P(t).  All other components vanish.
inline FourierCoupling fourier_coupling(SpinQuantumNumber s, const DriveParams& p,
                                        double gamma = 1.0) {
    p.validate();
    const double rabi = rabi_frequency(p);
    if (rabi == 0.0) {
        throw std::domain_error("fourier_coupling: Omega = 0");
    }
    const SpinOperators ops = spin_operators(s);
    const ComplexMatrix base = (p.detuning() / rabi) * ops.sx + (p.f / rabi) * ops.sz;
    const ComplexMatrix isy = Complex(0.0, 1.0) * ops.sy;
    return {0.5 * gamma * (base + isy), 0.5 * gamma * (base - isy)};
}

/// Pseudotransition frequency w^{(l)}_{mn} for magnetic numbers m, n.
inline double transition_frequency(double m, double n, int ell, const FloquetDecomposition& d) {
    if (ell != 1 && ell != -1) {
        throw std::invalid_argument("transition_frequency: ell must be +1 or -1");
    }
    const double diff = m - n;
    const double lw = ell * d.drive.omega;
    if (diff == 0.0) return lw;
    if (diff == 1.0) return d.rabi + lw;
    if (diff == -1.0) return -d.rabi + lw;
    throw std::invalid_argument("transition_frequency: |m - n| > 1 has no rate");
}

struct RateMatrix {
    RealMatrix gamma_plus;
    RealMatrix gamma_minus;
    RealMatrix gamma_total;
    RealMatrix generator;
    Regime regime;
};

/// Sum of a column range with Neumaier compensation.
inline double compensated_sum(const double* begin, const double* end) {
    double sum = 0.0;
    double c = 0.0;
    for (const double* it = begin; it != end; ++it) {
        const double t = sum + *it;
        if (std::abs(sum) >= std::abs(*it)) {
            c += (sum - t) + *it;
        } else {
            c += (*it - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

/// Gamma~_{mn} = Gamma_{mn} - delta_{mn} sum_k Gamma_{kn}.  Diagonal rates drop out.
inline RealMatrix generator(const RealMatrix& rates) {
    const Eigen::Index d = rates.rows();
    if (rates.cols() != d) {
        throw std::invalid_argument("generator: rate matrix must be square");
    }
    RealMatrix g = rates;
    RealVector column(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i != n) column(k++) = rates(i, n);
        }
        g(n, n) = -compensated_sum(column.data(), column.data() + k);
    }
    return g;
}

inline RealMatrix generator(const RateMatrix& rm) { return generator(rm.gamma_total); }

namespace detail {

/// (Omega + delta, Omega - delta), each formed without cancellation.
inline std::pair<double, double> rabi_sum_difference(const DriveParams& p) {
    const double rabi = rabi_frequency(p);
    const double delta = p.detuning();
    const double f2 = p.f * p.f;
    if (delta >= 0.0) {
        const double plus = rabi + delta;
        return {plus, plus > 0.0 ? f2 / plus : 0.0};
    }
    const double minus = rabi - delta;
    return {minus > 0.0 ? f2 / minus : 0.0, minus};
}

}  // namespace detail

/// Partial rates in units of Gamma0.  Off-diagonal entries follow the closed
/// forms of the regime selected by omega vs Omega; the diagonal carries the
/// pseudotransition rates.  Basis index i carries m = s - i.
inline RateMatrix rate_matrix(SpinQuantumNumber s, const DriveParams& p, const BathParams& b) {
    p.validate();
    b.validate();
    const Regime regime = classify_regime(p);
    if (regime == Regime::Boundary) {
        throw RegimeBoundaryError("rate_matrix: omega = Omega within tolerance (omega = " +
                                  std::to_string(p.omega) + ")");
    }
    const double rabi = rabi_frequency(p);
    if (rabi == 0.0) {
        throw std::domain_error("rate_matrix: Omega = 0");
    }
    const auto [sum, diff] = detail::rabi_sum_difference(p);
    const double beta = b.beta;
    const double w = p.omega;
    const double norm = 16.0 * rabi * rabi;
    const double wsum2 = sum * sum / norm;    // ((Omega + delta)/Omega)^2 / 16
    const double wdiff2 = diff * diff / norm;  // ((Omega - delta)/Omega)^2 / 16
    const double up_p = 1.0 / std::expm1(beta * (rabi + w));  // N(Omega + w)
    const double diag_scale = p.f * p.f / norm;

    // Low: 1/(1 - e^{-beta(Omega -+ w)}); high: +-1/(e^{beta(+-w - Omega)} - 1).
    // Both equal N(-Omega +- w) with the appropriate sign branch.
    double down_p, down_m, up_m;
    if (regime == Regime::LowFrequency) {
        down_p = 1.0 / -std::expm1(-beta * (rabi - w));
        down_m = 1.0 / -std::expm1(-beta * (rabi + w));
        up_m = 1.0 / std::expm1(beta * (rabi - w));
    } else {
        down_p = 1.0 / std::expm1(beta * (w - rabi));
        down_m = -1.0 / std::expm1(beta * (-w - rabi));
        up_m = -1.0 / std::expm1(beta * (rabi - w));
    }
    const double diag_p = 1.0 / std::expm1(beta * w);
    const double diag_m = -1.0 / std::expm1(-beta * w);

    const int d = s.dim();
    RateMatrix rm;
    rm.regime = regime;
    rm.gamma_plus = RealMatrix::Zero(d, d);
    rm.gamma_minus = RealMatrix::Zero(d, d);
    for (int j = 1; j < d; ++j) {
        // Link between m = s - j (index j) and m + 1 (index j - 1).
        const double c2 = static_cast<double>(j) * static_cast<double>(s.two_s() - j + 1);
        rm.gamma_plus(j - 1, j) = c2 * wsum2 * up_p;
        rm.gamma_minus(j - 1, j) = c2 * wdiff2 * up_m;
        rm.gamma_plus(j, j - 1) = c2 * wdiff2 * down_p;
        rm.gamma_minus(j, j - 1) = c2 * wsum2 * down_m;
    }
    for (int i = 0; i < d; ++i) {
        const double two_m = s.two_s() - 2 * i;
        rm.gamma_plus(i, i) = two_m * two_m * diag_scale * diag_p;
        rm.gamma_minus(i, i) = two_m * two_m * diag_scale * diag_m;
    }
    rm.gamma_total = rm.gamma_plus + rm.gamma_minus;
    rm.generator = generator(rm.gamma_total);
    return rm;
}

/// Stationary vector of a tridiagonal generator by the birth-death ratio
/// recursion p_{i-1}/p_i = G(i-1, i)/G(i, i-1), renormalized as it goes.
inline RealVector steady_state(const RealMatrix& gen) {
    const Eigen::Index d = gen.rows();
    if (gen.cols() != d || d == 0) {
        throw std::invalid_argument("steady_state: generator must be square and non-empty");
    }
    RealVector p(d);
    p(d - 1) = 1.0;
    for (Eigen::Index i = d - 1; i >= 1; --i) {
        const double up = gen(i - 1, i);
        const double down = gen(i, i - 1);
        if (!(up > 0.0) || !(down > 0.0)) {
            throw ReducibleGeneratorError(
                "steady_state: vanishing rate on the link between basis indices " +
                std::to_string(i - 1) + " and " + std::to_string(i));
        }
        p(i - 1) = p(i) * (up / down);
        if (p(i - 1) > 1e200) {
            p /= p(i - 1);
        }
    }
    return p / p.sum();
}

}  // namespace rabitherm
