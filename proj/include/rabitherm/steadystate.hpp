#pragma once

// Closed-form quasistationary distribution p_m ∝ q^m, the inverse
// quasitemperature theta = -ln(q)/Omega and its analytic limits.

#include "rabitherm/bath_rates.hpp"
#include "rabitherm/floquet.hpp"
#include "rabitherm/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabitherm {

namespace detail {

inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// log|e^x - 1|, finite for every x != 0.
inline double log_abs_expm1(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x > 0.0) return x + std::log(-std::expm1(-x));
    return std::log(-std::expm1(x));
}

inline double safe_log(double x) {
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

namespace detail {

/// Logs of the positive numerator and denominator of q (see rate_ratio).
struct RatioLogTerms {
    double log_num;
    double log_den;
};

inline RatioLogTerms ratio_log_terms(const DriveParams& p, double beta) {
    const double rabi = rabi_frequency(p);
    // Omega - omega = (omega0 (omega0 - 2 omega) + F^2)/(Omega + omega), free of cancellation.
    const double resid = p.omega0 * (p.omega0 - 2.0 * p.omega) + p.f * p.f;
    const double a_minus_b = beta * resid / (rabi + p.omega);
    const auto [sum, diff] = rabi_sum_difference(p);
    const double a = beta * rabi;
    const double b = beta * p.omega;
    const double log_a_term = 2.0 * safe_log(sum) + log_abs_expm1(a_minus_b);
    const double log_b_term = 2.0 * safe_log(diff) + log_abs_expm1(a + b);
    return {log_add_exp(log_a_term, log_b_term), log_add_exp(log_a_term + b, log_b_term - b)};
}

}  // namespace detail

struct RateRatio {
    double q;
    double log_q;
    Regime regime;
};

/// q = Gamma_{m+1,m}/Gamma_{m,m+1}, independent of m and s.  The low- and
/// high-frequency closed forms are the same rational function of exponentials;
/// it is evaluated here as a ratio of positive terms in the log domain,
///   q = e^{-a} [A|e^{a-b}-1| + B(e^{a+b}-1)] / [A e^{b}|e^{a-b}-1| + B e^{-b}(e^{a+b}-1)]
/// with a = beta Omega, b = beta omega, A = (Omega+delta)^2, B = (Omega-delta)^2.
/// The formula is used inside the Boundary band as well: for weak drives q
/// swings from its static value to 1 over a width ~F^4 around omega_c, far
/// inside the band, so the limit q = 1 is taken only where omega - Omega is
/// below its own rounding error.
inline RateRatio rate_ratio(const DriveParams& p, double beta) {
    p.validate();
    if (!(std::isfinite(beta) && beta > 0.0)) {
        throw std::invalid_argument("rate_ratio: beta must be > 0");
    }
    const Regime regime = classify_regime(p);
    const double rabi = rabi_frequency(p);
    if (rabi == 0.0) {
        throw std::domain_error("rate_ratio: Omega = 0");
    }
    if (p.detuning() == 0.0 && p.omega > rabi) {
        return {1.0, 0.0, regime};  // exact: both terms coincide at delta = 0
    }
    const double resid = p.omega0 * (p.omega0 - 2.0 * p.omega) + p.f * p.f;
    const double noise = 4.0 * std::numeric_limits<double>::epsilon() *
                         (p.omega0 * p.omega0 + 2.0 * p.omega0 * p.omega + p.f * p.f);
    if (std::abs(resid) <= noise) {
        return {1.0, 0.0, regime};
    }
    const detail::RatioLogTerms t = detail::ratio_log_terms(p, beta);
    const double log_q = -beta * rabi + t.log_num - t.log_den;
    return {std::exp(log_q), log_q, regime};
}

/// Inverse quasitemperature theta = -ln(q)/Omega (raw units).
inline double quasitemperature(const DriveParams& p, double beta) {
    return -rate_ratio(p, beta).log_q / rabi_frequency(p);
}

/// ln Z for Z = sum_m e^{-x m} = sinh((2s+1)x/2)/sinh(x/2).
inline double log_partition_function(SpinQuantumNumber s, double x) {
    if (x == 0.0) {
        return std::log(static_cast<double>(s.dim()));
    }
    const double ax = std::abs(x);
    return ax * s.value() + std::log(-std::expm1(-s.dim() * ax)) - std::log(-std::expm1(-ax));
}

/// Z_q as a function of x = theta Omega.  Overflows to +inf beyond the double
/// range; use log_partition_function there.
inline double partition_function(SpinQuantumNumber s, double x) {
    return std::exp(log_partition_function(s, x));
}

struct QuasiDistribution {
    Regime regime;
    double q;
    double log_q;
    RealVector p;  // indexed like the basis, m = s ... -s
    double theta;
    double z_q;
    double log_z_q;
};

inline QuasiDistribution distribution(SpinQuantumNumber s, const DriveParams& p, double beta) {
    const RateRatio r = rate_ratio(p, beta);
    const double theta = -r.log_q / rabi_frequency(p);
    // theta*Omega = -ln q, so p_m = e^{m ln q}/Z.
    const double x = -r.log_q;
    const double log_z = log_partition_function(s, x);
    RealVector prob(s.dim());
    for (int i = 0; i < s.dim(); ++i) {
        prob(i) = std::exp(s.m(i) * r.log_q - log_z);
    }
    return {r.regime, r.q, r.log_q, prob, theta, std::exp(log_z), log_z};
}

/// omega_c = (F^2 + omega0^2)/(2 omega0), where Omega(omega_c) = omega_c.
inline double critical_frequency(const DriveParams& p) {
    return (p.f * p.f + p.omega0 * p.omega0) / (2.0 * p.omega0);
}

/// Small-omega expansion of theta through order 0, 1 or 2 in omega/omega0.
inline double theta_low_freq_series(const DriveParams& p, double beta, int order) {
    if (order < 0 || order > 2) {
        throw std::invalid_argument("theta_low_freq_series: order must be 0, 1 or 2");
    }
    const double x = p.omega / p.omega0;
    const double f2 = (p.f / p.omega0) * (p.f / p.omega0);
    const double b0 = p.omega0 * beta;
    double value = b0;
    if (order >= 1) {
        value += 2.0 * b0 * x / (f2 + 2.0);
    }
    if (order >= 2) {
        const double root = std::sqrt(f2 + 1.0);
        const double coth = 1.0 / std::tanh(0.5 * b0 * root);
        value += b0 * x * x / (2.0 * (f2 + 2.0) * (f2 + 2.0)) *
                 (8.0 - 4.0 * f2 - f2 * f2 * b0 * coth / root);
    }
    return value / p.omega0;
}

/// F -> 0 limit theta = beta/(1 - omega/omega0).
inline double theta_static_limit(const DriveParams& p, double beta) {
    if (p.omega == p.omega0) {
        throw std::domain_error("theta_static_limit: pole at omega = omega0");
    }
    return beta / (1.0 - p.omega / p.omega0);
}

struct StrongDriveAsymptotes {
    double low;
    double high;
};

/// Strong-drive (F >> omega0) asymptotes of theta on both sides of omega_c.
inline StrongDriveAsymptotes theta_strong_drive_asymptotes(const DriveParams& p, double beta) {
    const double x = p.omega / p.omega0;
    const double f = p.f / p.omega0;
    const double b0 = p.omega0 * beta;
    const double low = b0 - p.omega * beta / std::sqrt(f * f + x * x);
    const double high = -b0 / x + b0 * f * f / (2.0 * x * x);
    return {low / p.omega0, high / p.omega0};
}

struct AsymptoteMinimum {
    double omega;
    double theta;
};

/// Minimum of the high-frequency asymptote: omega = omega0 (F/omega0)^2,
/// theta = -omega0^2 beta/(2F^2).
inline AsymptoteMinimum strong_drive_minimum(const DriveParams& p, double beta) {
    const double f = p.f / p.omega0;
    return {p.omega0 * f * f, -p.omega0 * p.omega0 * beta / (2.0 * p.f * p.f)};
}

struct CriticalSlopes {
    double low;
    double high;
};

/// One-sided limits of d theta/d omega at omega_c.  The high-side value is
/// -4 beta w0^3 (F - w0)(F + w0)/(F^4 (F^2 + w0^2)); it is negative for
/// F > w0, where theta turns negative just above omega_c.
inline CriticalSlopes theta_slopes_at_critical(const DriveParams& p, double beta) {
    if (!(p.f > 0.0)) {
        throw std::domain_error("theta_slopes_at_critical: needs F > 0");
    }
    const double w0 = p.omega0;
    const double w03 = w0 * w0 * w0;
    const double f2 = p.f * p.f;
    const double f4 = f2 * f2;
    const double s2 = f2 + w0 * w0;
    const double low = -4.0 * beta * w03 * (f4 + w0 * w0 * w0 * w0) / (f4 * s2 * s2);
    const double high = -4.0 * beta * w03 * (p.f - w0) * (p.f + w0) / (f4 * s2);
    return {low, high};
}

}  // namespace rabitherm
