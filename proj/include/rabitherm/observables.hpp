#pragma once

// Quasithermal magnetization and the dissipation rate of the driven spin.

#include "rabitherm/bath_rates.hpp"
#include "rabitherm/errors.hpp"
#include "rabitherm/floquet.hpp"
#include "rabitherm/steadystate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rabitherm {

/// B_J(y) = a coth(a y) - b coth(b y), a = (2J+1)/(2J), b = 1/(2J).
/// Evaluated on |y| and signed, so B_J(-y) = -B_J(y) exactly.
inline double brillouin(SpinQuantumNumber j, double y) {
    const double a = (j.two_s() + 1.0) / j.two_s();
    const double b = 1.0 / j.two_s();
    const double ay = std::abs(y);
    double value;
    if (a * ay < 0.1) {
        // coth z - 1/z = z/3 - z^3/45 + 2z^5/945 - z^7/4725 + 2z^9/93555
        const double a2 = a * a, b2 = b * b, y2 = ay * ay;
        double an = a2, bn = b2;  // a^{2k}, b^{2k}
        const double coef[] = {1.0 / 3, -1.0 / 45, 2.0 / 945, -1.0 / 4725, 2.0 / 93555};
        double yp = ay;
        value = 0.0;
        for (double c : coef) {
            value += c * (an - bn) * yp;
            an *= a2;
            bn *= b2;
            yp *= y2;
        }
    } else {
        value = a / std::tanh(a * ay) - b / std::tanh(b * ay);
    }
    return std::copysign(value, y);
}

/// <M>/M0 = B_J(y0) for the undriven paramagnet.
inline double thermal_magnetization(SpinQuantumNumber j, double y0) { return brillouin(j, y0); }

/// <S_z>_q = (delta/Omega) sum_m m p_m, constant in time.
inline double quasithermal_sz(SpinQuantumNumber s, const DriveParams& p, double beta) {
    const RateRatio r = rate_ratio(p, beta);
    const double x = -r.log_q;  // theta Omega
    const double mean_m = -s.value() * brillouin(s, s.value() * x);
    return p.detuning() / rabi_frequency(p) * mean_m;
}

struct MagnetizationPoint {
    double sz_q;
    double m_thermal;    // <M>/M0
    double m_quasi;      // <M>_q/M0
    double m1_over_m0;   // (omega0 - omega)/Omega
    double y0;
    double y1;
    Regime regime;
};

inline MagnetizationPoint quasithermal_magnetization(SpinQuantumNumber j, const DriveParams& p,
                                                     double beta) {
    const RateRatio r = rate_ratio(p, beta);
    const double jv = j.value();
    const double m1 = p.detuning() / rabi_frequency(p);
    const double y1 = -r.log_q * jv;  // theta Omega J
    const double y0 = beta * p.omega0 * jv;
    const double bq = brillouin(j, y1);
    return {-m1 * jv * bq, brillouin(j, y0), m1 * bq, m1, y0, y1, r.regime};
}

struct DerivativeCheck {
    double residual;
    double derivative;  // (1/J) d(ln Z_q / theta)/d omega0 at fixed theta
    double expected;    // m_quasi
    bool skipped;
    std::string diagnostic;
};

/// Checks <M>_q/M0 = (1/J) d(k tau ln Z_q)/d omega0 with tau held fixed and
/// Omega varying through omega0.  Central differences with relative step h,
/// one Richardson halving.  Points within 1e-3 omega0 of omega0 or omega_c,
/// where tau diverges, are skipped.
inline DerivativeCheck partition_derivative_check(SpinQuantumNumber j, const DriveParams& p,
                                                  double beta, double h = 1e-5) {
    const MagnetizationPoint mp = quasithermal_magnetization(j, p, beta);
    const double near = 1e-3 * p.omega0;
    if (std::abs(p.omega - p.omega0) < near) {
        return {0.0, 0.0, mp.m_quasi, true, "skipped: omega within 1e-3 omega0 of omega0"};
    }
    if (std::abs(p.omega - critical_frequency(p)) < near) {
        return {0.0, 0.0, mp.m_quasi, true, "skipped: omega within 1e-3 omega0 of omega_c"};
    }
    const double theta = quasitemperature(p, beta);
    if (theta == 0.0) {
        return {0.0, 0.0, mp.m_quasi, true, "skipped: theta = 0"};
    }
    const double step = h * p.omega0;
    if (!(step > 1e-12 * p.omega0)) {
        throw NumericalError("partition_derivative_check: step underflow");
    }
    const double log_dim = std::log(static_cast<double>(j.dim()));
    // ln(2J+1) is subtracted so the 1/theta prefactor does not amplify rounding.
    auto g = [&](double w0) {
        const DriveParams shifted{w0, p.omega, p.f};
        return (log_partition_function(j, theta * rabi_frequency(shifted)) - log_dim) / theta;
    };
    auto central = [&](double hh) { return (g(p.omega0 + hh) - g(p.omega0 - hh)) / (2.0 * hh); };
    const double coarse = central(step);
    const double fine = central(0.5 * step);
    const double derivative = (4.0 * fine - coarse) / 3.0 / j.value();
    return {std::abs(derivative - mp.m_quasi), derivative, mp.m_quasi, false, ""};
}

struct DissipationSum {
    double r;          // R in units of omega0 Gamma0
    double abs_terms;  // sum of |terms| in the same units; r carries rounding ~eps abs_terms
};

/// Dimensionless dissipation rate R (units omega0 Gamma0) as the direct
/// golden-rule sum R = -sum w^{(l)}_{mn} Gamma^{(l)}_{mn} p_n over all channels,
/// pseudotransitions included, with p the null vector of the generator.  On the
/// omega = Omega boundary p is uniform and w N(w) takes its symmetric limit.
inline DissipationSum dissipation_direct_sum(SpinQuantumNumber s, const DriveParams& p, const BathParams& b) {
    p.validate();
    b.validate();
    const FloquetDecomposition d = decompose(s, p);
    const Regime regime = classify_regime(p);
    const RealVector prob = regime == Regime::Boundary
                                ? RealVector::Constant(s.dim(), 1.0 / s.dim())
                                : RealVector(steady_state(rate_matrix(s, p, b).generator));
    const FourierCoupling v = fourier_coupling(s, p);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int ell : {1, -1}) {
        const ComplexMatrix& vl = ell == 1 ? v.v_plus : v.v_minus;
        for (int n = 0; n < s.dim(); ++n) {
            for (int m = std::max(0, n - 1); m <= std::min(s.dim() - 1, n + 1); ++m) {
                const double weight = std::norm(vl(m, n));
                if (weight == 0.0) continue;
                const double w = transition_frequency(s.m(m), s.m(n), ell, d);
                const double term = weight * bose_weighted_frequency(w, b.beta) * prob(n);
                sum += term;
                abs_sum += std::abs(term);
            }
        }
    }
    return {-sum / p.omega0, abs_sum / p.omega0};
}

inline double dissipation_direct(SpinQuantumNumber s, const DriveParams& p, const BathParams& b) {
    return dissipation_direct_sum(s, p, b).r;
}

namespace detail {

struct DissipationPolynomials {
    double p_over_z;  // P_s/z_s
    double q_over_z;  // Q_s/z_s
};

/// Horner evaluation of P_s = -2 sum (m-s)^2 u^m, Q_s = 1/2 sum (m+1)(2s-m) u^m
/// and z_s = sum u^m for 0 <= u <= 1.
inline DissipationPolynomials dissipation_polynomials(SpinQuantumNumber s, double u) {
    const int n = s.two_s();
    double ps = 0.0, qs = 0.0, zs = 0.0;
    for (int m = n; m >= 0; --m) {
        const double dm = 2.0 * m - n;
        ps = ps * u + (-0.5 * dm * dm);
        zs = zs * u + 1.0;
        if (m < n) {
            qs = qs * u + 0.5 * (m + 1.0) * (n - m);
        }
    }
    return {ps / zs, qs / zs};
}

}  // namespace detail

/// Closed form R = [-P_s w F^2 + Q_s (A+ -+ A-)]/(8 z_s Omega^2), in units of
/// omega0 Gamma0, with
///   A± = (delta ± Omega)^2 (w ± Omega) (q + (q - 1)/(e^{beta(±w + Omega)} - 1)).
/// The upper sign holds for omega < Omega.  Each bracket vanishes as F -> 0, so
/// the difference is not formed numerically: inserting q = e^{-a} N/D from
/// rate_ratio gives, in both regimes,
///   A+ -+ A- = 4 w F^4 sinh(beta w) / D,
/// and every term of R is nonnegative.  P_s and z_s are palindromic, and so is
/// Q_s up to one power of q, so q > 1 is mapped onto 1/q.
inline double dissipation_closed(SpinQuantumNumber s, const DriveParams& p, double beta) {
    const RateRatio r = rate_ratio(p, beta);
    if (r.regime == Regime::Boundary) {
        throw RegimeBoundaryError("dissipation_closed: omega = Omega, use dissipation_direct");
    }
    const double rabi = rabi_frequency(p);
    const bool inverted = r.log_q > 0.0;
    const double u = inverted ? std::exp(-r.log_q) : r.q;
    const detail::DissipationPolynomials poly = detail::dissipation_polynomials(s, u);
    const double q_over_z = inverted ? poly.q_over_z * u : poly.q_over_z;
    const double w = p.omega;
    const double bw = beta * w;
    // log sinh(x) = x + log(1 - e^{-2x}) - log 2
    const double log_sinh = bw + std::log(-std::expm1(-2.0 * bw)) - std::numbers::ln2;
    const double log_den = detail::ratio_log_terms(p, beta).log_den;
    const double f2 = p.f * p.f;
    const double combined = 4.0 * w * f2 * f2 * std::exp(log_sinh - log_den);
    const double numer = -poly.p_over_z * w * f2 + q_over_z * combined;
    return numer / (8.0 * rabi * rabi * p.omega0);
}

struct DissipationPoint {
    double r;         // R in units of omega0 Gamma0
    double r_scaled;  // R/(s^2 + s)
    Regime regime;
};

/// Closed form off the boundary, direct sum on it.
inline DissipationPoint dissipation_point(SpinQuantumNumber s, const DriveParams& p, double beta) {
    const Regime regime = classify_regime(p);
    const double r = regime == Regime::Boundary ? dissipation_direct(s, p, BathParams{beta})
                                                : dissipation_closed(s, p, beta);
    return {r, r / s.casimir(), regime};
}

struct DissipationLimit {
    double r_inf;
    double omega_m;
    double r_m;
};

/// s -> infinity limit of r = R/(s^2+s), and the location and height of its maximum.
inline DissipationLimit scaled_dissipation_limit(const DriveParams& p) {
    p.validate();
    const double dw = p.omega - p.omega0;
    const double denom = p.f * p.f + dw * dw;
    if (denom == 0.0) {
        throw std::domain_error("scaled_dissipation_limit: F = 0 at omega = omega0");
    }
    const double root = std::sqrt((p.f / p.omega0) * (p.f / p.omega0) + 1.0);
    return {p.omega / (4.0 * p.omega0) * p.f * p.f / denom, p.omega0 * root, (1.0 + root) / 8.0};
}

enum class ResonanceShape { Max, Min };

inline const char* to_string(ResonanceShape shape) {
    return shape == ResonanceShape::Max ? "max" : "min";
}

/// Sign of d^2R/d omega^2 at omega = omega0 for a weak drive, from central
/// differences at two step sizes that must agree in sign.
inline ResonanceShape resonance_shape_classifier(SpinQuantumNumber s, double beta, double f_small,
                                                 double omega0 = 1.0) {
    if (!(f_small > 0.0 && f_small <= 0.1 * omega0)) {
        throw std::invalid_argument("resonance_shape_classifier: F/omega0 must lie in (0, 0.1]");
    }
    auto r_at = [&](double w) { return dissipation_closed(s, DriveParams{omega0, w, f_small}, beta); };
    const double r0 = r_at(omega0);
    auto curvature = [&](double h) { return (r_at(omega0 + h) - 2.0 * r0 + r_at(omega0 - h)) / (h * h); };
    const double h = 1e-3 * f_small;
    const double c1 = curvature(h);
    const double c2 = curvature(2.0 * h);
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(r0) / (h * h);
    if (std::abs(c1) <= noise || (c1 > 0.0) != (c2 > 0.0)) {
        throw InconclusiveError("resonance_shape_classifier: curvature " + std::to_string(c1) +
                                " below noise floor " + std::to_string(noise));
    }
    return c1 < 0.0 ? ResonanceShape::Max : ResonanceShape::Min;
}

/// Laboratory inputs for a paramagnetic sample.  g_j must be negative so that
/// omega0 = -g_J mu_B B0/hbar is positive.
struct ParamagnetSample {
    double g_j;
    double b0_tesla;
    double b1_tesla;
    double temperature_kelvin;
    double number_density;  // spins per m^3
};

struct PhysicalMapping {
    DriveParams drive;  // rad/s; omega still has to be set by the caller
    double beta;        // s/rad, hbar/(k_B T)
    double m0;          // saturation magnetization, A/m
};

inline PhysicalMapping map_physical(SpinQuantumNumber j, const ParamagnetSample& sample,
                                    double omega) {
    constexpr double mu_b = 9.2740100783e-24;  // J/T
    constexpr double hbar = 1.054571817e-34;   // J s
    constexpr double k_b = 1.380649e-23;       // J/K
    if (!(sample.g_j < 0.0)) {
        throw std::invalid_argument("map_physical: g_J must be negative");
    }
    if (!(sample.b0_tesla > 0.0 && sample.b1_tesla >= 0.0 && sample.temperature_kelvin > 0.0)) {
        throw std::invalid_argument("map_physical: need B0 > 0, B1 >= 0, T > 0");
    }
    const DriveParams drive{-sample.g_j * mu_b * sample.b0_tesla / hbar, omega,
                            std::abs(sample.g_j) * mu_b * sample.b1_tesla / hbar};
    drive.validate();
    return {drive, hbar / (k_b * sample.temperature_kelvin),
            -sample.number_density * sample.g_j * mu_b * j.value()};
}

}  // namespace rabitherm
