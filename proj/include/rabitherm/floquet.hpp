#pragma once

// Floquet decomposition of the circularly polarized Rabi problem
// H(t) = w0 S_z + F (S_x cos wt + S_y sin wt) for arbitrary spin.

#include "rabitherm/errors.hpp"
#include "rabitherm/ode.hpp"
#include "rabitherm/spin_algebra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabitherm {

struct DriveParams {
    double omega0;
    double omega;
    double f;

    void validate() const {
        if (!(std::isfinite(omega0) && omega0 > 0.0)) {
            throw std::invalid_argument("omega0 must be finite and > 0");
        }
        if (!(std::isfinite(omega) && omega > 0.0)) {
            throw std::invalid_argument("omega must be finite and > 0");
        }
        if (!(std::isfinite(f) && f >= 0.0)) {
            throw std::invalid_argument("drive amplitude F must be finite and >= 0");
        }
    }
    double period() const { return 2.0 * std::numbers::pi / omega; }
    double detuning() const { return omega0 - omega; }
};

inline double rabi_frequency(const DriveParams& p) { return std::hypot(p.detuning(), p.f); }

/// Relative width of the omega = Omega band treated as the regime boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

enum class Regime { LowFrequency, HighFrequency, Boundary };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::LowFrequency: return "low";
        case Regime::HighFrequency: return "high";
        case Regime::Boundary: return "boundary";
    }
    return "?";
}

inline Regime classify_regime(const DriveParams& p) {
    const double rabi = rabi_frequency(p);
    if (std::abs(p.omega - rabi) <= kBoundaryTolerance * p.omega) {
        return Regime::Boundary;
    }
    return p.omega < rabi ? Regime::LowFrequency : Regime::HighFrequency;
}

/// lambda in [0, pi] with cos(lambda) = delta/Omega, sin(lambda) = F/Omega.
inline double mixing_angle(const DriveParams& p) {
    p.validate();
    if (rabi_frequency(p) == 0.0) {
        throw std::domain_error("mixing angle undefined at F = 0, omega = omega0 (Omega = 0)");
    }
    return std::atan2(p.f, p.detuning());
}

/// For omega > omega0 the ladder order is inverted relative to the static
/// levels in the F -> 0 limit.  Informational only.
inline bool labels_reversed(const DriveParams& p) { return p.omega > p.omega0; }

struct FloquetDecomposition {
    SpinQuantumNumber s;
    DriveParams drive;
    double delta;
    double rabi;
    double lambda;
    std::vector<double> quasienergies;  // indexed like the basis, m = s ... -s
    ComplexMatrix g_matrix;
    ComplexMatrix xi;  // P(0) = exp(-i lambda S_y)
    bool labels_reversed;
};

inline FloquetDecomposition decompose(SpinQuantumNumber s, const DriveParams& p) {
    const double lambda = mixing_angle(p);
    const double rabi = rabi_frequency(p);
    const double offset = s.is_integer() ? 0.0 : 0.5 * p.omega;
    std::vector<double> eps(s.dim());
    ComplexMatrix g = ComplexMatrix::Zero(s.dim(), s.dim());
    for (int i = 0; i < s.dim(); ++i) {
        eps[i] = offset + s.m(i) * rabi;
        g(i, i) = eps[i];
    }
    return {s, p, p.detuning(), rabi, lambda, std::move(eps), std::move(g),
            rotation_y(s, lambda), labels_reversed(p)};
}

/// P(t) = [e^{i w t/2}] exp(-i w t S_z) exp(-i lambda S_y); the bracketed phase
/// appears for half-integer s and makes P exactly T-periodic.
inline ComplexMatrix periodic_part(const FloquetDecomposition& d, double t) {
    const double omega = d.drive.omega;
    // Reduce the phase argument to one period so large t keeps full accuracy.
    const double tr = std::fmod(t, 2.0 * d.drive.period());
    ComplexMatrix out = exp_z(d.s, Complex(0.0, -omega * tr)) * d.xi;
    if (!d.s.is_integer()) {
        out *= std::exp(Complex(0.0, 0.5 * omega * tr));
    }
    return out;
}

/// Full Floquet solution matrix P(t) exp(-i G t).
inline ComplexMatrix floquet_solution(const FloquetDecomposition& d, double t) {
    Eigen::VectorXcd phases(d.s.dim());
    for (int i = 0; i < d.s.dim(); ++i) {
        phases(i) = std::exp(Complex(0.0, -d.quasienergies[i] * t));
    }
    return periodic_part(d, t) * phases.asDiagonal();
}

inline ComplexMatrix hamiltonian(const SpinOperators& ops, const DriveParams& p, double t) {
    const double wt = p.omega * t;
    return p.omega0 * ops.sz + p.f * (std::cos(wt) * ops.sx + std::sin(wt) * ops.sy);
}

inline ComplexMatrix hamiltonian(SpinQuantumNumber s, const DriveParams& p, double t) {
    return hamiltonian(spin_operators(s), p, t);
}

/// Representative of e in [0, omega).
inline double fold_quasienergy(double e, double omega) {
    double r = std::fmod(e, omega);
    if (r < 0.0) {
        r += omega;
    }
    return r >= omega ? 0.0 : r;
}

/// Distance between two quasienergies on the circle of circumference omega.
inline double quasienergy_distance(double a, double b, double omega) {
    const double d = fold_quasienergy(a - b, omega);
    return std::min(d, omega - d);
}

struct MonodromyResult {
    std::vector<double> quasienergies;  // folded to [0, omega), matched to the basis labels
    ComplexMatrix monodromy;            // U(T) = Psi(T) Psi(0)^{-1}
    double unitarity_drift;
    long steps;
};

/// Integrates i dU/dt = H(t) U over one period and diagonalizes U(T).  Each
/// eigenvalue exp(-i eps T) is assigned to the analytic Floquet vector
/// P(0)|m> it overlaps most.
inline MonodromyResult monodromy_oracle(SpinQuantumNumber s, const DriveParams& p, double tol) {
    p.validate();
    if (!(tol > 1e-14 && tol < 1e-4)) {
        throw std::invalid_argument("monodromy_oracle: tol must lie in (1e-14, 1e-4)");
    }
    const SpinOperators ops = spin_operators(s);
    const int d = s.dim();
    const double period = p.period();
    const Complex minus_i(0.0, -1.0);
    auto rhs = [&](double t, const ComplexMatrix& u) -> ComplexMatrix {
        return minus_i * (hamiltonian(ops, p, t) * u);
    };
    StepControl ctl;
    ctl.rtol = tol;
    ctl.atol = tol;
    ctl.initial_step = period * 1e-3;
    auto res = integrate_dopri5(rhs, 0.0, ComplexMatrix::Identity(d, d).eval(), period, ctl);
    const ComplexMatrix& u = res.state;
    const double drift = (u.adjoint() * u - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    // Round-off drift accumulates about linearly in the step count, so the
    // guard allows tol per step on top of a fixed margin.
    if (drift > tol * (100.0 + static_cast<double>(res.accepted))) {
        std::ostringstream msg;
        msg << "monodromy propagator lost unitarity: drift " << drift << " after " << res.accepted
            << " steps";
        throw NumericalError(msg.str());
    }

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(u);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("monodromy eigendecomposition failed");
    }
    const ComplexMatrix xi = rotation_y(s, mixing_angle(p));
    const RealMatrix overlap = (xi.adjoint() * eig.eigenvectors()).cwiseAbs2();

    // Greedy assignment by largest overlap.
    std::vector<int> label_of(d, -1);
    std::vector<bool> used(d, false);
    for (int round = 0; round < d; ++round) {
        double best = -1.0;
        int bm = 0, bk = 0;
        for (int m = 0; m < d; ++m) {
            if (label_of[m] >= 0) continue;
            for (int k = 0; k < d; ++k) {
                if (!used[k] && overlap(m, k) > best) {
                    best = overlap(m, k);
                    bm = m;
                    bk = k;
                }
            }
        }
        label_of[bm] = bk;
        used[bk] = true;
    }

    std::vector<double> eps(d);
    for (int m = 0; m < d; ++m) {
        eps[m] = fold_quasienergy(-std::arg(eig.eigenvalues()(label_of[m])) / period, p.omega);
    }
    return {std::move(eps), u, drift, res.accepted};
}

}  // namespace rabitherm
