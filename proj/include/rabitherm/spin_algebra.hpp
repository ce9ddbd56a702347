#pragma once

// Spin-s operator algebra and the SU(2) -> SU(2s+1) lift.
//
// Basis ordering is m = s, s-1, ..., -s, so row/column index i carries the
// magnetic number m = s - i.  Half-integers are carried as the integer 2s.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rabitherm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

class SpinQuantumNumber {
public:
    explicit SpinQuantumNumber(int two_s) : two_s_(two_s) {
        if (two_s < 1) {
            throw std::invalid_argument("spin quantum number needs 2s >= 1, got 2s = " +
                                        std::to_string(two_s));
        }
    }

    /// Parses "7/2", "3.5" or "2".
    static SpinQuantumNumber parse(std::string_view text) {
        const std::string str(text);
        std::size_t used = 0;
        if (const auto slash = str.find('/'); slash != std::string::npos) {
            const int num = std::stoi(str.substr(0, slash), &used);
            if (used != slash || str.substr(slash + 1) != "2") {
                throw std::invalid_argument("spin must be written as n/2, got '" + str + "'");
            }
            return SpinQuantumNumber(num);
        }
        const double value = std::stod(str, &used);
        if (used != str.size() || std::abs(2.0 * value - std::round(2.0 * value)) > 1e-12) {
            throw std::invalid_argument("spin must be a multiple of 1/2, got '" + str + "'");
        }
        return SpinQuantumNumber(static_cast<int>(std::lround(2.0 * value)));
    }

    int two_s() const { return two_s_; }
    int dim() const { return two_s_ + 1; }
    double value() const { return 0.5 * two_s_; }
    bool is_integer() const { return two_s_ % 2 == 0; }
    double casimir() const { return value() * (value() + 1.0); }

    /// Magnetic number at basis index i (0 <= i < dim).
    double m(int index) const { return 0.5 * (two_s_ - 2 * index); }

    std::string to_string() const {
        return is_integer() ? std::to_string(two_s_ / 2) : std::to_string(two_s_) + "/2";
    }

    auto operator<=>(const SpinQuantumNumber&) const = default;

private:
    int two_s_;
};

struct SpinOperators {
    ComplexMatrix sx;
    ComplexMatrix sy;
    ComplexMatrix sz;
    ComplexMatrix splus;
    ComplexMatrix sminus;
};

/// Ladder coefficient <m+1|S+|m> linking basis index j to j-1, i.e.
/// sqrt(s(s+1) - n(n+1)) with n = s - j.  The radicand j(2s - j + 1) is an
/// exact integer.
inline double ladder_coefficient(SpinQuantumNumber s, int j) {
    return std::sqrt(static_cast<double>(j) * static_cast<double>(s.two_s() - j + 1));
}

inline SpinOperators spin_operators(SpinQuantumNumber s) {
    const int d = s.dim();
    SpinOperators ops;
    ops.sz = ComplexMatrix::Zero(d, d);
    ops.splus = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        ops.sz(i, i) = s.m(i);
    }
    for (int j = 1; j < d; ++j) {
        ops.splus(j - 1, j) = ladder_coefficient(s, j);
    }
    ops.sminus = ops.splus.adjoint();
    ops.sx = 0.5 * (ops.splus + ops.sminus);
    ops.sy = Complex(0.0, -0.5) * (ops.splus - ops.sminus);
    return ops;
}

/// exp(c * S_z) as a diagonal matrix.
inline ComplexMatrix exp_z(SpinQuantumNumber s, Complex c) {
    const int d = s.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        out(i, i) = std::exp(c * s.m(i));
    }
    return out;
}

/// exp(-i * angle * H) for Hermitian H via its eigendecomposition.
inline ComplexMatrix exp_hermitian(const ComplexMatrix& h, double angle) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition failed");
    }
    const Eigen::VectorXcd phases =
        (Complex(0.0, -angle) * eig.eigenvalues().cast<Complex>()).array().exp();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// exp(-i * angle * S_y).  For s = 1/2 this is ((cos a/2, -sin a/2), (sin a/2, cos a/2)).
inline ComplexMatrix rotation_y(SpinQuantumNumber s, double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("rotation_y: angle must be finite");
    }
    if (angle == 0.0) {
        return ComplexMatrix::Identity(s.dim(), s.dim());
    }
    // The rotation is real; drop the round-off imaginary part.
    return exp_hermitian(spin_operators(s).sy, angle).real().cast<Complex>();
}

/// exp(-i * angle * n.S) for a unit axis n.
inline ComplexMatrix lifted_rotation(SpinQuantumNumber s, const Eigen::Vector3d& axis,
                                     double angle) {
    const SpinOperators ops = spin_operators(s);
    const Eigen::Vector3d n = axis.normalized();
    const ComplexMatrix generator = n.x() * ops.sx + n.y() * ops.sy + n.z() * ops.sz;
    return exp_hermitian(generator, angle);
}

/// One SU(2) factor exp(-i * angle * n.sigma/2) given by generator data.
struct Su2Factor {
    Eigen::Vector3d axis;
    double angle;
};

inline Eigen::Matrix2cd su2_element(const Su2Factor& f) {
    const Eigen::Vector3d n = f.axis.normalized();
    const double c = std::cos(0.5 * f.angle);
    const double sn = std::sin(0.5 * f.angle);
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd u;
    u(0, 0) = c - i * sn * n.z();
    u(0, 1) = -i * sn * Complex(n.x(), -n.y());
    u(1, 0) = -i * sn * Complex(n.x(), n.y());
    u(1, 1) = c + i * sn * n.z();
    return u;
}

/// Irrep R^(s) of an SU(2) element, through its z-y-z Euler form
/// u = exp(-i a s_z) exp(-i b s_y) exp(-i c s_z).  The half-angle phases are
/// read off u itself, so the sign of -1 in SU(2) is carried correctly for
/// half-integer s.
inline ComplexMatrix lift(SpinQuantumNumber s, const Eigen::Matrix2cd& u) {
    const double abs_a = std::abs(u(0, 0));
    const double abs_c = std::abs(u(1, 0));
    const double beta = 2.0 * std::atan2(abs_c, abs_a);
    const double half_sum = abs_a > 1e-300 ? -std::arg(u(0, 0)) : 0.0;   // (a+c)/2
    const double half_diff = abs_c > 1e-300 ? std::arg(u(1, 0)) : 0.0;   // (a-c)/2
    const double alpha = half_sum + half_diff;
    const double gamma = half_sum - half_diff;
    return exp_z(s, Complex(0.0, -alpha)) * rotation_y(s, beta) * exp_z(s, Complex(0.0, -gamma));
}

struct LiftCheck {
    bool ok;
    double max_deviation;
};

/// Compares lift(u1 u2 ... uk) with lift(u1) lift(u2) ... lift(uk).  The
/// factor lifts exponentiate the lifted generators; the product lift goes
/// through the Euler decomposition, so the two sides share no code path
/// beyond exp_z/rotation_y.
inline LiftCheck lift_product_check(SpinQuantumNumber s, std::span<const Su2Factor> factors,
                                    double tol = 1e-12) {
    const int d = s.dim();
    Eigen::Matrix2cd product = Eigen::Matrix2cd::Identity();
    ComplexMatrix lifted_product = ComplexMatrix::Identity(d, d);
    for (const auto& f : factors) {
        product = product * su2_element(f);
        lifted_product = lifted_product * lifted_rotation(s, f.axis, f.angle);
    }
    const double dev = (lift(s, product) - lifted_product).cwiseAbs().maxCoeff();
    return {dev <= tol, dev};
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

}  // namespace rabitherm
