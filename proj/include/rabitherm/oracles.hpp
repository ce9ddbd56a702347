#pragma once

// Brute-force reference routes that share no formulas with the closed forms:
// a generic matrix exponential, numerically Fourier-analyzed Floquet matrix
// elements, the golden-rule rates built from them, a dense null-space solve
// and a direct Floquet-state expectation value.

#include "rabitherm/bath_rates.hpp"
#include "rabitherm/floquet.hpp"
#include "rabitherm/spin_algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rabitherm::oracle {

/// exp(A) by scaling and squaring with a degree-18 Taylor polynomial.
inline ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
    const auto n = a.rows();
    ComplexMatrix result = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= 18; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
    }
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

/// X^{(l)} = (1/T) int_0^T P^dagger(t) X P(t) e^{-i l w t} dt, trapezoidal rule.
inline ComplexMatrix fourier_component(const FloquetDecomposition& d, const ComplexMatrix& x,
                                       int ell, int samples = 1024) {
    const double period = d.drive.period();
    const double dt = period / samples;
    ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
    for (int k = 0; k < samples; ++k) {
        const double t = k * dt;
        const ComplexMatrix pt = periodic_part(d, t);
        acc += (pt.adjoint() * x * pt) * std::exp(Complex(0.0, -ell * d.drive.omega * t));
    }
    return acc / static_cast<double>(samples);
}

struct GoldenRuleRates {
    RealMatrix gamma_plus;
    RealMatrix gamma_minus;
    RealMatrix gamma_total;
};

/// Gamma^{(l)}_{mn}/Gamma0 = |<m|S_x^{(l)}|n>|^2 N(eps_m - eps_n + l w), from
/// numerically Fourier-analyzed matrix elements.  Only l = +-1 are formed;
/// every other component vanishes to quadrature accuracy.
inline GoldenRuleRates golden_rule_rates(SpinQuantumNumber s, const DriveParams& p, double beta,
                                         int samples = 1024) {
    const FloquetDecomposition d = decompose(s, p);
    const ComplexMatrix sx = spin_operators(s).sx;
    const int dim = s.dim();
    GoldenRuleRates out{RealMatrix::Zero(dim, dim), RealMatrix::Zero(dim, dim),
                        RealMatrix::Zero(dim, dim)};
    for (int ell : {1, -1}) {
        const ComplexMatrix v = fourier_component(d, sx, ell, samples);
        RealMatrix& target = ell == 1 ? out.gamma_plus : out.gamma_minus;
        for (int m = 0; m < dim; ++m) {
            for (int n = 0; n < dim; ++n) {
                const double weight = std::norm(v(m, n));
                if (weight < 1e-26) continue;
                const double w = d.quasienergies[m] - d.quasienergies[n] + ell * p.omega;
                target(m, n) = weight * bose_factor(w, beta);
            }
        }
    }
    out.gamma_total = out.gamma_plus + out.gamma_minus;
    return out;
}

/// Null vector of a generator from its SVD, normalized to unit sum.
inline RealVector null_space_distribution(const RealMatrix& gen) {
    Eigen::JacobiSVD<RealMatrix> svd(gen, Eigen::ComputeFullV);
    const auto n = gen.cols();
    RealVector v = svd.matrixV().col(n - 1);
    return v / v.sum();
}

/// sum_m p_m <u_m(t)|S_z|u_m(t)> with p from the null space of the
/// golden-rule generator above.
inline double floquet_expectation_sz(SpinQuantumNumber s, const DriveParams& p, double beta,
                                     double t) {
    const FloquetDecomposition d = decompose(s, p);
    const RealVector prob =
        null_space_distribution(generator(golden_rule_rates(s, p, beta).gamma_total));
    const ComplexMatrix pt = periodic_part(d, t);
    const ComplexMatrix sz_floquet = pt.adjoint() * spin_operators(s).sz * pt;
    double sum = 0.0;
    for (int m = 0; m < s.dim(); ++m) {
        sum += prob(m) * sz_floquet(m, m).real();
    }
    return sum;
}

}  // namespace rabitherm::oracle
