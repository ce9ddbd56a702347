#pragma once

// `verify`: every oracle cross-check on seeded random points, one record per
// check with its largest residual.

#include "cli/output.hpp"
#include "cli/parallel.hpp"
#include "rabitherm/rabitherm.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabitherm::cli {

struct VerifyOptions {
    int points = 50;
    double tol_scale = 1.0;
};

struct CheckResult {
    std::string name;
    int points;
    double max_residual;
    double tolerance;
    bool pass;
};

namespace detail {

/// Deterministic point source; every check draws from its own stream.
class Sampler {
public:
    Sampler(std::uint64_t seed, std::uint64_t stream) : rng_(seed * 0x9E3779B97F4A7C15ULL + stream) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    SpinQuantumNumber spin(std::initializer_list<int> two_s) {
        const int k = integer(0, static_cast<int>(two_s.size()) - 1);
        return SpinQuantumNumber(*(two_s.begin() + k));
    }

    /// Drive and beta away from omega = Omega and from Omega = 0.
    std::pair<DriveParams, double> drive() {
        while (true) {
            const DriveParams p{1.0, log_uniform(0.05, 5.0), log_uniform(0.01, 5.0)};
            const double beta = log_uniform(0.1, 5.0);
            if (std::abs(p.omega - rabi_frequency(p)) > 1e-3 * p.omega) return {p, beta};
        }
    }

    Eigen::Vector3d unit_vector() {
        Eigen::Vector3d v(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
        while (v.norm() < 1e-3) v = Eigen::Vector3d(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
        return v.normalized();
    }

private:
    std::mt19937_64 rng_;
};

inline double relative(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace detail

using CheckFn = std::function<double(detail::Sampler&)>;

struct CheckSpec {
    std::string name;
    double tolerance;
    int max_points;  // cap for expensive checks; 0 means no cap
    CheckFn residual;
};

inline std::vector<CheckSpec> verify_checks() {
    using detail::Sampler;
    std::vector<CheckSpec> checks;

    checks.push_back({"lift_product", 1e-12, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 5, 6});
        std::vector<Su2Factor> factors;
        for (int k = 0; k < 3; ++k) factors.push_back({smp.unit_vector(), smp.uniform(-4.0, 4.0)});
        return lift_product_check(s, factors, 1e-12).max_deviation;
    }});

    checks.push_back({"commutation_casimir", 1e-12, 0, [](Sampler& smp) {
        const SpinQuantumNumber s(smp.integer(1, 100));
        const SpinOperators ops = spin_operators(s);
        const Complex i(0.0, 1.0);
        double dev = (commutator(ops.sx, ops.sy) - i * ops.sz).cwiseAbs().maxCoeff();
        dev = std::max(dev, (commutator(ops.sy, ops.sz) - i * ops.sx).cwiseAbs().maxCoeff());
        dev = std::max(dev, (commutator(ops.sz, ops.sx) - i * ops.sy).cwiseAbs().maxCoeff());
        const ComplexMatrix cas = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
        const ComplexMatrix id = ComplexMatrix::Identity(s.dim(), s.dim());
        return std::max(dev, (cas - s.casimir() * id).cwiseAbs().maxCoeff() / s.casimir());
    }});

    checks.push_back({"conjugation_identities", 1e-12, 0, [](Sampler& smp) {
        const SpinQuantumNumber s(smp.integer(1, 10));
        const auto [p, beta] = smp.drive();
        (void)beta;
        const double rabi = rabi_frequency(p);
        const double c = p.detuning() / rabi, sn = p.f / rabi;
        const ComplexMatrix xi = rotation_y(s, mixing_angle(p));
        const SpinOperators o = spin_operators(s);
        double dev = (xi.adjoint() * o.sx * xi - (c * o.sx + sn * o.sz)).cwiseAbs().maxCoeff();
        dev = std::max(dev, (xi.adjoint() * o.sy * xi - o.sy).cwiseAbs().maxCoeff());
        dev = std::max(dev, (xi.adjoint() * o.sz * xi - (c * o.sz - sn * o.sx)).cwiseAbs().maxCoeff());
        return dev;
    }});

    checks.push_back({"monodromy_vs_analytic", 1e-8, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 5, 6});
        const auto [p, beta] = smp.drive();
        (void)beta;
        const MonodromyResult mono = monodromy_oracle(s, p, 1e-12);
        const FloquetDecomposition d = decompose(s, p);
        double dev = 0.0;
        for (int m = 0; m < s.dim(); ++m) {
            dev = std::max(dev, quasienergy_distance(mono.quasienergies[m], d.quasienergies[m], p.omega));
        }
        return dev;
    }});

    checks.push_back({"floquet_defining_property", 1e-6, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 7});
        const auto [p, beta] = smp.drive();
        (void)beta;
        const FloquetDecomposition d = decompose(s, p);
        const double t = smp.uniform(0.0, 3.0 * p.period());
        const double h = 1e-4 * std::min(p.period(), 2.0 * std::numbers::pi / d.rabi);
        // Five-point stencil.
        const ComplexMatrix deriv = (-floquet_solution(d, t + 2 * h) + 8.0 * floquet_solution(d, t + h) -
                                     8.0 * floquet_solution(d, t - h) + floquet_solution(d, t - 2 * h)) /
                                    (12.0 * h);
        const ComplexMatrix lhs = Complex(0.0, 1.0) * deriv;
        const ComplexMatrix rhs = hamiltonian(s, p, t) * floquet_solution(d, t);
        return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
    }});

    checks.push_back({"fourier_oracle_rates", 1e-9, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 6});
        const auto [p, beta] = smp.drive();
        const RateMatrix rm = rate_matrix(s, p, BathParams{beta});
        const oracle::GoldenRuleRates gr = oracle::golden_rule_rates(s, p, beta);
        const double scale = std::max(rm.gamma_plus.cwiseAbs().maxCoeff(), rm.gamma_minus.cwiseAbs().maxCoeff());
        return std::max((rm.gamma_plus - gr.gamma_plus).cwiseAbs().maxCoeff(),
                        (rm.gamma_minus - gr.gamma_minus).cwiseAbs().maxCoeff()) / scale;
    }});

    checks.push_back({"recursion_vs_nullspace", 1e-11, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 10, 20});
        const auto [p, beta] = smp.drive();
        const RealMatrix gen = rate_matrix(s, p, BathParams{beta}).generator;
        return (steady_state(gen) - oracle::null_space_distribution(gen)).cwiseAbs().maxCoeff();
    }});

    checks.push_back({"geometric_vs_nullspace", 1e-10, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 10, 20});
        const auto [p, beta] = smp.drive();
        const RealMatrix gen = rate_matrix(s, p, BathParams{beta}).generator;
        return (distribution(s, p, beta).p - oracle::null_space_distribution(gen)).cwiseAbs().maxCoeff();
    }});

    checks.push_back({"detailed_balance", 1e-12, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 10, 20});
        const auto [p, beta] = smp.drive();
        const RealMatrix g = rate_matrix(s, p, BathParams{beta}).gamma_total;
        const RealVector prob = distribution(s, p, beta).p;
        double dev = 0.0;
        for (int i = 1; i < s.dim(); ++i) {
            const double a = g(i - 1, i) * prob(i);
            const double b = g(i, i - 1) * prob(i - 1);
            dev = std::max(dev, detail::relative(a, b));
        }
        return dev;
    }});

    // The direct sum adds O(1/beta) channel terms of both signs up to R ~ F^2,
    // so its rounding floor, eps times the sum of |terms|, joins the tolerance.
    checks.push_back({"dissipation_closed_vs_direct", 1e-10, 0, [](Sampler& smp) {
        const SpinQuantumNumber s(smp.integer(1, 20));
        const auto [p, beta] = smp.drive();
        const double closed = dissipation_closed(s, p, beta);
        const DissipationSum direct = dissipation_direct_sum(s, p, BathParams{beta});
        if (!(closed > 0.0 && direct.r > 0.0)) return std::numeric_limits<double>::infinity();
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * direct.abs_terms;
        return 1e-10 * std::abs(closed - direct.r) / (1e-10 * direct.r + floor);
    }});

    checks.push_back({"magnetization_vs_floquet_expectation", 1e-9, 0, [](Sampler& smp) {
        const SpinQuantumNumber s = smp.spin({1, 2, 3, 4, 5, 6});
        const auto [p, beta] = smp.drive();
        const double closed = quasithermal_sz(s, p, beta);
        double dev = 0.0;
        for (double frac : {0.0, 0.31, 0.77}) {
            dev = std::max(dev, std::abs(closed - oracle::floquet_expectation_sz(s, p, beta, frac * p.period())));
        }
        return dev / s.value();
    }});

    checks.push_back({"partition_derivative", 1e-6, 0, [](Sampler& smp) {
        const SpinQuantumNumber j = smp.spin({1, 2, 3, 4, 7});
        while (true) {
            const auto [p, beta] = smp.drive();
            const DerivativeCheck chk = partition_derivative_check(j, p, beta);
            if (!chk.skipped) return chk.residual;
        }
    }});

    checks.push_back({"heat_work_balance", 1e-9, 0, [](Sampler& smp) {
        const LLParams p{1.0, smp.uniform(0.2, 3.0), smp.uniform(0.05, 1.0), smp.log_uniform(0.01, 0.5)};
        const HeatWork hw = ll_heat_work(p, ll_steady_state(p));
        if (hw.heat_rate > 1e-15 || hw.work_rate < -1e-15) return std::numeric_limits<double>::infinity();
        return std::abs(std::abs(hw.heat_rate) - hw.work_rate);
    }});

    // Near-conservative points relax at rates far below g (down to ~1e-3 g), so
    // draws whose trajectory has not settled within the horizon are redrawn; a
    // settled trajectory on a different attractor still fails.
    checks.push_back({"ll_algebraic_vs_ode", 1e-6, 0, [](Sampler& smp) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            const LLParams p{1.0, smp.uniform(0.2, 3.0), smp.uniform(0.05, 1.0), smp.log_uniform(0.01, 0.5)};
            const LLTrajectory tr = ll_integrate(p, std::max(1e5, 2000.0 / p.g), 1e-12);
            if (!tr.converged) continue;
            const LLSteadyState st = ll_steady_state(p);
            const double dphi = std::abs(st.phi - tr.fitted.phi);
            return std::max(std::abs(st.z - tr.fitted.z), std::min(dphi, 2.0 * std::numbers::pi - dphi));
        }
        return std::numeric_limits<double>::infinity();
    }});

    return checks;
}

inline std::vector<CheckResult> run_verify(std::uint64_t seed, const VerifyOptions& opt, int threads) {
    if (opt.points < 1) throw std::invalid_argument("--points must be >= 1");
    if (!(opt.tol_scale >= 0.0) || !std::isfinite(opt.tol_scale)) {
        throw std::invalid_argument("--tol-scale must be finite and >= 0");
    }
    const auto checks = verify_checks();
    std::vector<CheckResult> results;
    for (std::size_t c = 0; c < checks.size(); ++c) {
        const CheckSpec& spec = checks[c];
        const int n = spec.max_points > 0 ? std::min(opt.points, spec.max_points) : opt.points;
        const std::function<double(std::size_t)> one = [&](std::size_t k) {
            // One generator per point keeps results independent of scheduling.
            detail::Sampler smp(seed, (c << 32) + k);
            return spec.residual(smp);
        };
        const std::vector<double> res = parallel_map<double>(static_cast<std::size_t>(n), threads, one);
        double worst = 0.0;
        for (double r : res) worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(worst, r);
        const double tol = spec.tolerance * opt.tol_scale;
        results.push_back({spec.name, n, worst, tol, worst <= tol});
    }
    return results;
}

inline Record verify_record(const CheckResult& r) {
    Record rec;
    rec.add("check", r.name)
        .add("points", r.points)
        .add("max_residual", r.max_residual)
        .add("tolerance", r.tolerance)
        .add("pass", r.pass);
    return rec;
}

}  // namespace rabitherm::cli
