#pragma once

// Classical damped spin dS/dt = -S x b + g S x (S x b) in the rotating field
// b(t) = (F cos wt, F sin wt, w0), and its steady rotating solution.

#include "rabitherm/errors.hpp"
#include "rabitherm/ode.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace rabitherm {

using Vec3 = Eigen::Vector3d;

struct LLParams {
    double omega0;
    double omega;
    double f;
    double g;

    void validate() const {
        if (!(std::isfinite(omega0) && std::isfinite(omega) && std::isfinite(f) && std::isfinite(g))) {
            throw std::invalid_argument("LLParams must be finite");
        }
        if (!(omega > 0.0)) throw std::invalid_argument("LLParams: omega must be > 0");
        if (f < 0.0) throw std::invalid_argument("LLParams: F must be >= 0");
        if (g < 0.0) throw std::invalid_argument("LLParams: g must be >= 0");
    }
    double period() const { return 2.0 * std::numbers::pi / omega; }
};

/// Rotating solution S(t) = (rho cos(wt - phi), rho sin(wt - phi), z), rho = sqrt(1 - z^2).
struct LLSteadyState {
    double z;
    double phi;              // [0, 2 pi)
    double residual = 0.0;   // |dS'/dt| of the rotating-frame equation at (z, phi)
    bool fallback = false;   // true when obtained from long-time integration
};

inline Vec3 ll_field(const LLParams& p, double t) {
    return {p.f * std::cos(p.omega * t), p.f * std::sin(p.omega * t), p.omega0};
}

inline Vec3 ll_rhs(const Vec3& s, double t, const LLParams& p) {
    const Vec3 b = ll_field(p, t);
    return -s.cross(b) + p.g * s.cross(s.cross(b));
}

namespace detail {

/// Right-hand side in the frame co-rotating with the field.
inline Vec3 ll_rotating_rhs(const Vec3& s, const LLParams& p) {
    const Vec3 b(p.f, 0.0, p.omega0);
    const Vec3 b_eff(p.f, 0.0, p.omega0 - p.omega);
    return -s.cross(b_eff) + p.g * s.cross(s.cross(b));
}

inline Vec3 rotating_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), -std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline double wrap_angle(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    return r >= two_pi ? 0.0 : r;
}

/// Tangential components of the rotating-frame velocity along e_theta and e_phi.
inline Eigen::Vector2d ll_tangent_residual(double theta, double phi, const LLParams& p) {
    const Vec3 r = ll_rotating_rhs(rotating_vector(theta, phi), p);
    const Vec3 e_theta(std::cos(theta) * std::cos(phi), -std::cos(theta) * std::sin(phi),
                       -std::sin(theta));
    const Vec3 e_phi(-std::sin(phi), -std::cos(phi), 0.0);
    return {r.dot(e_theta), r.dot(e_phi)};
}

inline Eigen::Matrix2d ll_tangent_jacobian(double theta, double phi, const LLParams& p) {
    constexpr double h = 1e-6;
    Eigen::Matrix2d jac;
    jac.col(0) = (ll_tangent_residual(theta + h, phi, p) - ll_tangent_residual(theta - h, phi, p)) / (2 * h);
    jac.col(1) = (ll_tangent_residual(theta, phi + h, p) - ll_tangent_residual(theta, phi - h, p)) / (2 * h);
    return jac;
}

struct NewtonRoot {
    double theta;
    double phi;
    double residual;
};

inline std::optional<NewtonRoot> ll_newton(double theta, double phi, const LLParams& p,
                                           double target) {
    Eigen::Vector2d res = ll_tangent_residual(theta, phi, p);
    for (int iter = 0; iter < 100; ++iter) {
        const double norm = ll_rotating_rhs(rotating_vector(theta, phi), p).norm();
        if (norm <= target) {
            return NewtonRoot{theta, phi, norm};
        }
        const Eigen::Matrix2d jac = ll_tangent_jacobian(theta, phi, p);
        const Eigen::Vector2d step = jac.fullPivLu().solve(-res);
        if (!step.allFinite()) return std::nullopt;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k) {
            const double th = theta + lambda * step(0);
            const double ph = phi + lambda * step(1);
            const Eigen::Vector2d trial = ll_tangent_residual(th, ph, p);
            if (trial.norm() < res.norm()) {
                theta = th;
                phi = ph;
                res = trial;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
        // Keep theta in (0, pi) by reflecting through the pole.
        if (theta < 0.0) {
            theta = -theta;
            phi += std::numbers::pi;
        } else if (theta > std::numbers::pi) {
            theta = 2.0 * std::numbers::pi - theta;
            phi += std::numbers::pi;
        }
    }
    const double norm = ll_rotating_rhs(rotating_vector(theta, phi), p).norm();
    if (norm <= target) return NewtonRoot{theta, phi, norm};
    return std::nullopt;
}

/// Linear stability of a rotating-frame fixed point on the sphere.
inline bool ll_fixed_point_stable(double theta, double phi, const LLParams& p) {
    Eigen::Matrix2d m = ll_tangent_jacobian(theta, phi, p);
    m.row(1) /= std::sin(theta);
    return m.trace() < 0.0 && m.determinant() > 0.0;
}

}  // namespace detail

struct LLTrajectory {
    Vec3 final_state;
    double t_final;
    LLSteadyState fitted;
    double norm_drift;  // largest | |S| - 1 | seen at period boundaries before reprojection
    bool converged;
    long steps;
};

/// Integrates the lab-frame equation from s0 in one-period chunks.  |S| is
/// measured and reprojected onto the sphere after every period.  Stops once
/// the rotating-frame velocity falls below converge_tol * |b|.
inline LLTrajectory ll_integrate(const LLParams& p, double t_end, double tol,
                                 Vec3 s0 = Vec3(0.0, 0.0, -1.0), double converge_tol = 1e-11) {
    p.validate();
    if (std::abs(s0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("ll_integrate: |S(0)| must be 1");
    }
    const double period = p.period();
    const double b_norm = std::sqrt(p.f * p.f + p.omega0 * p.omega0);
    StepControl ctl;
    ctl.rtol = tol;
    ctl.atol = tol;
    auto rhs = [&](double t, const Vec3& s) -> Vec3 { return ll_rhs(s, t, p); };

    Vec3 s = s0;
    double t = 0.0;
    double drift = 0.0;
    long steps = 0;
    bool converged = false;
    double residual = 0.0;
    Vec3 rotating = s;
    while (t < t_end) {
        ctl.initial_step = period * 1e-2;
        auto res = integrate_dopri5(rhs, t, s, t + period, ctl);
        steps += res.accepted;
        t = res.t;
        drift = std::max(drift, std::abs(res.state.norm() - 1.0));
        s = res.state.normalized();
        // Rotate back by -wt to the co-rotating frame.
        const double c = std::cos(p.omega * t), sn = std::sin(p.omega * t);
        rotating = Vec3(c * s.x() + sn * s.y(), -sn * s.x() + c * s.y(), s.z());
        residual = detail::ll_rotating_rhs(rotating, p).norm();
        if (p.g > 0.0 && residual <= converge_tol * b_norm) {
            converged = true;
            break;
        }
    }
    const double phi = detail::wrap_angle(-std::atan2(rotating.y(), rotating.x()));
    return {s, t, LLSteadyState{std::clamp(rotating.z(), -1.0, 1.0), phi, residual, true}, drift,
            converged, steps};
}

/// Steady rotating solution from a damped Newton solve on the two tangential
/// components of the rotating-frame equation.  The first seed is the undamped
/// alignment with b_eff; only linearly stable roots are accepted.  Falls back
/// to long-time integration followed by a Newton polish.
inline LLSteadyState ll_steady_state(const LLParams& p, double target = 1e-12) {
    p.validate();
    if (!(p.g > 0.0)) {
        throw std::invalid_argument("ll_steady_state: needs g > 0");
    }
    constexpr double pi = std::numbers::pi;
    const Vec3 b_eff(p.f, 0.0, p.omega0 - p.omega);
    if (b_eff.norm() == 0.0) {
        throw std::domain_error("ll_steady_state: effective field vanishes (F = 0, omega = omega0)");
    }
    const double sigma = p.f * p.f + p.omega0 * (p.omega0 - p.omega) >= 0.0 ? -1.0 : 1.0;
    const Vec3 seed = sigma * b_eff.normalized();
    const double theta0 = std::acos(std::clamp(seed.z(), -1.0, 1.0));
    const double theta_in = std::clamp(theta0, 0.05, pi - 0.05);

    std::array<std::array<double, 2>, 14> seeds{{
        {theta_in, 1.5 * pi},
        {theta_in, seed.x() < 0.0 ? pi + 0.1 : 2.0 * pi - 0.1},
        {0.5 * pi, 1.5 * pi},
        {0.25 * pi, 1.5 * pi},
        {0.75 * pi, 1.5 * pi},
        {pi - 0.2, 1.5 * pi},
        {0.2, 1.5 * pi},
        {0.5 * pi, 1.25 * pi},
        {0.5 * pi, 1.75 * pi},
        {0.75 * pi, 1.25 * pi},
        {0.75 * pi, 1.75 * pi},
        {0.25 * pi, 1.25 * pi},
        {0.25 * pi, 1.75 * pi},
        {pi - 0.05, 1.5 * pi},
    }};
    for (const auto& sd : seeds) {
        const auto root = detail::ll_newton(sd[0], sd[1], p, target);
        if (root && detail::ll_fixed_point_stable(root->theta, root->phi, p)) {
            return {std::cos(root->theta), detail::wrap_angle(root->phi), root->residual, false};
        }
    }

    const double rate = p.g * std::sqrt(p.f * p.f + p.omega0 * p.omega0);
    const LLTrajectory traj = ll_integrate(p, 200.0 / std::max(rate, 1e-6), 1e-11);
    LLSteadyState est = traj.fitted;
    const double theta = std::acos(std::clamp(est.z, -1.0, 1.0));
    if (const auto root = detail::ll_newton(theta, est.phi, p, target)) {
        return {std::cos(root->theta), detail::wrap_angle(root->phi), root->residual, true};
    }
    if (!traj.converged) {
        throw NumericalError("ll_steady_state: Newton and integration both failed, residual " +
                             std::to_string(est.residual));
    }
    return est;
}

struct HeatWork {
    double heat_rate;  // q = g((S.b)^2 - b^2) <= 0
    double work_rate;  // w = S . db/dt = -F w rho sin(phi)
};

inline HeatWork ll_heat_work(const LLParams& p, const LLSteadyState& st) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - st.z * st.z));
    const double s_dot_b = rho * p.f * std::cos(st.phi) + st.z * p.omega0;
    const double b2 = p.f * p.f + p.omega0 * p.omega0;
    return {p.g * (s_dot_b * s_dot_b - b2), -p.f * p.omega * rho * std::sin(st.phi)};
}

}  // namespace rabitherm
