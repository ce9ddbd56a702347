#pragma once

// Adaptive Dormand-Prince 5(4) integrator for Eigen-valued states.

#include "rabitherm/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace rabitherm {

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0;  // 0 picks a step from the span
    long max_steps = 50'000'000;
};

template <class State>
struct IntegrationResult {
    State state;
    double t;
    long accepted;
    long rejected;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, const StepControl& c) {
    const auto scale =
        (c.atol + c.rtol * y0.array().abs().max(y1.array().abs())).eval();
    return (err.array().abs() / scale).maxCoeff();
}

struct NoObserver {
    template <class State>
    bool operator()(double, const State&) const { return true; }
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0).  The observer is called
/// after every accepted step and may stop the integration by returning false.
template <class State, class Rhs, class Observer = detail::NoObserver>
IntegrationResult<State> integrate_dopri5(Rhs&& rhs, double t0, State y, double t1,
                                          const StepControl& ctl, Observer&& observe = {}) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    // Difference between the fifth- and embedded fourth-order weights.
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = t1 - t0;
    if (!(span > 0.0)) {
        return {std::move(y), t0, 0, 0};
    }
    double h = ctl.initial_step > 0.0 ? ctl.initial_step : span * 1e-3;
    double t = t0;
    long accepted = 0;
    long rejected = 0;
    State k1 = rhs(t, y);
    while (t < t1) {
        if (accepted + rejected >= ctl.max_steps) {
            throw NumericalError("integrator exceeded " + std::to_string(ctl.max_steps) +
                                 " steps at t = " + std::to_string(t));
        }
        const bool last = t + h >= t1;
        if (last) {
            h = t1 - t;
        }
        if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
            throw NumericalError("step size underflow at t = " + std::to_string(t));
        }
        const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
        const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
        const State k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const State k5 =
            rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const State k6 = rhs(
            t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
        State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = rhs(t + h, y_new);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = detail::scaled_error(err, y, y_new, ctl);
        if (!std::isfinite(en)) {
            throw NumericalError("non-finite state at t = " + std::to_string(t));
        }
        if (en <= 1.0) {
            t = last ? t1 : t + h;
            y = std::move(y_new);
            k1 = k7;  // first-same-as-last
            ++accepted;
            if (!observe(t, static_cast<const State&>(y))) {
                break;
            }
        } else {
            ++rejected;
        }
        const double factor = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return {std::move(y), t, accepted, rejected};
}

}  // namespace rabitherm
