#pragma once

// Subcommand implementations.  Each command expands its axes into a grid,
// evaluates points in parallel and writes records in grid order.

#include "cli/output.hpp"
#include "cli/parallel.hpp"
#include "cli/sweep.hpp"
#include "rabitherm/rabitherm.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabitherm::cli {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CommonOptions {
    std::string out = "-";
    std::string format = "csv";
    std::string config;
    int threads = 1;
    std::uint64_t seed = 1;
    bool allow_boundary = false;
    std::string units = "omega0";

    bool raw() const { return units == "raw"; }
    void validate() const {
        if (units != "omega0" && units != "raw") {
            throw std::invalid_argument("--units must be omega0 or raw");
        }
        if (threads < 1) throw std::invalid_argument("--threads must be >= 1");
        parse_format(format);
    }
};

/// Output normalization: with --units omega0 frequencies are divided by the
/// point's omega0 and inverse frequencies multiplied by it.
struct Units {
    double omega0;
    bool raw;
    double freq(double x) const { return raw ? x : x / omega0; }
    double inv_freq(double x) const { return raw ? x : x * omega0; }
};

struct DriveAxes {
    std::string omega0 = "1";
    std::string omega;
    std::string f;
};

/// beta from --beta or --temperature (k_B T in frequency units).
struct ThermalOption {
    std::optional<double> beta;
    std::optional<double> temperature;

    double resolve() const {
        if (beta && temperature) {
            throw std::invalid_argument("give either --beta or --temperature, not both");
        }
        const double b = beta ? *beta : (temperature ? 1.0 / *temperature : 1.0);
        if (!(std::isfinite(b) && b > 0.0)) {
            throw std::invalid_argument("inverse temperature must be finite and > 0");
        }
        return b;
    }
};

/// Points where Omega vanishes have no Floquet labels and are always dropped;
/// omega = Omega points are dropped unless --allow-boundary.
inline bool keep_point(const DriveParams& p, bool allow_boundary) {
    if (rabi_frequency(p) == 0.0) return false;
    return allow_boundary || classify_regime(p) != Regime::Boundary;
}

// ---------------------------------------------------------------- quasitemp

struct QuasitempOptions {
    DriveAxes axes{"1", "0.01:5:200", "0.01:5:200"};
    ThermalOption thermal;
};

inline Record quasitemp_record(const std::string& series, std::size_t index, const DriveParams& p,
                               double beta, bool raw) {
    const Units u{p.omega0, raw};
    const Regime regime = classify_regime(p);
    const RateRatio r = rate_ratio(p, beta);
    const double theta = quasitemperature(p, beta);
    const StrongDriveAsymptotes asym = theta_strong_drive_asymptotes(p, beta);
    Record rec;
    rec.add("series", series)
        .add("index", index)
        .add("omega0", p.omega0)
        .add("omega", u.freq(p.omega))
        .add("f", u.freq(p.f))
        .add("beta", u.inv_freq(beta))
        .add("regime", to_string(regime))
        .add("boundary", regime == Regime::Boundary)
        .add("q", r.q)
        .add("log_q", r.log_q)
        .add("theta", u.inv_freq(theta))
        .add("omega_c", u.freq(critical_frequency(p)))
        .add("theta_series2",
             regime == Regime::LowFrequency ? u.inv_freq(theta_low_freq_series(p, beta, 2)) : kNaN)
        .add("theta_static", p.omega != p.omega0 ? u.inv_freq(theta_static_limit(p, beta)) : kNaN)
        .add("asym_low", u.inv_freq(asym.low))
        .add("asym_high", u.inv_freq(asym.high));
    return rec;
}

/// Surface over (omega0, F, omega), then the theta = 0 loci as marker series:
/// the segment omega = omega0 (F < omega0) and the parabola omega = omega_c.
inline void cmd_quasitemp(const CommonOptions& common, const QuasitempOptions& opt, RecordSink& sink) {
    const Axis w0 = parse_axis("--omega0", opt.axes.omega0);
    const Axis fs = parse_axis("--f", opt.axes.f);
    const Axis ws = parse_axis("--omega", opt.axes.omega);
    const double beta = opt.thermal.resolve();
    const Grid grid({w0.values.size(), fs.values.size(), ws.values.size()});
    run_ordered(grid.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = grid.unravel(i);
        const DriveParams p{w0.values[k[0]], ws.values[k[2]], fs.values[k[1]]};
        p.validate();
        if (!keep_point(p, common.allow_boundary)) return {};
        return {quasitemp_record("surface", i, p, beta, common.raw())};
    }, sink);

    const Grid loci({w0.values.size(), fs.values.size(), 2});
    run_ordered(loci.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = loci.unravel(i);
        const double omega0 = w0.values[k[0]];
        const double f = fs.values[k[1]];
        if (k[2] == 0) {
            if (!(f > 0.0 && f < omega0)) return {};
            return {quasitemp_record("zero_segment", grid.size() + i, {omega0, omega0, f}, beta,
                                     common.raw())};
        }
        const DriveParams base{omega0, omega0, f};
        const DriveParams p{omega0, critical_frequency(base), f};
        if (rabi_frequency(p) == 0.0) return {};
        return {quasitemp_record("zero_parabola", grid.size() + i, p, beta, common.raw())};
    }, sink);
}

// ------------------------------------------------------------ magnetization

struct MagnetizationOptions {
    std::string j = "7/2";
    DriveAxes axes{"1", "0.01:3:300", "0.01"};
    ThermalOption thermal;
};

inline void cmd_magnetization(const CommonOptions& common, const MagnetizationOptions& opt,
                              RecordSink& sink) {
    const auto spins = parse_spin_list(opt.j);
    const Axis w0 = parse_axis("--omega0", opt.axes.omega0);
    const Axis fs = parse_axis("--f", opt.axes.f);
    const Axis ws = parse_axis("--omega", opt.axes.omega);
    const double beta = opt.thermal.resolve();
    const Grid grid({spins.size(), w0.values.size(), fs.values.size(), ws.values.size()});
    run_ordered(grid.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = grid.unravel(i);
        const SpinQuantumNumber j = spins[k[0]];
        const DriveParams p{w0.values[k[1]], ws.values[k[3]], fs.values[k[2]]};
        p.validate();
        if (!keep_point(p, common.allow_boundary)) return {};
        const Units u{p.omega0, common.raw()};
        const MagnetizationPoint mp = quasithermal_magnetization(j, p, beta);
        const double omega_c = critical_frequency(p);
        Record rec;
        rec.add("series", "surface")
            .add("index", i)
            .add("j", j.to_string())
            .add("omega0", p.omega0)
            .add("omega", u.freq(p.omega))
            .add("f", u.freq(p.f))
            .add("beta", u.inv_freq(beta))
            .add("omega0_over_omega", p.omega0 / p.omega)
            .add("regime", to_string(mp.regime))
            .add("boundary", mp.regime == Regime::Boundary)
            .add("theta", u.inv_freq(quasitemperature(p, beta)))
            .add("sz_q", mp.sz_q)
            .add("m_thermal", mp.m_thermal)
            .add("m_quasi", mp.m_quasi)
            .add("ratio", mp.m_thermal != 0.0 ? mp.m_quasi / mp.m_thermal : kNaN)
            .add("m1_over_m0", mp.m1_over_m0)
            .add("y0", mp.y0)
            .add("y1", mp.y1)
            .add("sign_change_region", p.omega0 < p.omega && p.omega < omega_c);
        return {rec};
    }, sink);
}

// -------------------------------------------------------------- dissipation

struct DissipationOptions {
    std::string s = "1";
    DriveAxes axes{"1", "0.01:3:300", "0.01:3:300"};
    ThermalOption thermal;
};

inline Record dissipation_record(const std::string& series, std::size_t index, SpinQuantumNumber s,
                                 const DriveParams& p, double beta, bool raw) {
    const Units u{p.omega0, raw};
    const DissipationPoint dp = dissipation_point(s, p, beta);
    const DissipationLimit lim = scaled_dissipation_limit(p);
    const RateRatio r = rate_ratio(p, beta);
    Record rec;
    rec.add("series", series)
        .add("index", index)
        .add("s", s.to_string())
        .add("omega0", p.omega0)
        .add("omega", u.freq(p.omega))
        .add("f", u.freq(p.f))
        .add("beta", u.inv_freq(beta))
        .add("regime", to_string(dp.regime))
        .add("boundary", dp.regime == Regime::Boundary)
        .add("q", r.q)
        .add("theta", u.inv_freq(quasitemperature(p, beta)))
        .add("R", raw ? dp.r * p.omega0 : dp.r)
        .add("r", dp.r_scaled)
        .add("r_inf", lim.r_inf)
        .add("omega_m", u.freq(lim.omega_m))
        .add("r_m", lim.r_m)
        .add("special_value", s.casimir() / 6.0);
    return rec;
}

/// Surface over (s, omega0, F, omega) plus the two theta = 0 curves, where R
/// takes the value s(s+1)/6, as marker series.
inline void cmd_dissipation(const CommonOptions& common, const DissipationOptions& opt,
                            RecordSink& sink) {
    const auto spins = parse_spin_list(opt.s);
    const Axis w0 = parse_axis("--omega0", opt.axes.omega0);
    const Axis fs = parse_axis("--f", opt.axes.f);
    const Axis ws = parse_axis("--omega", opt.axes.omega);
    const double beta = opt.thermal.resolve();
    const Grid grid({spins.size(), w0.values.size(), fs.values.size(), ws.values.size()});
    run_ordered(grid.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = grid.unravel(i);
        const DriveParams p{w0.values[k[1]], ws.values[k[3]], fs.values[k[2]]};
        p.validate();
        if (!keep_point(p, common.allow_boundary)) return {};
        return {dissipation_record("surface", i, spins[k[0]], p, beta, common.raw())};
    }, sink);

    const Grid loci({spins.size(), w0.values.size(), fs.values.size(), 2});
    run_ordered(loci.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = loci.unravel(i);
        const double omega0 = w0.values[k[1]];
        const double f = fs.values[k[2]];
        if (!(f > 0.0)) return {};
        DriveParams p{omega0, omega0, f};
        std::string series = "special_omega0";
        if (k[3] == 0) {
            if (!(f < omega0)) return {};
        } else {
            p.omega = critical_frequency(p);
            series = "special_omega_c";
        }
        return {dissipation_record(series, grid.size() + i, spins[k[0]], p, beta, common.raw())};
    }, sink);
}

// ---------------------------------------------------------------- classical

struct ClassicalOptions {
    DriveAxes axes{"1", "0.5:1.5:101", "0.25"};
    std::string g = "0.1";
    double t_end = 0.0;  // 0 selects max(1e5, 2000/g) in units of 1/omega0
    double tol = 1e-12;
};

inline double default_t_end(const LLParams& p) {
    return std::max(1e5, 2000.0 / (p.g * p.omega0)) / p.omega0;
}

inline void cmd_classical(const CommonOptions& common, const ClassicalOptions& opt, RecordSink& sink) {
    const Axis w0 = parse_axis("--omega0", opt.axes.omega0);
    const Axis gs = parse_axis("--g", opt.g);
    const Axis fs = parse_axis("--f", opt.axes.f);
    const Axis ws = parse_axis("--omega", opt.axes.omega);
    if (!(opt.tol > 1e-14 && opt.tol < 1e-4)) {
        throw std::invalid_argument("--tol must lie in (1e-14, 1e-4)");
    }
    for (double g : gs.values) {
        if (!(g > 0.0)) throw std::invalid_argument("--g must be > 0");
    }
    const Grid grid({w0.values.size(), gs.values.size(), fs.values.size(), ws.values.size()});
    run_ordered(grid.size(), common.threads, [&](std::size_t i) -> std::vector<Record> {
        const auto k = grid.unravel(i);
        const LLParams p{w0.values[k[0]], ws.values[k[3]], fs.values[k[2]], gs.values[k[1]]};
        p.validate();
        if (!(p.omega0 > 0.0)) throw std::invalid_argument("--omega0 must be > 0");
        const Units u{p.omega0, common.raw()};
        std::string status = "ok";
        LLSteadyState st{kNaN, kNaN, kNaN, false};
        HeatWork hw{kNaN, kNaN};
        try {
            st = ll_steady_state(p);
            hw = ll_heat_work(p, st);
        } catch (const NumericalError& e) {
            status = std::string("algebraic: ") + e.what();
        }
        LLTrajectory traj{};
        traj.fitted = {kNaN, kNaN, kNaN, true};
        traj.t_final = kNaN;
        try {
            traj = ll_integrate(p, opt.t_end > 0.0 ? opt.t_end : default_t_end(p), opt.tol);
            if (!traj.converged && status == "ok") status = "ode: not converged";
        } catch (const NumericalError& e) {
            status = std::string("ode: ") + e.what();
        }
        const HeatWork hw_ode = std::isfinite(traj.fitted.z) ? ll_heat_work(p, traj.fitted)
                                                             : HeatWork{kNaN, kNaN};
        const double dphi = std::abs(st.phi - traj.fitted.phi);
        const double discrepancy =
            std::max(std::abs(st.z - traj.fitted.z), std::min(dphi, 2.0 * std::numbers::pi - dphi));
        Record rec;
        rec.add("series", "curve")
            .add("index", i)
            .add("omega0", p.omega0)
            .add("omega", u.freq(p.omega))
            .add("f", u.freq(p.f))
            .add("g", u.inv_freq(p.g))
            .add("z", st.z)
            .add("phi", st.phi)
            .add("heat", u.freq(hw.heat_rate))
            .add("work", u.freq(hw.work_rate))
            .add("abs_q", u.freq(std::abs(hw.heat_rate)))
            .add("residual", st.residual)
            .add("fallback", st.fallback)
            .add("z_ode", traj.fitted.z)
            .add("phi_ode", traj.fitted.phi)
            .add("abs_q_ode", u.freq(std::abs(hw_ode.heat_rate)))
            .add("discrepancy", discrepancy)
            .add("converged", traj.converged)
            .add("t_final", u.inv_freq(traj.t_final))
            .add("status", status);
        return {rec};
    }, sink);
}

}  // namespace rabitherm::cli
