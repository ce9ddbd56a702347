// rabitherm: figure data, parameter sweeps and oracle self-checks for the
// driven spin in a thermal bath.

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/verify.hpp"
#include "rabitherm/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kVerifyFailed = 2, kNonConvergence = 3 };

void add_drive_axes(CLI::App* sub, rabitherm::cli::DriveAxes& axes) {
    sub->add_option("--omega0", axes.omega0, "static splitting: value, list or MIN:MAX:COUNT[:log]")
        ->capture_default_str();
    sub->add_option("--omega", axes.omega, "drive frequency axis")->capture_default_str();
    sub->add_option("--f", axes.f, "drive amplitude axis")->capture_default_str();
}

void add_thermal(CLI::App* sub, rabitherm::cli::ThermalOption& t) {
    sub->add_option("--beta", t.beta, "inverse bath temperature (default 1)");
    sub->add_option("--temperature", t.temperature, "bath temperature k_B T, alternative to --beta");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rabitherm::cli;

    CommonOptions common;
    QuasitempOptions qt;
    MagnetizationOptions mag;
    DissipationOptions dis;
    ClassicalOptions cls;
    VerifyOptions ver;

    CLI::App app{"Quasistationary thermodynamics of a spin in a circularly polarized field"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", common.out, "output path, - for stdout")->capture_default_str();
    app.add_option("--format", common.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
    app.add_option("--config", common.config, "flat key = value file; command-line flags win");
    app.add_option("--threads", common.threads, "worker threads")->capture_default_str();
    app.add_option("--seed", common.seed, "random seed for verify")->capture_default_str();
    app.add_flag("--allow-boundary", common.allow_boundary,
                 "keep omega = Omega grid points, evaluated by their limits");
    app.add_option("--units", common.units, "omega0 (normalized output) or raw")
        ->check(CLI::IsMember({"omega0", "raw"}))
        ->capture_default_str();

    auto* sub_qt = app.add_subcommand("quasitemp", "inverse quasitemperature surface and theta = 0 loci");
    add_drive_axes(sub_qt, qt.axes);
    add_thermal(sub_qt, qt.thermal);

    auto* sub_mag = app.add_subcommand("magnetization", "thermal and quasithermal magnetization");
    sub_mag->add_option("--j", mag.j, "spin quantum number(s), e.g. 7/2 or 1,7/2")->capture_default_str();
    add_drive_axes(sub_mag, mag.axes);
    add_thermal(sub_mag, mag.thermal);

    auto* sub_dis = app.add_subcommand("dissipation", "dissipation rate R, r = R/(s^2+s) and its large-s limit");
    sub_dis->add_option("--s", dis.s, "spin quantum number(s), e.g. 1/2,5,10")->capture_default_str();
    add_drive_axes(sub_dis, dis.axes);
    add_thermal(sub_dis, dis.thermal);

    auto* sub_cls = app.add_subcommand("classical", "Landau-Lifshitz steady state and dissipated heat");
    add_drive_axes(sub_cls, cls.axes);
    sub_cls->add_option("--g", cls.g, "damping constant axis")->capture_default_str();
    sub_cls->add_option("--t-end", cls.t_end, "integration horizon (0 = automatic)")->capture_default_str();
    sub_cls->add_option("--tol", cls.tol, "integrator tolerance")->capture_default_str();

    auto* sub_ver = app.add_subcommand("verify", "run every oracle cross-check");
    sub_ver->add_option("--points", ver.points, "random points per check")->capture_default_str();
    sub_ver->add_option("--tol-scale", ver.tol_scale, "multiplier applied to every tolerance")
        ->capture_default_str();

    std::vector<std::string> args(argv, argv + argc);
    try {
        if (const std::string path = find_config_path(args); !path.empty()) {
            args = merge_config(args, read_config(path), {"allow-boundary"});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        common.validate();
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (common.out != "-") {
            file.open(common.out, std::ios::binary | std::ios::trunc);
            if (!file) {
                std::cerr << "error: cannot open '" << common.out << "' for writing\n";
                return kUsage;
            }
            out = &file;
        }
        RecordSink sink(*out, parse_format(common.format));
        int status = kOk;
        if (sub_qt->parsed()) {
            cmd_quasitemp(common, qt, sink);
        } else if (sub_mag->parsed()) {
            cmd_magnetization(common, mag, sink);
        } else if (sub_dis->parsed()) {
            cmd_dissipation(common, dis, sink);
        } else if (sub_cls->parsed()) {
            cmd_classical(common, cls, sink);
        } else if (sub_ver->parsed()) {
            bool all = true;
            for (const auto& r : run_verify(common.seed, ver, common.threads)) {
                sink.write(verify_record(r));
                all = all && r.pass;
            }
            if (!all) status = kVerifyFailed;
        }
        out->flush();
        if (!*out) {
            std::cerr << "error: write to '" << common.out << "' failed\n";
            return kUsage;
        }
        return status;
    } catch (const rabitherm::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kNonConvergence;
    }
}
