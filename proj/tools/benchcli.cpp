// Command-line driver for the rod experiments.
//
// Subcommands:
//   quarter-circle   strain distributions along an exact quarter-circle arc
//   cantilever       static tip-loaded cantilever + mesh-refinement sweep
//   heavy-top        spinning rod pinned at the origin vs. rigid-body motion
//   run <config>     generic experiment described by a JSON file
//
// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
// 4 numerical singularity or step-size breakdown.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cosserat/runner.hpp"

namespace {

cosserat::InterpolationKind parse_kind_flag(const std::string& s) {
    if (s == "r12") return cosserat::InterpolationKind::R12;
    if (s == "r3so3") return cosserat::InterpolationKind::R3xSO3;
    if (s == "se3") return cosserat::InterpolationKind::SE3;
    throw CLI::ValidationError("--kind", "expected one of r12, r3so3, se3");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometrically exact rod benchmarks"};
    app.require_subcommand(1);

    std::string kind = "se3";
    std::string integration = "reduced";
    std::string out_dir = ".";
    std::string reference_path;
    std::string config_path;
    int order = 1;
    int n_el = 16;
    double fixed_dt = 0.0;
    double slenderness = 1e2;
    bool soft = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--kind", kind, "interpolation: r12, r3so3, se3");
        cmd->add_option("--order", order, "element order (1 or 2, r12 only for 2)")
            ->check(CLI::IsMember({1, 2}));
        cmd->add_option("--nel", n_el, "number of elements")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--integration", integration,
                        "quadrature for internal forces")
            ->check(CLI::IsMember({"full", "reduced"}));
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--reference", reference_path,
                        "reference state cache (CSV)");
        cmd->add_option("--fixed-step", fixed_dt,
                        "fixed RK4 time step (0 = adaptive)");
    };

    CLI::App* qc = app.add_subcommand(
        "quarter-circle", "strains along an exact quarter-circle arc");
    add_common(qc);
    CLI::App* cant = app.add_subcommand(
        "cantilever", "tip-loaded cantilever and convergence sweep");
    add_common(cant);
    cant->add_option("--rho", slenderness, "slenderness ratio L / w");
    CLI::App* top =
        app.add_subcommand("heavy-top", "spinning rod pinned at the origin");
    add_common(top);
    top->add_flag("--soft", soft, "reduce the stiffness by 2.5e-3");
    CLI::App* run = app.add_subcommand("run", "experiment from a JSON config");
    add_common(run);
    run->add_option("config", config_path, "JSON configuration file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cosserat::RunOptions opts;
        opts.kind = parse_kind_flag(kind);
        opts.order = order;
        opts.n_el = n_el;
        opts.integration = integration == "full"
                               ? cosserat::Integration::Full
                               : cosserat::Integration::Reduced;
        opts.out_dir = out_dir;
        opts.reference_path = reference_path;
        opts.fixed_dt = fixed_dt;
        opts.slenderness = slenderness;
        opts.soft = soft;
        std::filesystem::create_directories(out_dir);

        if (qc->parsed()) {
            cosserat::run_quarter_circle(opts);
        } else if (cant->parsed()) {
            cosserat::run_cantilever(opts);
        } else if (top->parsed()) {
            cosserat::run_heavy_top(opts);
        } else if (run->parsed()) {
            cosserat::run_config_file(config_path, out_dir);
        }
    } catch (const cosserat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cosserat::NoConvergence& e) {
        std::cerr << "solver did not converge: " << e.what() << "\n";
        return 3;
    } catch (const cosserat::StepSizeUnderflow& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const cosserat::TangentSingular& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const cosserat::AngleAtPi& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
