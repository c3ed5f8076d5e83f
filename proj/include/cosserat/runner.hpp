#ifndef COSSERAT_RUNNER_HPP
#define COSSERAT_RUNNER_HPP

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cosserat/config.hpp"
#include "cosserat/csv.hpp"
#include "cosserat/dynamics.hpp"
#include "cosserat/error_norm.hpp"
#include "cosserat/experiments.hpp"

// Experiment drivers shared by the command-line tool and the test suite.
// All CSV output is deterministic: fixed column sets, 17 significant digits,
// schema version in the leading comment row.

namespace cosserat {

struct RunOptions {
    InterpolationKind kind = InterpolationKind::SE3;
    int order = 1;
    int n_el = 16;
    Integration integration = Integration::Reduced;
    std::string out_dir = ".";
    std::string reference_path; // cantilever reference cache
    double fixed_dt = 0.0;      // > 0 selects fixed-step RK4 for dynamics
    double slenderness = 1e2;   // cantilever L / w
    bool soft = false;          // heavy top: scale the stiffness down
};

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline std::string kind_name(InterpolationKind kind) {
    switch (kind) {
        case InterpolationKind::R12: return "r12";
        case InterpolationKind::R3xSO3: return "r3so3";
        case InterpolationKind::SE3: return "se3";
    }
    return "?";
}

inline std::vector<double> linspace(double t0, double t1, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * double(i) / (n - 1);
    return t;
}

} // namespace detail

/// Nodal state table: one row per node, position then rotation vector.
inline void write_state_csv(const std::string& path, const VecX& q,
                            const std::vector<std::string>& comments = {}) {
    CsvWriter csv(path, {"node", "x", "y", "z", "psi_x", "psi_y", "psi_z"},
                  comments);
    for (int n = 0; n < q.size() / 6; ++n)
        csv.row({double(n), q[6 * n], q[6 * n + 1], q[6 * n + 2],
                 q[6 * n + 3], q[6 * n + 4], q[6 * n + 5]});
}

// ------------------------------------------------------- quarter circle ----

/// Strain distributions along a quarter-circle rod of radius 2/pi whose
/// nodal coordinates sample the exact arc. 101 evenly spaced points.
inline void run_quarter_circle(const RunOptions& opts) {
    check_kind_order(opts.kind, opts.order);
    const Mesh mesh(opts.n_el, opts.order);
    const VecX q = quarter_circle_coordinates(mesh.node_count());
    const std::string path = detail::join_path(
        opts.out_dir,
        "quarter_circle_" + detail::kind_name(opts.kind) + ".csv");
    CsvWriter csv(path, {"xi", "gamma_1", "gamma_2", "gamma_3", "kappa_1",
                         "kappa_2", "kappa_3"});
    for (int i = 0; i <= 100; ++i) {
        const double xi = double(i) / 100.0;
        const int e = mesh.locate(xi);
        // arc-length parametrization: the reference Jacobian is exactly 1
        const StrainState s =
            strain(opts.kind, mesh, e, element_coords(mesh, e, q), xi, 1.0);
        csv.row({xi, s.gamma[0], s.gamma[1], s.gamma[2], s.kappa[0],
                 s.kappa[1], s.kappa[2]});
    }
    std::cout << "wrote " << path << "\n";
}

// ----------------------------------------------------------- cantilever ----

struct CantileverReference {
    CantileverSetup setup;
    VecX q;
};

/// Load a cached cantilever reference state; the discretization parameters
/// travel in comment rows of the CSV.
inline CantileverReference load_cantilever_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference file " + path);
    CantileverReference ref;
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.rfind("# kind=", 0) == 0) {
            std::istringstream ss(line.substr(2));
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "kind")
                    ref.setup.kind = detail::parse_kind(val, "reference kind");
                else if (key == "order") ref.setup.order = std::stoi(val);
                else if (key == "n_el") ref.setup.n_el = std::stoi(val);
                else if (key == "slenderness")
                    ref.setup.slenderness = std::stod(val);
            }
        }
        if (line.empty() || line[0] == '#' || !std::isdigit(line[0])) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        for (size_t k = 1; k < row.size(); ++k) values.push_back(row[k]);
    }
    ref.q = Eigen::Map<const VecX>(values.data(), values.size());
    const Mesh mesh(ref.setup.n_el, ref.setup.order);
    if (ref.q.size() != mesh.dof_count())
        throw std::runtime_error("reference file " + path +
                                 " has an inconsistent node count");
    return ref;
}

/// Fine-mesh reference for the error norm; loaded from the cache when the
/// file exists, computed and cached otherwise.
inline CantileverReference
cantilever_reference(const RunOptions& opts,
                     InterpolationKind kind = InterpolationKind::SE3,
                     int order = 1, int n_el = 128) {
    if (!opts.reference_path.empty() &&
        std::filesystem::exists(opts.reference_path))
        return load_cantilever_reference(opts.reference_path);
    CantileverSetup setup;
    setup.kind = kind;
    setup.order = order;
    setup.n_el = n_el;
    setup.integration = Integration::Reduced;
    setup.slenderness = opts.slenderness;
    CantileverReference ref{setup, solve_cantilever(setup).q};
    if (!opts.reference_path.empty()) {
        std::ostringstream meta;
        meta << "kind=" << detail::kind_name(kind) << " order=" << order
             << " n_el=" << n_el << " slenderness=" << opts.slenderness;
        write_state_csv(opts.reference_path, ref.q, {meta.str()});
    }
    return ref;
}

/// Deformed state at the requested resolution plus a mesh-refinement sweep
/// against a fine SE3 reference. Returns the convergence report.
inline ConvergenceReport
run_cantilever(const RunOptions& opts,
               const std::vector<int>& element_counts = {4, 8, 16, 32, 64}) {
    CantileverSetup setup;
    setup.kind = opts.kind;
    setup.order = opts.order;
    setup.n_el = opts.n_el;
    setup.integration = opts.integration;
    setup.slenderness = opts.slenderness;

    const CantileverSolution sol = solve_cantilever(setup);
    write_state_csv(
        detail::join_path(opts.out_dir, "cantilever_state.csv"), sol.q);

    const CantileverReference ref = cantilever_reference(opts);
    const Mesh ref_mesh(ref.setup.n_el, ref.setup.order);
    const FrameSampler ref_sampler =
        make_sampler(ref_mesh, ref.setup.kind, ref.q);
    // the reference compared against itself gauges the noise floor
    const double self_error = error_twist(ref_sampler, ref_sampler);

    const ConvergenceReport report =
        cantilever_convergence(setup, ref_sampler, element_counts, self_error);
    CsvWriter csv(detail::join_path(opts.out_dir, "cantilever_convergence.csv"),
                  {"n_el", "nodes", "dofs", "error", "runtime_seconds"});
    for (const auto& row : report.rows)
        csv.row({double(row.n_el), double(row.nodes), double(row.dofs),
                 row.error, row.runtime_seconds});
    std::cout << "kind=" << detail::kind_name(opts.kind)
              << " order=" << opts.order << " slenderness=" << opts.slenderness
              << " slope=" << report.slope << "\n";
    return report;
}

// ------------------------------------------------------------ heavy top ----

/// Spinning rod pinned at the origin, integrated over one precession
/// period; writes the tip trajectory (with the rigid-body solution for
/// comparison) and the energy balance.
inline void run_heavy_top(const RunOptions& opts, int samples = 201) {
    HeavyTopSetup setup;
    if (opts.soft) setup.stiffness_scale = 2.5e-3;
    HeavyTopProblem problem = heavy_top_problem(setup);

    DynamicSettings settings;
    settings.t_end = heavy_top_period(setup);
    settings.atol = setup.atol;
    settings.rtol = setup.rtol;
    settings.fixed_dt = opts.fixed_dt;
    const std::vector<double> times =
        detail::linspace(0.0, settings.t_end, samples);

    const DynamicSystem system(problem.model, problem.loads, problem.bc);
    const Trajectory traj =
        integrate_dynamic(system, problem.initial, settings, times);
    const auto rigid = rigid_top_tip_trajectory(setup, times);

    const std::string tag = opts.soft ? "soft" : "stiff";
    const MatX mass = problem.model.mass_matrix();
    const int tip = problem.model.mesh().node_count() - 1;
    CsvWriter traj_csv(
        detail::join_path(opts.out_dir, "heavy_top_" + tag + "_trajectory.csv"),
        {"t", "tip_x", "tip_y", "tip_z", "rigid_x", "rigid_y", "rigid_z"});
    CsvWriter energy_csv(
        detail::join_path(opts.out_dir, "heavy_top_" + tag + "_energy.csv"),
        {"t", "e_kin", "e_pot", "e_tot"});
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        const SystemState& s = traj.samples[i];
        const Vec3 r = node_position(s.q, tip);
        const Vec3 rr = i < rigid.size() ? rigid[i].second : Vec3::Zero();
        traj_csv.row({s.t, r[0], r[1], r[2], rr[0], rr[1], rr[2]});
        const Energies en = energies(s, problem.model, problem.loads, mass);
        energy_csv.row({s.t, en.kinetic, en.potential, en.total});
    }
    std::cout << "heavy top (" << tag << "): " << traj.samples.size()
              << " samples over " << settings.t_end << " s\n";
}

// ----------------------------------------------------------- config run ----

/// Execute a parsed experiment configuration (static solve or dynamic
/// integration of a straight rod) and write the configured outputs.
inline void run_config(const ExperimentConfig& cfg,
                       const std::string& out_dir = ".") {
    const Mesh mesh(cfg.n_el, cfg.order);
    const VecX q0 = straight_rod_coordinates(mesh, cfg.length, cfg.direction);
    RodModel model(mesh, cfg.kind, cfg.section, q0, cfg.integration);

    LoadCase loads = cfg.loads;
    if (cfg.cantilever_tip) {
        const double k_b = cfg.section.law.C_kappa[2];
        loads.at_end.moment += Vec3(0, 0, 0.5 * M_PI * k_b / cfg.length);
        loads.at_end.force +=
            Vec3(0, 0, 0.5 * M_PI * k_b / (cfg.length * cfg.length));
        loads.at_end.follower = true;
    }

    BoundaryConditions bc;
    for (int node : cfg.clamp_nodes) {
        if (node < 0 || node >= mesh.node_count())
            throw ConfigError("bc/clamp_nodes", "node index out of range");
        bc.clamp_node(node, q0);
    }
    for (const auto& [index, value] : cfg.fixed) {
        if (index < 0 || index >= model.dof_count())
            throw ConfigError("bc/fix/index", "coordinate index out of range");
        bc.fix(index, value);
    }

    const auto out = [&](const std::string& p) {
        return detail::join_path(out_dir, p);
    };
    if (cfg.solve_type == SolveType::Static) {
        const StaticResult result =
            solve_static(model, bc, loads, cfg.static_settings);
        if (!cfg.state_path.empty())
            write_state_csv(out(cfg.state_path), result.q);
    } else {
        const DynamicSystem system(model, loads, bc);
        const std::vector<double> times = detail::linspace(
            0.0, cfg.dynamic_settings.t_end, cfg.trajectory_samples);
        const Trajectory traj = integrate_dynamic(
            system, {q0, VecX::Zero(model.dof_count()), 0.0},
            cfg.dynamic_settings, times);
        if (!traj.samples.empty() && !cfg.state_path.empty())
            write_state_csv(out(cfg.state_path), traj.samples.back().q);
        const int tip = mesh.node_count() - 1;
        if (!cfg.trajectory_path.empty()) {
            CsvWriter csv(out(cfg.trajectory_path),
                          {"t", "tip_x", "tip_y", "tip_z"});
            for (const SystemState& s : traj.samples) {
                const Vec3 r = node_position(s.q, tip);
                csv.row({s.t, r[0], r[1], r[2]});
            }
        }
        if (!cfg.energy_path.empty()) {
            const MatX mass = model.mass_matrix();
            CsvWriter csv(out(cfg.energy_path),
                          {"t", "e_kin", "e_pot", "e_tot"});
            for (const SystemState& s : traj.samples) {
                const Energies en = energies(s, model, loads, mass);
                csv.row({s.t, en.kinetic, en.potential, en.total});
            }
        }
    }
}

inline void run_config_file(const std::string& path,
                            const std::string& out_dir = ".") {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
    run_config(parse_config(j), out_dir);
}

} // namespace cosserat

#endif
