#ifndef COSSERAT_EXPERIMENTS_HPP
#define COSSERAT_EXPERIMENTS_HPP

#include <chrono>
#include <cmath>
#include <vector>

#include "cosserat/dynamics.hpp"
#include "cosserat/error_norm.hpp"
#include "cosserat/section.hpp"
#include "cosserat/statics.hpp"

namespace cosserat {

// ------------------------------------------------------ rod builders ----

/// Straight rod along `direction` of length L, identity orientations.
inline VecX straight_rod_coordinates(const Mesh& mesh, double length,
                                     const Vec3& direction = Vec3::UnitX()) {
    const int N = mesh.node_count();
    VecX q = VecX::Zero(6 * N);
    const Vec3 dir = direction.normalized();
    for (int n = 0; n < N; ++n)
        q.segment<3>(6 * n) = length * (double(n) / (N - 1)) * dir;
    return q;
}

/// Quarter circle of radius 2/pi in the x-z plane:
/// psi_i = (0, (pi/2) i/(N-1), 0), r_i = (1 - cos psi_i, 0, sin psi_i) 2/pi.
/// Its arc length is 1, so J = 1 along the rod.
inline VecX quarter_circle_coordinates(int node_count) {
    VecX q = VecX::Zero(6 * node_count);
    for (int n = 0; n < node_count; ++n) {
        const double psi = 0.5 * M_PI * double(n) / (node_count - 1);
        q.segment<3>(6 * n) =
            Vec3(1.0 - std::cos(psi), 0.0, std::sin(psi)) * 2.0 / M_PI;
        q.segment<3>(6 * n + 3) = Vec3(0.0, psi, 0.0);
    }
    return q;
}

// -------------------------------------------------------- cantilever ----

/// Newton tolerance per slenderness ratio, atol {1e-8,1e-10,1e-12,1e-14}
/// for rho {1e1,1e2,1e3,1e4} in order.
inline double cantilever_atol(double slenderness) {
    if (slenderness <= 1e1) return 1e-8;
    if (slenderness <= 1e2) return 1e-10;
    if (slenderness <= 1e3) return 1e-12;
    return 1e-14;
}

struct CantileverSetup {
    InterpolationKind kind = InterpolationKind::SE3;
    int order = 1;
    int n_el = 16;
    Integration integration = Integration::Reduced;
    double slenderness = 1e2; // rho = L / w
    double length = 1e3;
    double youngs_modulus = 1.0;
    double shear_modulus = 0.5;
    int n_load_steps = 50;
    double density = 1.0; // inertia unused in statics
};

struct CantileverSolution {
    RodModel model;
    VecX q;
    std::vector<int> iterations_per_step;
};

inline LoadCase cantilever_loads(const CantileverSetup& s) {
    const double w = s.length / s.slenderness;
    const double I = std::pow(w, 4) / 12.0;
    const double k_b = s.youngs_modulus * I;
    LoadCase loads;
    loads.at_end.moment = Vec3(0.0, 0.0, 0.5 * M_PI * k_b / s.length);
    loads.at_end.force =
        Vec3(0.0, 0.0, 0.5 * M_PI * k_b / (s.length * s.length));
    loads.at_end.follower = true; // components given in the tip body frame
    return loads;
}

inline RodModel cantilever_model(const CantileverSetup& s) {
    const double w = s.length / s.slenderness;
    const SectionProperties section = section_rectangular(
        w, w, s.density, s.youngs_modulus, s.shear_modulus);
    const Mesh mesh(s.n_el, s.order);
    return RodModel(mesh, s.kind, section,
                    straight_rod_coordinates(mesh, s.length), s.integration);
}

/// Straight cantilever of length L clamped at node 0, loaded by a tip
/// moment and a follower tip force over n_load_steps increments.
inline CantileverSolution solve_cantilever(const CantileverSetup& s) {
    RodModel model = cantilever_model(s);
    BoundaryConditions bc;
    bc.clamp_node(0, model.reference_coordinates());
    StaticSettings settings;
    settings.n_load_steps = s.n_load_steps;
    settings.atol = cantilever_atol(s.slenderness);
    StaticResult r = solve_static(model, bc, cantilever_loads(s), settings);
    return {std::move(model), std::move(r.q), std::move(r.iterations_per_step)};
}

// -------------------------------------------------- convergence study ----

struct ConvergenceRow {
    int n_el;
    int nodes;
    int dofs;
    double error;
    double runtime_seconds;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;           // least-squares log-log slope of error vs n_el
    double plateau_threshold = 0.0;
};

/// Least-squares slope of log(error) against log(1/n_el); rows at or below
/// the plateau threshold are excluded from the fit.
inline double fit_slope(const std::vector<ConvergenceRow>& rows,
                        double plateau_threshold) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : rows) {
        if (row.error <= plateau_threshold) continue;
        const double x = -std::log(double(row.n_el));
        const double y = std::log(row.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Mesh-refinement sweep against a given reference field.
inline ConvergenceReport
cantilever_convergence(CantileverSetup setup, const FrameSampler& reference,
                       const std::vector<int>& element_counts,
                       double reference_self_error, int error_samples = 100) {
    ConvergenceReport report;
    report.plateau_threshold = 1e2 * reference_self_error;
    for (int n_el : element_counts) {
        setup.n_el = n_el;
        const auto start = std::chrono::steady_clock::now();
        const CantileverSolution sol = solve_cantilever(setup);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        const double err = error_twist(
            make_sampler(sol.model.mesh(), setup.kind, sol.q), reference,
            error_samples);
        report.rows.push_back({n_el, sol.model.mesh().node_count(),
                               sol.model.dof_count(), err, seconds});
    }
    report.slope = fit_slope(report.rows, report.plateau_threshold);
    return report;
}

// --------------------------------------------------------- heavy top ----

struct HeavyTopSetup {
    double radius = 0.1;
    double length = 0.5;
    double density = 8000.0;
    double youngs_modulus = 2.1e8;
    double poisson_ratio = 1.0 / 3.0;
    double stiffness_scale = 1.0; // 2.5e-3 gives the soft rod
    double gravity = 9.81;
    double atol = 1e-8;
    double rtol = 1e-8;
};

inline double heavy_top_spin(const HeavyTopSetup&) { return 50.0 * M_PI; }

inline double heavy_top_precession(const HeavyTopSetup& s) {
    return s.gravity * s.length / (s.radius * s.radius * heavy_top_spin(s));
}

inline double heavy_top_period(const HeavyTopSetup& s) {
    return 2.0 * M_PI / heavy_top_precession(s);
}

struct HeavyTopProblem {
    RodModel model;
    LoadCase loads;
    BoundaryConditions bc;
    SystemState initial;
};

/// Spinning cylinder pinned at the origin along +x: one quadratic R12
/// element (3 nodes), reduced integration for the internal forces, gravity
/// as a distributed line force, precession initial velocities.
inline HeavyTopProblem heavy_top_problem(const HeavyTopSetup& s) {
    const double G = s.youngs_modulus / (2.0 * (1.0 + s.poisson_ratio));
    SectionProperties section =
        section_circular(s.radius, s.density, s.youngs_modulus, G);
    section.law.C_gamma *= s.stiffness_scale;
    section.law.C_kappa *= s.stiffness_scale;

    const Mesh mesh(1, 2);
    VecX q0 = straight_rod_coordinates(mesh, s.length);
    RodModel model(mesh, InterpolationKind::R12, section, q0,
                   Integration::Reduced);

    LoadCase loads;
    loads.distributed_force =
        Vec3(0.0, 0.0, -s.gravity) * section.inertia.A_rho0;

    BoundaryConditions bc;
    for (int k = 0; k < 3; ++k) bc.fix(k, 0.0); // pin node 0 to the origin

    const Vec3 omega(heavy_top_spin(s), 0.0, heavy_top_precession(s));
    VecX u0 = VecX::Zero(mesh.dof_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        u0.segment<3>(6 * n) = omega.cross(Vec3(q0.segment<3>(6 * n)));
        u0.segment<3>(6 * n + 3) = omega; // body = inertial at t = 0
    }

    return {std::move(model), loads, bc, {q0, u0, 0.0}};
}

// ------------------------------------------------ rigid-body oracle ----

/// Tip trajectory of the equivalent rigid cylinder pinned at the origin,
/// from Euler's equations in the body frame with a rotation-vector
/// attitude state (complement update after each accepted step).
inline std::vector<std::pair<double, Vec3>>
rigid_top_tip_trajectory(const HeavyTopSetup& s,
                         const std::vector<double>& sample_times,
                         double tolerance = 1e-10) {
    const double A = M_PI * s.radius * s.radius;
    const double I = M_PI * std::pow(s.radius, 4) / 4.0;
    const double mass = s.density * A * s.length;
    // inertia about the pivot: rotary density plus centerline transport
    const Vec3 inertia(
        s.density * 2.0 * I * s.length,
        s.density * (A * std::pow(s.length, 3) / 3.0 + I * s.length),
        s.density * (A * std::pow(s.length, 3) / 3.0 + I * s.length));
    const Vec3 com(0.5 * s.length, 0.0, 0.0);
    const Vec3 gravity_force(0.0, 0.0, -s.gravity * mass);

    // state y = (psi, omega_body)
    const OdeRhs f = [&](double, const VecX& y) {
        const Vec3 psi = y.head<3>();
        const Vec3 omega = y.tail<3>();
        const Mat3 Aik = exp_so3(psi);
        const Vec3 torque = com.cross(Aik.transpose() * gravity_force);
        VecX dy(6);
        dy.head<3>() = tangent_so3_inv(psi) * omega;
        dy.tail<3>() =
            (torque - omega.cross(inertia.cwiseProduct(omega)))
                .cwiseQuotient(inertia);
        return dy;
    };
    const auto post = [](VecX& y) {
        y.head<3>() = complement_rotation(Vec3(y.head<3>()));
    };

    VecX y0(6);
    y0 << Vec3::Zero(), Vec3(heavy_top_spin(s), 0.0, heavy_top_precession(s));
    DynamicSettings settings;
    settings.t_end = sample_times.empty() ? 0.0 : sample_times.back();
    settings.atol = tolerance;
    settings.rtol = tolerance;
    settings.dt_initial = 1e-5;
    settings.complement_update = true;

    std::vector<std::pair<double, Vec3>> tip;
    for (auto& [t, y] : integrate_ode(f, y0, 0.0, settings, sample_times, post))
        tip.emplace_back(t, exp_so3(Vec3(y.head<3>())) * Vec3(s.length, 0, 0));
    return tip;
}

} // namespace cosserat

#endif
