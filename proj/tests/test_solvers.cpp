#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cosserat/dynamics.hpp"
#include "cosserat/experiments.hpp"
#include "cosserat/statics.hpp"

using namespace cosserat;

namespace {

std::mt19937 rng(123);

Vec3 random_vec3(double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng)};
}

SectionProperties test_section() {
    return section_rectangular(0.3, 0.3, 1.0, 1.0, 0.5);
}

RodModel small_rod(int n_el = 2, double L = 1.0) {
    const Mesh mesh(n_el, 1);
    return RodModel(mesh, InterpolationKind::SE3, test_section(),
                    straight_rod_coordinates(mesh, L));
}

} // namespace

TEST_CASE("jacobian_fd recovers a linear map") {
    MatX A = MatX::Random(4, 4);
    const auto fn = [&](const VecX& x) -> VecX { return A * x; };
    const VecX x = VecX::Random(4);
    REQUIRE((jacobian_fd(x, fn) - A).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("kinematic map: matrix and matrix-free forms agree") {
    VecX q(12), u(12);
    q << 1, 2, 3, 0.3, -0.2, 0.9, -1, 0, 2, 1.2, 0.1, -0.4;
    u.setRandom();
    REQUIRE((kinematic_map(q) * u - apply_kinematic_map(q, u)).norm() < 1e-13);
}

TEST_CASE("kinematic map reproduces the body angular velocity") {
    // A(psi(t)) with psi_dot = T^-1(psi) omega satisfies A^T dA/dt = hat(omega)
    const Vec3 psi(0.7, -0.3, 1.1);
    const Vec3 omega(0.5, 2.0, -1.0);
    const Vec3 psi_dot = tangent_so3_inv(psi) * omega;
    const double h = 1e-7;
    const Mat3 A = exp_so3(psi);
    const Mat3 dA =
        (exp_so3(psi + h * psi_dot) - exp_so3(psi - h * psi_dot)) / (2 * h);
    REQUIRE((vee(skw(A.transpose() * dA)) - omega).norm() < 1e-6);
}

TEST_CASE("free-free tangent has exactly six rigid modes") {
    const RodModel model = small_rod();
    const VecX q = model.reference_coordinates();
    const MatX K =
        MatX(detail::tangent_fd(model, q, LoadCase{}, 0.0));
    const Eigen::JacobiSVD<MatX> svd(K);
    const VecX s = svd.singularValues();
    const double scale = s[0];
    int near_zero = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s[i] < 1e-6 * scale) ++near_zero;
    REQUIRE(near_zero == 6);
}

TEST_CASE("clamping one node removes the rigid modes") {
    const RodModel model = small_rod();
    const VecX q = model.reference_coordinates();
    BoundaryConditions bc;
    bc.clamp_node(0, q);
    const auto Kr = detail::reduce(
        detail::tangent_fd(model, q, LoadCase{}, 0.0),
        bc.free_indices(model.dof_count()));
    const Eigen::JacobiSVD<MatX> svd{MatX(Kr)};
    const VecX s = svd.singularValues();
    REQUIRE(s[s.size() - 1] > 1e-8 * s[0]);
}

TEST_CASE("statics: zero load converges immediately to the reference") {
    const RodModel model = small_rod();
    BoundaryConditions bc;
    bc.clamp_node(0, model.reference_coordinates());
    const StaticResult r = solve_static(model, bc, LoadCase{});
    REQUIRE((r.q - model.reference_coordinates()).norm() == 0.0);
    for (int it : r.iterations_per_step) REQUIRE(it == 0);
}

TEST_CASE("statics: small tip moment matches linear beam theory") {
    const double L = 1.0, M_tip = 1e-4;
    const Mesh mesh(8, 1);
    const SectionProperties sec = test_section();
    const RodModel model(mesh, InterpolationKind::SE3, sec,
                         straight_rod_coordinates(mesh, L));
    BoundaryConditions bc;
    bc.clamp_node(0, model.reference_coordinates());
    LoadCase loads;
    loads.at_end.moment = Vec3(0, 0, M_tip);
    StaticSettings settings;
    settings.n_load_steps = 2;
    settings.atol = 1e-12;
    const StaticResult r = solve_static(model, bc, loads, settings);
    const double tip_angle = r.q[6 * (mesh.node_count() - 1) + 5];
    REQUIRE(tip_angle ==
            Catch::Approx(M_tip * L / sec.law.C_kappa[2]).epsilon(1e-3));
}

TEST_CASE("statics: iteration cap raises NoConvergence with context") {
    const RodModel model = small_rod();
    BoundaryConditions bc;
    bc.clamp_node(0, model.reference_coordinates());
    LoadCase loads;
    loads.at_end.force = Vec3(0, 0.5, 0);
    StaticSettings settings;
    settings.n_load_steps = 1;
    settings.max_iterations = 0; // cannot converge in zero iterations
    settings.atol = 1e-14;
    try {
        solve_static(model, bc, loads, settings);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        REQUIRE(e.load_step == 1);
        REQUIRE(e.residual_norm > 0.0);
    }
}

TEST_CASE("dynamics: consistent gravity gives uniform free-fall acceleration") {
    const RodModel model = small_rod(3);
    LoadCase loads;
    loads.distributed_force = Vec3(0, 0, -9.81) * model.inertia().A_rho0;
    const DynamicSystem system(model, loads, BoundaryConditions{});
    SystemState s0{model.reference_coordinates(),
                   VecX::Zero(model.dof_count()), 0.0};
    const auto [qdot, udot] = system.rhs(s0);
    REQUIRE(qdot.norm() == 0.0);
    for (int n = 0; n < model.mesh().node_count(); ++n) {
        REQUIRE((Vec3(udot.segment<3>(6 * n)) - Vec3(0, 0, -9.81)).norm() <
                1e-10);
        REQUIRE(udot.segment<3>(6 * n + 3).norm() < 1e-10);
    }
}

TEST_CASE("dynamics: unloaded rod at rest stays at rest") {
    const RodModel model = small_rod();
    const DynamicSystem system(model, LoadCase{}, BoundaryConditions{});
    const auto [qdot, udot] = system.rhs(
        {model.reference_coordinates(), VecX::Zero(model.dof_count()), 0.0});
    REQUIRE(qdot.norm() == 0.0);
    REQUIRE(udot.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dynamics: the mass matrix is factorized exactly once") {
    const RodModel model = small_rod();
    const DynamicSystem system(model, LoadCase{}, BoundaryConditions{});
    SystemState s{model.reference_coordinates(),
                  VecX::Zero(model.dof_count()), 0.0};
    for (int i = 0; i < 25; ++i) system.rhs(s);
    REQUIRE(system.factorization_count() == 1);
    REQUIRE(system.rhs_count() == 25);
}

TEST_CASE("dynamics: fixed coordinates keep zero rates") {
    const RodModel model = small_rod();
    BoundaryConditions bc;
    bc.clamp_node(0, model.reference_coordinates());
    LoadCase loads;
    loads.distributed_force = Vec3(0, -1, 0);
    VecX u = VecX::Random(model.dof_count());
    const DynamicSystem system(model, loads, bc);
    const auto [qdot, udot] =
        system.rhs({model.reference_coordinates(), u, 0.0});
    for (int k = 0; k < 6; ++k) {
        REQUIRE(qdot[k] == 0.0);
        REQUIRE(udot[k] == 0.0);
    }
}

TEST_CASE("integrate_ode: adaptive solution of a linear ODE") {
    // y' = -3 y, exact decay
    const OdeRhs f = [](double, const VecX& y) -> VecX { return -3.0 * y; };
    VecX y0(1);
    y0 << 2.0;
    DynamicSettings settings;
    settings.t_end = 1.0;
    settings.atol = 1e-10;
    settings.rtol = 1e-10;
    const auto samples =
        integrate_ode(f, y0, 0.0, settings, {0.0, 0.25, 0.5, 1.0});
    REQUIRE(samples.size() == 4);
    for (const auto& [t, y] : samples) {
        REQUIRE(y[0] == Catch::Approx(2.0 * std::exp(-3.0 * t)).margin(1e-8));
    }
    REQUIRE(samples[1].first == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("integrate_ode: fixed-step RK4 has fourth-order accuracy") {
    const OdeRhs f = [](double, const VecX& y) -> VecX { return y; };
    VecX y0(1);
    y0 << 1.0;
    const auto run = [&](double dt) {
        DynamicSettings settings;
        settings.t_end = 1.0;
        settings.fixed_dt = dt;
        const auto samples = integrate_ode(f, y0, 0.0, settings, {1.0});
        return std::abs(samples.back().second[0] - std::exp(1.0));
    };
    const double e1 = run(0.1);
    const double e2 = run(0.05);
    REQUIRE(e1 / e2 == Catch::Approx(16.0).epsilon(0.2));
}

TEST_CASE("integrate_ode: post_step hook is applied after accepted steps") {
    const OdeRhs f = [](double, const VecX& y) -> VecX {
        return VecX::Ones(y.size());
    };
    VecX y0 = VecX::Zero(1);
    DynamicSettings settings;
    settings.t_end = 1.0;
    settings.fixed_dt = 0.25;
    int calls = 0;
    const auto samples = integrate_ode(
        f, y0, 0.0, settings, {1.0}, [&](VecX&) { ++calls; });
    REQUIRE(calls == 4);
    REQUIRE(samples.back().second[0] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("free fall conserves the linear-momentum balance") {
    const RodModel model = small_rod(2);
    LoadCase loads;
    loads.distributed_force = Vec3(0, 0, -9.81) * model.inertia().A_rho0;
    const DynamicSystem system(model, loads, BoundaryConditions{});
    DynamicSettings settings;
    settings.t_end = 0.5;
    settings.atol = 1e-10;
    settings.rtol = 1e-10;
    const Trajectory traj = integrate_dynamic(
        system, {model.reference_coordinates(),
                 VecX::Zero(model.dof_count()), 0.0},
        settings, {0.5});
    const SystemState& s = traj.samples.back();
    // every node is in free fall: v = g t, z = -g t^2 / 2
    for (int n = 0; n < model.mesh().node_count(); ++n) {
        REQUIRE(s.u[6 * n + 2] ==
                Catch::Approx(-9.81 * 0.5).epsilon(1e-8));
        REQUIRE(s.q[6 * n + 2] ==
                Catch::Approx(-9.81 * 0.125).epsilon(1e-8));
    }
}

TEST_CASE("energies: kinetic and strain terms have closed forms") {
    const RodModel model = small_rod(1, 2.0);
    VecX u = VecX::Zero(model.dof_count());
    u[0] = u[6] = 3.0; // uniform axial velocity
    const Energies e = energies({model.reference_coordinates(), u, 0.0},
                                model, LoadCase{});
    const double mass = model.inertia().A_rho0 * 2.0;
    REQUIRE(e.kinetic == Catch::Approx(0.5 * mass * 9.0).epsilon(1e-12));
    REQUIRE(e.potential == 0.0);
}
