#ifndef COSSERAT_DYNAMICS_HPP
#define COSSERAT_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Cholesky>

#include "cosserat/errors.hpp"
#include "cosserat/liegroup.hpp"
#include "cosserat/rodmodel.hpp"
#include "cosserat/statics.hpp"

namespace cosserat {

struct SystemState {
    VecX q;
    VecX u;
    double t = 0.0;
};

struct DynamicSettings {
    double t_end = 1.0;
    double dt_initial = 1e-4;
    double atol = 1e-8;
    double rtol = 1e-8;
    bool complement_update = true;
    double fixed_dt = 0.0; // > 0 selects the fixed-step classical RK4 mode
};

/// Node-block-diagonal map B(q) with blocks diag(I3, T_so3^-1(psi_i));
/// qdot = B(q) u.
inline MatX kinematic_map(const VecX& q) {
    const int n = static_cast<int>(q.size());
    MatX B = MatX::Identity(n, n);
    for (int node = 0; node < n / 6; ++node)
        B.block<3, 3>(6 * node + 3, 6 * node + 3) =
            tangent_so3_inv(q.segment<3>(6 * node + 3));
    return B;
}

/// qdot = B(q) u without forming the matrix.
inline VecX apply_kinematic_map(const VecX& q, const VecX& u) {
    VecX qdot = u;
    for (int node = 0; node < q.size() / 6; ++node)
        qdot.segment<3>(6 * node + 3) =
            tangent_so3_inv(q.segment<3>(6 * node + 3)) *
            u.segment<3>(6 * node + 3);
    return qdot;
}

// ------------------------------------------------------ ODE integrator ----

using OdeRhs = std::function<VecX(double, const VecX&)>;
using OdeSample = std::pair<double, VecX>;

/// Adaptive Dormand-Prince 4(5) pair with per-component error control, or
/// fixed-step classical RK4 when settings.fixed_dt > 0. `post_step` runs
/// after each accepted step (coordinate changes such as the complement
/// rotation update). States are recorded exactly at the requested sample
/// times; the step size is capped to land on them.
inline std::vector<OdeSample>
integrate_ode(const OdeRhs& f, VecX y, double t,
              const DynamicSettings& settings,
              const std::vector<double>& sample_times,
              const std::function<void(VecX&)>& post_step = {}) {
    std::vector<OdeSample> samples;
    size_t next_sample = 0;
    const auto record_due = [&]() {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= t + 1e-12 * std::max(1.0, t)) {
            samples.emplace_back(t, y);
            ++next_sample;
        }
    };
    record_due();

    if (settings.fixed_dt > 0.0) {
        while (t < settings.t_end - 1e-12) {
            double h = std::min(settings.fixed_dt, settings.t_end - t);
            if (next_sample < sample_times.size())
                h = std::min(h, sample_times[next_sample] - t);
            const VecX k1 = f(t, y);
            const VecX k2 = f(t + h / 2, y + h / 2 * k1);
            const VecX k3 = f(t + h / 2, y + h / 2 * k2);
            const VecX k4 = f(t + h, y + h * k3);
            y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += h;
            if (post_step) post_step(y);
            record_due();
        }
        return samples;
    }

    // Dormand-Prince 5(4) tableau
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                     e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640,
                     e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    double dt = settings.dt_initial;
    while (t < settings.t_end - 1e-12) {
        double h = std::min(dt, settings.t_end - t);
        if (next_sample < sample_times.size())
            h = std::min(h, sample_times[next_sample] - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepSizeUnderflow(t, h);

        const VecX k1 = f(t, y);
        const VecX k2 = f(t + c2 * h, y + h * (a21 * k1));
        const VecX k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const VecX k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const VecX k5 = f(t + c5 * h,
                          y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const VecX k6 =
            f(t + h,
              y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const VecX y1 =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const VecX k7 = f(t + h, y1);
        const VecX err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double norm = 0.0;
        for (int i = 0; i < err.size(); ++i) {
            const double scale =
                settings.atol +
                settings.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            const double r = err[i] / scale;
            norm += r * r;
        }
        norm = std::sqrt(norm / err.size());

        if (norm <= 1.0) {
            y = y1;
            t += h;
            if (post_step) post_step(y);
            record_due();
        }
        const double factor = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
        dt = h * std::clamp(factor, 0.2, 5.0);
    }
    return samples;
}

// ----------------------------------------------------- rod dynamics ----

/// First-order equations of motion with the constant mass matrix reduced to
/// the free coordinates and factorized exactly once.
class DynamicSystem {
  public:
    DynamicSystem(const RodModel& model, const LoadCase& loads,
                  const BoundaryConditions& bc)
        : model_(&model), loads_(loads),
          free_(bc.free_indices(model.dof_count())) {
        const MatX M = model.mass_matrix();
        MatX Mff(free_.size(), free_.size());
        for (size_t i = 0; i < free_.size(); ++i)
            for (size_t j = 0; j < free_.size(); ++j)
                Mff(i, j) = M(free_[i], free_[j]);
        llt_.compute(Mff);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error(
                "dynamics: mass matrix not positive definite");
    }

    const RodModel& model() const { return *model_; }
    const LoadCase& loads() const { return loads_; }
    int factorization_count() const { return factorization_count_; }
    int rhs_count() const { return rhs_count_; }

    /// (qdot, udot); fixed coordinates keep zero rates.
    std::pair<VecX, VecX> rhs(const SystemState& state) const {
        ++rhs_count_;
        const VecX forces = model_->f_gyr(state.u) + model_->f_int(state.q) +
                            model_->f_ext(state.q, loads_);
        VecX rf(free_.size());
        for (size_t i = 0; i < free_.size(); ++i) rf[i] = forces[free_[i]];
        const VecX udot_f = llt_.solve(rf);
        VecX udot = VecX::Zero(state.u.size());
        for (size_t i = 0; i < free_.size(); ++i) udot[free_[i]] = udot_f[i];
        VecX qdot = apply_kinematic_map(state.q, state.u);
        mask_fixed(qdot);
        return {qdot, udot};
    }

    void mask_fixed(VecX& rates) const {
        std::vector<bool> is_free(rates.size(), false);
        for (int i : free_) is_free[i] = true;
        for (int i = 0; i < rates.size(); ++i)
            if (!is_free[i]) rates[i] = 0.0;
    }

  private:
    const RodModel* model_;
    LoadCase loads_;
    std::vector<int> free_;
    Eigen::LLT<MatX> llt_;
    int factorization_count_ = 1;
    mutable int rhs_count_ = 0;
};

struct Trajectory {
    std::vector<SystemState> samples;
};

namespace detail {

/// Nodewise complement update; the represented rotations are unchanged.
inline void complement_update_q(VecX& q) {
    for (int node = 0; node < q.size() / 6; ++node)
        q.segment<3>(6 * node + 3) =
            complement_rotation(q.segment<3>(6 * node + 3));
}

} // namespace detail

inline Trajectory integrate_dynamic(const DynamicSystem& system,
                                    const SystemState& state0,
                                    const DynamicSettings& settings,
                                    const std::vector<double>& sample_times) {
    const int nq = static_cast<int>(state0.q.size());
    const OdeRhs f = [&](double t, const VecX& y) {
        const auto [qdot, udot] = system.rhs({y.head(nq), y.tail(nq), t});
        VecX dy(2 * nq);
        dy << qdot, udot;
        return dy;
    };
    std::function<void(VecX&)> post;
    if (settings.complement_update)
        post = [nq](VecX& y) {
            VecX q = y.head(nq);
            detail::complement_update_q(q);
            y.head(nq) = q;
        };
    VecX y0(2 * nq);
    y0 << state0.q, state0.u;
    Trajectory traj;
    for (auto& [t, y] : integrate_ode(f, y0, state0.t, settings, sample_times, post))
        traj.samples.push_back({y.head(nq), y.tail(nq), t});
    return traj;
}

/// (E_kin, E_pot, E_tot); the potential includes the strain energy and the
/// potential of the distributed force (e.g. gravity).
struct Energies {
    double kinetic;
    double potential;
    double total;
};

inline Energies energies(const SystemState& state, const RodModel& model,
                         const LoadCase& loads, const MatX& mass) {
    const double e_kin = 0.5 * state.u.dot(mass * state.u);
    double external = 0.0;
    if (!loads.distributed_force.isZero()) {
        const Mesh& mesh = model.mesh();
        for (int e = 0; e < mesh.element_count(); ++e) {
            const ElementCoords c = element_coords(mesh, e, state.q);
            const ElementSampler sampler(model.kind(), mesh, e, c);
            const QuadratureRule& rule = model.rule_full(e);
            const auto& ref = model.reference_full(e);
            for (int g = 0; g < rule.size(); ++g)
                external += rule.weights[g] * ref[g].J *
                            loads.distributed_force.dot(
                                sampler.sample(rule.points[g]).r);
        }
    }
    const double e_pot = model.strain_energy(state.q) - external;
    return {e_kin, e_pot, e_kin + e_pot};
}

inline Energies energies(const SystemState& state, const RodModel& model,
                         const LoadCase& loads) {
    return energies(state, model, loads, model.mass_matrix());
}

} // namespace cosserat

#endif
