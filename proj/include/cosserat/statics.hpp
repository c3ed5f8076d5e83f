#ifndef COSSERAT_STATICS_HPP
#define COSSERAT_STATICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "cosserat/errors.hpp"
#include "cosserat/rodmodel.hpp"

namespace cosserat {

/// Clamped coordinates: global coordinate indices with prescribed values,
/// eliminated from the reduced system.
class BoundaryConditions {
  public:
    void fix(int index, double value = 0.0) { fixed_.push_back({index, value}); }

    /// Clamp all six coordinates of a node to its current values in q.
    void clamp_node(int node, const VecX& q) {
        for (int k = 0; k < 6; ++k) fix(6 * node + k, q[6 * node + k]);
    }

    const std::vector<std::pair<int, double>>& fixed() const { return fixed_; }

    std::vector<int> free_indices(int n) const {
        std::vector<bool> is_fixed(n, false);
        for (const auto& [i, v] : fixed_) is_fixed[i] = true;
        std::vector<int> free;
        free.reserve(n - fixed_.size());
        for (int i = 0; i < n; ++i)
            if (!is_fixed[i]) free.push_back(i);
        return free;
    }

    void apply(VecX& q) const {
        for (const auto& [i, v] : fixed_) q[i] = v;
    }

  private:
    std::vector<std::pair<int, double>> fixed_;
};

struct StaticSettings {
    int n_load_steps = 50;
    double atol = 1e-8; // max-norm of the reduced residual
    int max_iterations = 30;
};

struct StaticResult {
    VecX q;
    std::vector<int> iterations_per_step;
};

/// Forward-difference Jacobian, column step sqrt(eps)*max(1,|x_j|).
/// The result is non-symmetric in general.
inline MatX jacobian_fd(const VecX& x,
                        const std::function<VecX(const VecX&)>& fn) {
    const VecX f0 = fn(x);
    MatX jac(f0.size(), x.size());
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    VecX xp = x;
    for (int j = 0; j < x.size(); ++j) {
        const double h = sqrt_eps * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        jac.col(j) = (fn(xp) - f0) / h;
        xp[j] = x[j];
    }
    return jac;
}

/// Reduced static residual f_int(q) + load_factor * f_ext(q) with fixed
/// rows removed; prescribed values are substituted before evaluation.
inline VecX residual_static(const RodModel& model, VecX q,
                            const LoadCase& loads, double load_factor,
                            const BoundaryConditions& bc) {
    bc.apply(q);
    const VecX r = model.f_int(q) + load_factor * model.f_ext(q, loads);
    const std::vector<int> free = bc.free_indices(model.dof_count());
    VecX reduced(free.size());
    for (size_t i = 0; i < free.size(); ++i) reduced[i] = r[free[i]];
    return reduced;
}

namespace detail {

/// Element-wise central-difference tangent of f_int + load_factor *
/// f_ext_boundary, assembled sparse. Exploits element locality, so it costs
/// 12(p+1) element evaluations per element instead of 6N residual sweeps.
/// Central differences keep Newton quadratic even for slender rods, where
/// the forward-difference truncation error stalls the iteration.
inline Eigen::SparseMatrix<double>
tangent_fd(const RodModel& model, const VecX& q, const LoadCase& loads,
           double load_factor) {
    const Mesh& mesh = model.mesh();
    const int n = model.dof_count();
    const int ne = 6 * (mesh.order() + 1);
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.element_count() * ne * ne + 144);
    for (int e = 0; e < mesh.element_count(); ++e) {
        ElementCoords c = element_coords(mesh, e, q);
        for (int j = 0; j < ne; ++j) {
            const int node_local = j / 6;
            const int comp = j % 6;
            double* entry = comp < 3 ? c.r[node_local].data() + comp
                                     : c.psi[node_local].data() + comp - 3;
            const double saved = *entry;
            const double h = sqrt_eps * std::max(1.0, std::abs(saved));
            *entry = saved + h;
            const VecX fp = model.f_int_element(e, c);
            *entry = saved - h;
            const VecX df = (fp - model.f_int_element(e, c)) / (2.0 * h);
            *entry = saved;
            const int col = 6 * mesh.global_node(e, node_local) + comp;
            for (int i = 0; i < ne; ++i) {
                const int row = 6 * mesh.global_node(e, i / 6) + i % 6;
                triplets.emplace_back(row, col, df[i]);
            }
        }
    }
    // follower boundary forces depend on the end-node rotation coordinates
    if (load_factor != 0.0 &&
        (loads.at_start.follower || loads.at_end.follower)) {
        VecX qp = q;
        for (int node : {0, mesh.node_count() - 1}) {
            for (int comp = 3; comp < 6; ++comp) {
                const int j = 6 * node + comp;
                const double h = sqrt_eps * std::max(1.0, std::abs(q[j]));
                qp[j] = q[j] + h;
                const VecX fp = model.f_ext_boundary(qp, loads);
                qp[j] = q[j] - h;
                const VecX df = load_factor *
                                (fp - model.f_ext_boundary(qp, loads)) /
                                (2.0 * h);
                qp[j] = q[j];
                for (int i = 0; i < n; ++i)
                    if (df[i] != 0.0) triplets.emplace_back(i, j, df[i]);
            }
        }
    }
    Eigen::SparseMatrix<double> K(n, n);
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
}

inline Eigen::SparseMatrix<double>
reduce(const Eigen::SparseMatrix<double>& K, const std::vector<int>& free) {
    const int n = K.rows();
    std::vector<int> map(n, -1);
    for (size_t i = 0; i < free.size(); ++i) map[free[i]] = int(i);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(K.nonZeros());
    for (int k = 0; k < K.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, k); it; ++it)
            if (map[it.row()] >= 0 && map[it.col()] >= 0)
                triplets.emplace_back(map[it.row()], map[it.col()], it.value());
    Eigen::SparseMatrix<double> Kr(free.size(), free.size());
    Kr.setFromTriplets(triplets.begin(), triplets.end());
    return Kr;
}

} // namespace detail

/// Newton-Raphson with linear load stepping and warm starts. Throws
/// NoConvergence when the iteration cap is hit (no automatic substepping).
inline StaticResult solve_static(const RodModel& model,
                                 const BoundaryConditions& bc,
                                 const LoadCase& loads,
                                 const StaticSettings& settings = {}) {
    VecX q = model.reference_coordinates();
    bc.apply(q);
    const std::vector<int> free = bc.free_indices(model.dof_count());
    StaticResult result;
    for (int step = 1; step <= settings.n_load_steps; ++step) {
        const double lf = double(step) / settings.n_load_steps;
        int iterations = 0;
        double norm = 0.0;
        bool converged = false;
        for (; iterations <= settings.max_iterations; ++iterations) {
            const VecX full = model.f_int(q) + lf * model.f_ext(q, loads);
            VecX r(free.size());
            for (size_t i = 0; i < free.size(); ++i) r[i] = full[free[i]];
            norm = r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
            if (norm <= settings.atol) {
                converged = true;
                break;
            }
            if (iterations == settings.max_iterations) break;
            const auto Kr = detail::reduce(detail::tangent_fd(model, q, loads, lf), free);
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Kr);
            if (lu.info() != Eigen::Success)
                throw NoConvergence(step, iterations, norm);
            const VecX dq = lu.solve(-r);
            for (size_t i = 0; i < free.size(); ++i) q[free[i]] += dq[i];
        }
        if (!converged) throw NoConvergence(step, iterations, norm);
        result.iterations_per_step.push_back(iterations);
    }
    result.q = q;
    return result;
}

} // namespace cosserat

#endif
