#ifndef COSSERAT_MESH_HPP
#define COSSERAT_MESH_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "cosserat/types.hpp"

namespace cosserat {

/// Values and derivatives of the p-th order Lagrange basis at one point.
struct LagrangeBasis {
    std::array<double, 3> values{};      // entries 0..p valid
    std::array<double, 3> derivatives{}; // entries 0..p valid
};

enum class InterpolationKind { R12, R3xSO3, SE3 };

/// Uniform partition of [0,1] into n_el elements of order p (1 or 2) with
/// evenly spaced nodes; shared boundary nodes are identified, so the mesh
/// carries N = p*n_el + 1 global nodes.
class Mesh {
  public:
    Mesh(int n_el, int p) : n_el_(n_el), p_(p) {
        if (n_el < 1) throw std::invalid_argument("mesh: n_el must be >= 1");
        if (p != 1 && p != 2)
            throw std::invalid_argument("mesh: order p must be 1 or 2");
    }

    int element_count() const { return n_el_; }
    int order() const { return p_; }
    int node_count() const { return p_ * n_el_ + 1; }
    int dof_count() const { return 6 * node_count(); }

    double element_begin(int e) const { return double(e) / n_el_; }
    double element_end(int e) const { return double(e + 1) / n_el_; }
    double element_width() const { return 1.0 / n_el_; }

    /// Parameter of local node i of element e.
    double node_parameter(int e, int i) const {
        return element_begin(e) + element_width() * double(i) / p_;
    }

    /// Global node index of local node i of element e.
    int global_node(int e, int i) const { return e * p_ + i; }

    /// Element containing xi; xi = 1 is assigned to the last element.
    int locate(double xi) const {
        if (xi < 0.0 || xi > 1.0)
            throw std::out_of_range("mesh: parameter outside [0,1]");
        const int e = static_cast<int>(xi * n_el_);
        return std::min(e, n_el_ - 1);
    }

    /// Lagrange basis values and derivatives on element e at xi.
    LagrangeBasis lagrange_basis(int e, double xi) const {
        const double lo = element_begin(e);
        const double hi = element_end(e);
        const double tol = 1e-12 * element_width();
        if (xi < lo - tol || xi > hi + tol)
            throw std::out_of_range("mesh: parameter outside element closure");
        LagrangeBasis b;
        std::array<double, 3> nodes{};
        for (int i = 0; i <= p_; ++i) nodes[i] = node_parameter(e, i);
        for (int i = 0; i <= p_; ++i) {
            double v = 1.0;
            for (int j = 0; j <= p_; ++j) {
                if (j == i) continue;
                v *= (xi - nodes[j]) / (nodes[i] - nodes[j]);
            }
            b.values[i] = v;
            // product-rule form, well defined at the nodes
            double d = 0.0;
            for (int k = 0; k <= p_; ++k) {
                if (k == i) continue;
                double term = 1.0 / (nodes[i] - nodes[k]);
                for (int j = 0; j <= p_; ++j) {
                    if (j == i || j == k) continue;
                    term *= (xi - nodes[j]) / (nodes[i] - nodes[j]);
                }
                d += term;
            }
            b.derivatives[i] = d;
        }
        return b;
    }

  private:
    int n_el_;
    int p_;
};

/// Per-node slices of a global coordinate tuple q in R^{6N}:
/// node i occupies [6i, 6i+3) for the centerline point and
/// [6i+3, 6i+6) for the total rotation vector.
inline Eigen::Ref<const Vec3> node_position(const VecX& q, int node) {
    return q.segment<3>(6 * node);
}
inline Eigen::Ref<const Vec3> node_rotation(const VecX& q, int node) {
    return q.segment<3>(6 * node + 3);
}

} // namespace cosserat

#endif
