#ifndef COSSERAT_INTERPOLATION_HPP
#define COSSERAT_INTERPOLATION_HPP

#include <array>
#include <stdexcept>

#include "cosserat/liegroup.hpp"
#include "cosserat/mesh.hpp"
#include "cosserat/types.hpp"

namespace cosserat {

/// Nodal coordinates of one element, sliced out of the global tuple.
struct ElementCoords {
    std::array<Vec3, 3> r{};   // centerline points, inertial components
    std::array<Vec3, 3> psi{}; // total rotation vectors
    int p = 1;
};

inline ElementCoords element_coords(const Mesh& mesh, int e, const VecX& q) {
    ElementCoords c;
    c.p = mesh.order();
    for (int i = 0; i <= mesh.order(); ++i) {
        const int n = mesh.global_node(e, i);
        c.r[i] = node_position(q, n);
        c.psi[i] = node_rotation(q, n);
    }
    return c;
}

inline void check_kind_order(InterpolationKind kind, int p) {
    if (kind != InterpolationKind::R12 && p != 1)
        throw std::invalid_argument(
            "R3xSO3 and SE3 interpolations support only two-node elements");
}

/// Centerline/orientation sample; A is generally non-orthogonal for R12.
struct FrameField {
    Vec3 r = Vec3::Zero();
    Vec3 r_xi = Vec3::Zero();
    Mat3 A = Mat3::Identity();
    Mat3 A_xi = Mat3::Zero();
};

// ---------------------------------------------------------------- R12 ----

inline FrameField eval_r12(const Mesh& mesh, int e, const ElementCoords& c,
                           double xi) {
    const LagrangeBasis b = mesh.lagrange_basis(e, xi);
    FrameField f;
    f.A.setZero();
    for (int i = 0; i <= c.p; ++i) {
        const Mat3 Ai = exp_so3(c.psi[i]);
        f.r += b.values[i] * c.r[i];
        f.r_xi += b.derivatives[i] * c.r[i];
        f.A += b.values[i] * Ai;
        f.A_xi += b.derivatives[i] * Ai;
    }
    return f;
}

inline StrainState strain_r12(const Mesh& mesh, int e, const ElementCoords& c,
                              double xi, double J) {
    const FrameField f = eval_r12(mesh, e, c, xi);
    StrainState s;
    s.gamma = f.A.transpose() * f.r_xi / J;
    s.kappa = vee(skw(f.A.transpose() * f.A_xi)) / J;
    return s;
}

// ----------------------------------------------------------- R3 x SO3 ----

inline FrameField eval_r3so3(const Mesh& mesh, int e, const ElementCoords& c,
                             double xi) {
    check_kind_order(InterpolationKind::R3xSO3, c.p);
    const LagrangeBasis b = mesh.lagrange_basis(e, xi);
    const Mat3 A0 = exp_so3(c.psi[0]);
    const Mat3 A1 = exp_so3(c.psi[1]);
    const Vec3 psi01 = log_so3(A0.transpose() * A1);
    FrameField f;
    f.r = b.values[0] * c.r[0] + b.values[1] * c.r[1];
    f.r_xi = b.derivatives[0] * c.r[0] + b.derivatives[1] * c.r[1];
    f.A = A0 * exp_so3(b.values[1] * psi01);
    return f;
}

inline StrainState strain_r3so3(const Mesh& mesh, int e,
                                const ElementCoords& c, double xi, double J) {
    const FrameField f = eval_r3so3(mesh, e, c, xi);
    const Mat3 A0 = exp_so3(c.psi[0]);
    const Vec3 psi01 = log_so3(A0.transpose() * exp_so3(c.psi[1]));
    StrainState s;
    s.gamma = f.A.transpose() * f.r_xi / J;
    s.kappa = psi01 / (mesh.element_width() * J); // constant over the element
    return s;
}

// ----------------------------------------------------------------- SE3 ----

inline FrameTransform node_transform(const ElementCoords& c, int i) {
    return {exp_so3(c.psi[i]), c.r[i]};
}

/// Relative twist between the two nodal Euclidean transforms.
inline Twist relative_twist(const ElementCoords& c) {
    check_kind_order(InterpolationKind::SE3, c.p);
    const FrameTransform h0 = node_transform(c, 0);
    const FrameTransform h1 = node_transform(c, 1);
    return log_se3(inverse_transform(h0) * h1);
}

inline FrameTransform eval_se3(const Mesh& mesh, int e, const ElementCoords& c,
                               double xi) {
    const LagrangeBasis b = mesh.lagrange_basis(e, xi);
    const Twist theta01 = relative_twist(c);
    const Twist scaled{b.values[1] * theta01.linear,
                       b.values[1] * theta01.angular};
    return node_transform(c, 0) * exp_se3(scaled);
}

/// Piecewise constant over the element; xi-independent by construction.
inline StrainState strain_se3(const Mesh& mesh, const ElementCoords& c,
                              double J) {
    const Twist theta01 = relative_twist(c);
    const double scale = 1.0 / (mesh.element_width() * J);
    return {scale * theta01.linear, scale * theta01.angular};
}

// -------------------------------------------------------------- generic ----

/// Strain of element e at xi for the given interpolation kind.
inline StrainState strain(InterpolationKind kind, const Mesh& mesh, int e,
                          const ElementCoords& c, double xi, double J) {
    switch (kind) {
        case InterpolationKind::R12: return strain_r12(mesh, e, c, xi, J);
        case InterpolationKind::R3xSO3: return strain_r3so3(mesh, e, c, xi, J);
        case InterpolationKind::SE3: return strain_se3(mesh, c, J);
    }
    throw std::logic_error("unreachable");
}

/// Centerline point and orientation of element e at xi. For R12 the
/// orientation block is the (generally non-orthogonal) interpolated matrix.
inline FrameTransform frame(InterpolationKind kind, const Mesh& mesh, int e,
                            const ElementCoords& c, double xi) {
    switch (kind) {
        case InterpolationKind::R12: {
            const FrameField f = eval_r12(mesh, e, c, xi);
            return {f.A, f.r};
        }
        case InterpolationKind::R3xSO3: {
            const FrameField f = eval_r3so3(mesh, e, c, xi);
            return {f.A, f.r};
        }
        case InterpolationKind::SE3: return eval_se3(mesh, e, c, xi);
    }
    throw std::logic_error("unreachable");
}

/// Frame of the whole rod field at global parameter xi.
inline FrameTransform frame_at(InterpolationKind kind, const Mesh& mesh,
                               const VecX& q, double xi) {
    const int e = mesh.locate(xi);
    return frame(kind, mesh, e, element_coords(mesh, e, q), xi);
}

/// Tangent r_xi of element e at xi (inertial components).
inline Vec3 centerline_derivative(InterpolationKind kind, const Mesh& mesh,
                                  int e, const ElementCoords& c, double xi) {
    switch (kind) {
        case InterpolationKind::R12: return eval_r12(mesh, e, c, xi).r_xi;
        case InterpolationKind::R3xSO3: return eval_r3so3(mesh, e, c, xi).r_xi;
        case InterpolationKind::SE3: {
            // constant body-frame tangent A(xi) * gamma_bar
            const Twist theta01 = relative_twist(c);
            const FrameTransform h = eval_se3(mesh, e, c, xi);
            return h.rotation * theta01.linear / mesh.element_width();
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace cosserat

#endif
