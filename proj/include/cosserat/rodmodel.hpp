#ifndef COSSERAT_RODMODEL_HPP
#define COSSERAT_RODMODEL_HPP

#include <vector>

#include "cosserat/interpolation.hpp"
#include "cosserat/mesh.hpp"
#include "cosserat/quadrature.hpp"
#include "cosserat/section.hpp"
#include "cosserat/types.hpp"

namespace cosserat {

enum class Integration { Full, Reduced };

/// Boundary point load at one rod end. A follower force is given in body
/// components and rotated by the current end-node orientation; otherwise
/// the force components are inertial. Moments are body components.
struct BoundaryLoad {
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();
    bool follower = false;
};

/// Loads are constant in the load/time parameter; scaling enters through
/// the solver's scalar load factor.
struct LoadCase {
    Vec3 distributed_force = Vec3::Zero();  // inertial, per reference arc length
    Vec3 distributed_moment = Vec3::Zero(); // body, per reference arc length
    BoundaryLoad at_start;
    BoundaryLoad at_end;
};

/// Constitutive law: n = C_gamma (gamma - gamma0), m = C_kappa (kappa - kappa0).
inline std::pair<Vec3, Vec3> constitutive(const StrainState& eps,
                                          const ElasticLaw& law,
                                          const StrainState& eps0) {
    return {law.C_gamma.cwiseProduct(eps.gamma - eps0.gamma),
            law.C_kappa.cwiseProduct(eps.kappa - eps0.kappa)};
}

/// Per-element kinematics with the element-constant pieces (nodal rotation
/// matrices, relative rotation vector / twist) computed once.
class ElementSampler {
  public:
    ElementSampler(InterpolationKind kind, const Mesh& mesh, int e,
                   const ElementCoords& c)
        : kind_(kind), mesh_(&mesh), e_(e), c_(c) {
        for (int i = 0; i <= c.p; ++i) A_[i] = exp_so3(c.psi[i]);
        if (kind == InterpolationKind::R3xSO3) {
            check_kind_order(kind, c.p);
            psi01_ = log_so3(A_[0].transpose() * A_[1]);
        } else if (kind == InterpolationKind::SE3) {
            check_kind_order(kind, c.p);
            theta01_ = log_se3(inverse_transform({A_[0], c.r[0]}) *
                               FrameTransform{A_[1], c.r[1]});
        }
    }

    /// Orientation and xi-measure (barred) strains at xi.
    struct Sample {
        Mat3 A;         // cross-section orientation (non-orthogonal for R12)
        Vec3 r;         // centerline point
        Vec3 gamma_bar; // A^T r_xi
        Vec3 kappa_bar; // J kappa
    };

    Sample sample(double xi) const {
        const LagrangeBasis b = mesh_->lagrange_basis(e_, xi);
        Sample s;
        switch (kind_) {
            case InterpolationKind::R12: {
                Vec3 r = Vec3::Zero(), r_xi = Vec3::Zero();
                Mat3 A = Mat3::Zero(), A_xi = Mat3::Zero();
                for (int i = 0; i <= c_.p; ++i) {
                    r += b.values[i] * c_.r[i];
                    r_xi += b.derivatives[i] * c_.r[i];
                    A += b.values[i] * A_[i];
                    A_xi += b.derivatives[i] * A_[i];
                }
                s.A = A;
                s.r = r;
                s.gamma_bar = A.transpose() * r_xi;
                s.kappa_bar = vee(skw(A.transpose() * A_xi));
                break;
            }
            case InterpolationKind::R3xSO3: {
                s.A = A_[0] * exp_so3(b.values[1] * psi01_);
                s.r = b.values[0] * c_.r[0] + b.values[1] * c_.r[1];
                const Vec3 r_xi =
                    b.derivatives[0] * c_.r[0] + b.derivatives[1] * c_.r[1];
                s.gamma_bar = s.A.transpose() * r_xi;
                s.kappa_bar = psi01_ / mesh_->element_width();
                break;
            }
            case InterpolationKind::SE3: {
                const Twist scaled{b.values[1] * theta01_.linear,
                                   b.values[1] * theta01_.angular};
                const FrameTransform h =
                    FrameTransform{A_[0], c_.r[0]} * exp_se3(scaled);
                s.A = h.rotation;
                s.r = h.translation;
                s.gamma_bar = theta01_.linear / mesh_->element_width();
                s.kappa_bar = theta01_.angular / mesh_->element_width();
                break;
            }
        }
        return s;
    }

  private:
    InterpolationKind kind_;
    const Mesh* mesh_;
    int e_;
    ElementCoords c_;
    std::array<Mat3, 3> A_{};
    Vec3 psi01_ = Vec3::Zero();
    Twist theta01_;
};

/// Mesh + interpolation strategy + section/material data + precomputed
/// reference geometry (J, gamma0, kappa0 at the quadrature points, evaluated
/// with the same interpolation kind as the deformed state).
class RodModel {
  public:
    RodModel(Mesh mesh, InterpolationKind kind, SectionProperties section,
             VecX q_reference, Integration integration = Integration::Reduced)
        : mesh_(mesh), kind_(kind), section_(section),
          q_ref_(std::move(q_reference)), integration_(integration) {
        check_kind_order(kind, mesh.order());
        if (q_ref_.size() != mesh.dof_count())
            throw std::invalid_argument("rodmodel: reference coordinate size");
        const auto [m_full, m_red] = quadrature_counts(mesh.order());
        for (int e = 0; e < mesh.element_count(); ++e) {
            const double a = mesh.element_begin(e);
            const double b = mesh.element_end(e);
            rules_full_.push_back(gauss_legendre(m_full, a, b));
            rules_red_.push_back(gauss_legendre(m_red, a, b));
            ref_full_.push_back(reference_points(e, rules_full_.back()));
            ref_red_.push_back(reference_points(e, rules_red_.back()));
        }
    }

    const Mesh& mesh() const { return mesh_; }
    InterpolationKind kind() const { return kind_; }
    const ElasticLaw& law() const { return section_.law; }
    const CrossSectionInertia& inertia() const { return section_.inertia; }
    const VecX& reference_coordinates() const { return q_ref_; }
    Integration integration() const { return integration_; }
    int dof_count() const { return mesh_.dof_count(); }

    const QuadratureRule& rule_full(int e) const { return rules_full_[e]; }
    /// Rule used for internal virtual work (full or reduced per model setting).
    const QuadratureRule& rule_internal(int e) const {
        return integration_ == Integration::Full ? rules_full_[e]
                                                 : rules_red_[e];
    }

    /// Reference strains and Jacobian at one quadrature point.
    struct ReferencePoint {
        double J;
        StrainState strain0;
    };
    const std::vector<ReferencePoint>& reference_internal(int e) const {
        return integration_ == Integration::Full ? ref_full_[e] : ref_red_[e];
    }
    const std::vector<ReferencePoint>& reference_full(int e) const {
        return ref_full_[e];
    }

    /// ||r0_xi(xi)||, the reference tangent length at an arbitrary xi.
    double reference_jacobian(double xi) const {
        const int e = mesh_.locate(xi);
        const ElementCoords c0 = element_coords(mesh_, e, q_ref_);
        return centerline_derivative(kind_, mesh_, e, c0, xi).norm();
    }

    // ------------------------------------------------------ internal ----

    /// Element internal generalized force, leading minus included.
    VecX f_int_element(int e, const ElementCoords& c) const {
        const QuadratureRule& rule = rule_internal(e);
        const auto& ref = reference_internal(e);
        const ElementSampler sampler(kind_, mesh_, e, c);
        const int p = mesh_.order();
        VecX f = VecX::Zero(6 * (p + 1));
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = rule.points[g];
            const double w = rule.weights[g];
            const double J = ref[g].J;
            const auto s = sampler.sample(xi);
            const StrainState eps{s.gamma_bar / J, s.kappa_bar / J};
            const auto [n, m] = constitutive(eps, section_.law, ref[g].strain0);
            const Vec3 cross = s.gamma_bar.cross(n) + s.kappa_bar.cross(m);
            const Vec3 An = s.A * n;
            const LagrangeBasis b = mesh_.lagrange_basis(e, xi);
            for (int i = 0; i <= p; ++i) {
                f.segment<3>(6 * i) -= w * b.derivatives[i] * An;
                f.segment<3>(6 * i + 3) -=
                    w * (b.derivatives[i] * m - b.values[i] * cross);
            }
        }
        return f;
    }

    VecX f_int(const VecX& q) const {
        VecX f = VecX::Zero(dof_count());
        for (int e = 0; e < mesh_.element_count(); ++e) {
            const VecX fe = f_int_element(e, element_coords(mesh_, e, q));
            scatter(e, fe, f);
        }
        return f;
    }

    double strain_energy(const VecX& q) const {
        double energy = 0.0;
        for (int e = 0; e < mesh_.element_count(); ++e) {
            const ElementCoords c = element_coords(mesh_, e, q);
            const ElementSampler sampler(kind_, mesh_, e, c);
            const QuadratureRule& rule = rule_internal(e);
            const auto& ref = reference_internal(e);
            for (int g = 0; g < rule.size(); ++g) {
                const double J = ref[g].J;
                const auto s = sampler.sample(rule.points[g]);
                const StrainState eps{s.gamma_bar / J, s.kappa_bar / J};
                const Vec3 dg = eps.gamma - ref[g].strain0.gamma;
                const Vec3 dk = eps.kappa - ref[g].strain0.kappa;
                const double W =
                    0.5 * dg.dot(section_.law.C_gamma.cwiseProduct(dg)) +
                    0.5 * dk.dot(section_.law.C_kappa.cwiseProduct(dk));
                energy += rule.weights[g] * W * J;
            }
        }
        return energy;
    }

    // ------------------------------------------------------ external ----

    /// Distributed part of the element external force (full quadrature).
    VecX f_ext_element(int e, const LoadCase& loads) const {
        const QuadratureRule& rule = rules_full_[e];
        const auto& ref = ref_full_[e];
        const int p = mesh_.order();
        VecX f = VecX::Zero(6 * (p + 1));
        if (loads.distributed_force.isZero() &&
            loads.distributed_moment.isZero())
            return f;
        for (int g = 0; g < rule.size(); ++g) {
            const double wJ = rule.weights[g] * ref[g].J;
            const LagrangeBasis b = mesh_.lagrange_basis(e, rule.points[g]);
            for (int i = 0; i <= p; ++i) {
                f.segment<3>(6 * i) += wJ * b.values[i] * loads.distributed_force;
                f.segment<3>(6 * i + 3) +=
                    wJ * b.values[i] * loads.distributed_moment;
            }
        }
        return f;
    }

    /// Boundary point loads; follower forces use the current end-node
    /// orientation, so this part depends on q.
    VecX f_ext_boundary(const VecX& q, const LoadCase& loads) const {
        VecX f = VecX::Zero(dof_count());
        const int last = mesh_.node_count() - 1;
        const auto add = [&](int node, const BoundaryLoad& load) {
            Vec3 force = load.force;
            if (load.follower) force = exp_so3(node_rotation(q, node)) * force;
            f.segment<3>(6 * node) += force;
            f.segment<3>(6 * node + 3) += load.moment;
        };
        add(0, loads.at_start);
        add(last, loads.at_end);
        return f;
    }

    VecX f_ext(const VecX& q, const LoadCase& loads) const {
        VecX f = f_ext_boundary(q, loads);
        if (!loads.distributed_force.isZero() ||
            !loads.distributed_moment.isZero()) {
            for (int e = 0; e < mesh_.element_count(); ++e)
                scatter(e, f_ext_element(e, loads), f);
        }
        return f;
    }

    // ------------------------------------------------------- inertial ----

    /// Symmetric, constant, configuration-independent; full quadrature.
    MatX mass_matrix() const {
        const int n = dof_count();
        const int p = mesh_.order();
        MatX M = MatX::Zero(n, n);
        const Mat3 I_rho = section_.inertia.I_rho0;
        for (int e = 0; e < mesh_.element_count(); ++e) {
            const QuadratureRule& rule = rules_full_[e];
            const auto& ref = ref_full_[e];
            for (int g = 0; g < rule.size(); ++g) {
                const double wJ = rule.weights[g] * ref[g].J;
                const LagrangeBasis b = mesh_.lagrange_basis(e, rule.points[g]);
                for (int i = 0; i <= p; ++i) {
                    const int ni = mesh_.global_node(e, i);
                    for (int k = 0; k <= p; ++k) {
                        const int nk = mesh_.global_node(e, k);
                        const double nn = wJ * b.values[i] * b.values[k];
                        M.block<3, 3>(6 * ni, 6 * nk) +=
                            nn * section_.inertia.A_rho0 * Mat3::Identity();
                        M.block<3, 3>(6 * ni + 3, 6 * nk + 3) += nn * I_rho;
                    }
                }
            }
        }
        return M;
    }

    /// Gyroscopic force as it enters udot = M^-1 (f_gyr + f_int + f_ext);
    /// only rotation slots are populated. Full quadrature.
    VecX f_gyr(const VecX& u) const {
        const int p = mesh_.order();
        VecX f = VecX::Zero(dof_count());
        const Mat3 I_rho = section_.inertia.I_rho0;
        for (int e = 0; e < mesh_.element_count(); ++e) {
            const QuadratureRule& rule = rules_full_[e];
            const auto& ref = ref_full_[e];
            for (int g = 0; g < rule.size(); ++g) {
                const double wJ = rule.weights[g] * ref[g].J;
                const LagrangeBasis b = mesh_.lagrange_basis(e, rule.points[g]);
                Vec3 omega = Vec3::Zero();
                for (int i = 0; i <= p; ++i)
                    omega += b.values[i] *
                             u.segment<3>(6 * mesh_.global_node(e, i) + 3);
                const Vec3 gyr = omega.cross(I_rho * omega);
                for (int i = 0; i <= p; ++i)
                    f.segment<3>(6 * mesh_.global_node(e, i) + 3) -=
                        wJ * b.values[i] * gyr;
            }
        }
        return f;
    }

    /// Inertial-frame centerline point at xi (reference-geometry-free).
    Vec3 position(const VecX& q, double xi) const {
        return frame_at(kind_, mesh_, q, xi).translation;
    }

  private:
    std::vector<ReferencePoint> reference_points(int e,
                                                 const QuadratureRule& rule) {
        const ElementCoords c0 = element_coords(mesh_, e, q_ref_);
        std::vector<ReferencePoint> pts;
        pts.reserve(rule.size());
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = rule.points[g];
            const double J =
                centerline_derivative(kind_, mesh_, e, c0, xi).norm();
            if (!(J > 0.0))
                throw std::invalid_argument(
                    "rodmodel: degenerate reference tangent, J <= 0");
            pts.push_back({J, strain(kind_, mesh_, e, c0, xi, J)});
        }
        return pts;
    }

    void scatter(int e, const VecX& fe, VecX& f) const {
        for (int i = 0; i <= mesh_.order(); ++i)
            f.segment<6>(6 * mesh_.global_node(e, i)) += fe.segment<6>(6 * i);
    }

    Mesh mesh_;
    InterpolationKind kind_;
    SectionProperties section_;
    VecX q_ref_;
    Integration integration_;
    std::vector<QuadratureRule> rules_full_;
    std::vector<QuadratureRule> rules_red_;
    std::vector<std::vector<ReferencePoint>> ref_full_;
    std::vector<std::vector<ReferencePoint>> ref_red_;
};

} // namespace cosserat

#endif
