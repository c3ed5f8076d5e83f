#ifndef COSSERAT_TYPES_HPP
#define COSSERAT_TYPES_HPP

#include <Eigen/Dense>

namespace cosserat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Orthogonal with det +1; invariants are checked in tests, not per call.
using RotationMatrix = Mat3;

/// Euclidean transformation, the 3x3 + 3 blocks of the 4x4 homogeneous
/// matrix with bottom row (0,0,0,1).
struct FrameTransform {
    RotationMatrix rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    FrameTransform operator*(const FrameTransform& other) const {
        return {rotation * other.rotation,
                rotation * other.translation + translation};
    }

    /// Maps K-frame point coordinates to I-frame coordinates.
    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

/// se(3) generator ordered (linear, angular) = (d, psi).
struct Twist {
    Vec3 linear = Vec3::Zero();
    Vec3 angular = Vec3::Zero();
};

/// Body-frame strain pair: gamma = dilatation/shear, kappa = torsion/bending.
struct StrainState {
    Vec3 gamma = Vec3::Zero();
    Vec3 kappa = Vec3::Zero();
};

} // namespace cosserat

#endif
