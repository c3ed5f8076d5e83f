#ifndef COSSERAT_LIEGROUP_HPP
#define COSSERAT_LIEGROUP_HPP

#include <algorithm>
#include <cmath>

#include "cosserat/errors.hpp"
#include "cosserat/types.hpp"

// Closed-form SO(3)/SE(3) kernels. All functions are pure and thread-safe.

namespace cosserat {

/// Threshold below which first-order small-angle branches are used.
inline constexpr double kSmallAngle = 1e-6;
/// Guard distance from the angle-pi (and 2*pi*k) singularities.
inline constexpr double kPiTol = 1e-9;

inline Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

inline Vec3 vee(const Mat3& b) {
    const double defect = (b + b.transpose()).cwiseAbs().maxCoeff();
    if (defect > 1e-8) throw NonSkewInput(defect);
    return {b(2, 1), b(0, 2), b(1, 0)};
}

/// Skew-symmetric part (A - A^T)/2.
inline Mat3 skw(const Mat3& a) { return 0.5 * (a - a.transpose()); }

/// Rodrigues' formula. First-order branch I + hat(psi) below the
/// small-angle threshold, used as-is without re-orthonormalization.
inline RotationMatrix exp_so3(const Vec3& psi) {
    const double theta = psi.norm();
    const Mat3 ps = hat(psi);
    if (theta < kSmallAngle) return Mat3::Identity() + ps;
    return Mat3::Identity() + (std::sin(theta) / theta) * ps +
           ((1.0 - std::cos(theta)) / (theta * theta)) * ps * ps;
}

/// Rotation angle of A, arccos argument clamped to [-1, 1].
inline double rotation_angle(const RotationMatrix& a) {
    const double c = std::clamp(0.5 * (a.trace() - 1.0), -1.0, 1.0);
    return std::acos(c);
}

inline Vec3 log_so3(const RotationMatrix& a) {
    const double omega = rotation_angle(a);
    if (omega >= M_PI - kPiTol) throw AngleAtPi(omega);
    const Vec3 axis(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
    if (omega < kSmallAngle) return 0.5 * axis; // vee(skw(A))
    return (omega / (2.0 * std::sin(omega))) * axis;
}

/// SO(3) tangent map, convention omega_K = T(psi) * psi_dot.
inline Mat3 tangent_so3(const Vec3& psi) {
    const double theta = psi.norm();
    const Mat3 ps = hat(psi);
    if (theta < kSmallAngle) return Mat3::Identity() - 0.5 * ps;
    const double t2 = theta * theta;
    return Mat3::Identity() - ((1.0 - std::cos(theta)) / t2) * ps +
           ((theta - std::sin(theta)) / (t2 * theta)) * ps * ps;
}

inline Mat3 tangent_so3_inv(const Vec3& psi) {
    const double theta = psi.norm();
    const Mat3 ps = hat(psi);
    if (theta < kSmallAngle) return Mat3::Identity() + 0.5 * ps;
    const double k = std::round(theta / (2.0 * M_PI));
    if (k >= 1.0 && std::abs(theta - 2.0 * M_PI * k) < kPiTol)
        throw TangentSingular(theta);
    const double half = 0.5 * theta;
    const double cot_half = std::cos(half) / std::sin(half);
    return Mat3::Identity() + 0.5 * ps +
           ((1.0 - half * cot_half) / (theta * theta)) * ps * ps;
}

inline FrameTransform exp_se3(const Twist& theta) {
    return {exp_so3(theta.angular),
            tangent_so3(theta.angular).transpose() * theta.linear};
}

inline Twist log_se3(const FrameTransform& h) {
    const Vec3 psi = log_so3(h.rotation);
    return {tangent_so3_inv(psi).transpose() * h.translation, psi};
}

inline FrameTransform inverse_transform(const FrameTransform& h) {
    return {h.rotation.transpose(), -(h.rotation.transpose() * h.translation)};
}

/// Change of coordinates keeping the rotation-vector norm at or below pi
/// (one winding removed); the represented rotation is unchanged.
inline Vec3 complement_rotation(const Vec3& psi) {
    const double theta = psi.norm();
    if (theta <= M_PI) return psi;
    return (1.0 - 2.0 * M_PI / theta) * psi;
}

} // namespace cosserat

#endif
