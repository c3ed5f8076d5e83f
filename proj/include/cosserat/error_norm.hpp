#ifndef COSSERAT_ERROR_NORM_HPP
#define COSSERAT_ERROR_NORM_HPP

#include <cmath>
#include <functional>

#include "cosserat/interpolation.hpp"
#include "cosserat/liegroup.hpp"

namespace cosserat {

using FrameSampler = std::function<FrameTransform(double)>;

/// Root-mean-square error of relative twists between two rod fields,
/// e = (1/k) sqrt(sum_i |log_se3(H(xi_i)^-1 H*(xi_i))|^2), xi_i = i/(k-1).
/// A combined position/orientation error measure.
inline double error_twist(const FrameSampler& solution,
                          const FrameSampler& reference, int k = 100) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        const double xi = double(i) / (k - 1);
        const Twist delta =
            log_se3(inverse_transform(solution(xi)) * reference(xi));
        sum += delta.linear.squaredNorm() + delta.angular.squaredNorm();
    }
    return std::sqrt(sum) / k;
}

/// Frame sampler of a discrete rod field.
inline FrameSampler make_sampler(const Mesh& mesh, InterpolationKind kind,
                                 VecX q) {
    return [mesh, kind, q = std::move(q)](double xi) {
        return frame_at(kind, mesh, q, xi);
    };
}

} // namespace cosserat

#endif
