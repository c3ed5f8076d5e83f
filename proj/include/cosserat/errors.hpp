#ifndef COSSERAT_ERRORS_HPP
#define COSSERAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cosserat {

/// SO(3) logarithm evaluated at (or numerically too close to) a half turn.
struct AngleAtPi : std::domain_error {
    explicit AngleAtPi(double angle)
        : std::domain_error("SO(3) logarithm singular: rotation angle " +
                            std::to_string(angle) + " is at pi"),
          angle(angle) {}
    double angle;
};

/// Inverse tangent map evaluated at a 2*pi*k singularity (k >= 1).
struct TangentSingular : std::domain_error {
    explicit TangentSingular(double angle)
        : std::domain_error("inverse SO(3) tangent map singular at angle " +
                            std::to_string(angle)),
          angle(angle) {}
    double angle;
};

struct NonSkewInput : std::invalid_argument {
    explicit NonSkewInput(double defect)
        : std::invalid_argument("vee: input matrix not skew-symmetric, defect " +
                                std::to_string(defect)),
          defect(defect) {}
    double defect;
};

struct NoConvergence : std::runtime_error {
    NoConvergence(int load_step, int iterations, double residual_norm)
        : std::runtime_error("Newton did not converge at load step " +
                             std::to_string(load_step) + " after " +
                             std::to_string(iterations) +
                             " iterations, |residual|_inf = " +
                             std::to_string(residual_norm)),
          load_step(load_step), iterations(iterations),
          residual_norm(residual_norm) {}
    int load_step;
    int iterations;
    double residual_norm;
};

struct StepSizeUnderflow : std::runtime_error {
    StepSizeUnderflow(double t, double dt)
        : std::runtime_error("integrator step size underflow at t = " +
                             std::to_string(t) + ", dt = " +
                             std::to_string(dt)),
          t(t), dt(dt) {}
    double t;
    double dt;
};

/// Configuration file violates the schema; `path` names the offending key.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error("config error at '" + path + "': " + what),
          path(path) {}
    std::string path;
};

} // namespace cosserat

#endif
