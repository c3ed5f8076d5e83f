#ifndef COSSERAT_SECTION_HPP
#define COSSERAT_SECTION_HPP

#include <stdexcept>

#include "cosserat/types.hpp"

namespace cosserat {

/// Inertia densities per unit reference arc length.
struct CrossSectionInertia {
    double A_rho0 = 0.0;          // mass per unit length
    Mat3 I_rho0 = Mat3::Zero();   // body-frame rotary inertia density
};

/// Diagonal quadratic constitutive law. Reference strains live in the
/// model's precomputed reference geometry, not here.
struct ElasticLaw {
    Vec3 C_gamma = Vec3::Zero(); // (k_e, k_s, k_s)
    Vec3 C_kappa = Vec3::Zero(); // (k_t, k_by, k_bz)
};

struct SectionProperties {
    CrossSectionInertia inertia;
    ElasticLaw law;
};

/// Circular section of radius r: A = pi r^2, I = pi r^4 / 4, polar term 2I
/// on the axis slot; k_e = EA, k_s = GA, k_b = EI, k_t = 2GI.
inline SectionProperties section_circular(double radius, double rho0, double E,
                                          double G) {
    if (radius <= 0.0 || rho0 <= 0.0 || E <= 0.0 || G <= 0.0)
        throw std::invalid_argument("section_circular: inputs must be positive");
    const double A = M_PI * radius * radius;
    const double I = M_PI * std::pow(radius, 4) / 4.0;
    SectionProperties s;
    s.inertia.A_rho0 = rho0 * A;
    s.inertia.I_rho0 = rho0 * Vec3(2.0 * I, I, I).asDiagonal();
    s.law.C_gamma = Vec3(E * A, G * A, G * A);
    s.law.C_kappa = Vec3(2.0 * G * I, E * I, E * I);
    return s;
}

/// Rectangular section width w (y) by height h (z); the square case gives
/// A = w^2 and I = w^4 / 12. Torsion uses the polar moment I_y + I_z.
inline SectionProperties section_rectangular(double width, double height,
                                             double rho0, double E, double G) {
    if (width <= 0.0 || height <= 0.0 || rho0 <= 0.0 || E <= 0.0 || G <= 0.0)
        throw std::invalid_argument(
            "section_rectangular: inputs must be positive");
    const double A = width * height;
    const double I_y = width * std::pow(height, 3) / 12.0; // bending about y
    const double I_z = height * std::pow(width, 3) / 12.0; // bending about z
    SectionProperties s;
    s.inertia.A_rho0 = rho0 * A;
    s.inertia.I_rho0 = rho0 * Vec3(I_y + I_z, I_y, I_z).asDiagonal();
    s.law.C_gamma = Vec3(E * A, G * A, G * A);
    s.law.C_kappa = Vec3(G * (I_y + I_z), E * I_y, E * I_z);
    return s;
}

} // namespace cosserat

#endif
