#ifndef COSSERAT_QUADRATURE_HPP
#define COSSERAT_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cosserat {

/// Gauss-Legendre rule mapped to an element interval; weights sum to the
/// interval length and the rule is exact for polynomials of degree 2m-1.
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
    int size() const { return static_cast<int>(points.size()); }
};

/// Nodes and weights on [-1,1] by Newton iteration on the Legendre
/// polynomial; supports any m, no table lookup.
inline QuadratureRule gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("quadrature: m must be >= 1");
    QuadratureRule rule;
    rule.points.resize(m);
    rule.weights.resize(m);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess for the i-th positive root
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_m(x) and P'_m(x)
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= m; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.points[i] = -x;
        rule.points[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gauss_legendre(int m, double a, double b) {
    QuadratureRule rule = gauss_legendre(m);
    const double mid = 0.5 * (a + b);
    const double scale = 0.5 * (b - a);
    for (int g = 0; g < m; ++g) {
        rule.points[g] = mid + scale * rule.points[g];
        rule.weights[g] *= scale;
    }
    return rule;
}

/// Quadrature point counts (m_full, m_red) for a p-th order element.
inline std::pair<int, int> quadrature_counts(int p) {
    if (p != 1 && p != 2)
        throw std::invalid_argument("quadrature_counts: order p must be 1 or 2");
    const int m_full = ((p + 1) * (p + 1) + 1) / 2; // ceil((p+1)^2 / 2)
    return {m_full, p};
}

} // namespace cosserat

#endif
