#pragma once

#include <cstddef>
#include <vector>

namespace pqspec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// Nodes and weights for an n-point Gauss-Legendre rule, computed by Newton
/// iteration on the Legendre recurrence. Deterministic, accurate to ~1e-15.
GaussRule gauss_legendre(std::size_t n);

/// Affine image of a [-1,1] rule point on [lo, hi].
inline double map_to(double t, double lo, double hi) {
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
}
inline double jacobian(double lo, double hi) { return 0.5 * (hi - lo); }

/// Panel boundaries geometrically graded toward zero: K panels covering
/// (0, zmax], each half the previous ([zmax/2, zmax], [zmax/4, zmax/2], ...,
/// [0, zmax/2^(K-1)]). Returned as K (lo, hi) pairs, outermost first.
std::vector<std::pair<double, double>> graded_panels(double zmax, std::size_t k_panels);

/// Quadrature resolution knobs shared by all assembled integrals.
struct QuadratureSpec {
    std::size_t panels = 12;    // graded panels per singular pair
    std::size_t gauss_points = 5;

    void validate() const;
};

} // namespace pqspec
