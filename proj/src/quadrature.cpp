#include "pqspec/quadrature.hpp"

#include <cmath>

#include "pqspec/errors.hpp"

namespace pqspec {

GaussRule gauss_legendre(std::size_t n) {
    if (n < 1 || n > 64) {
        throw ParameterError("gauss_legendre: order must be in [1, 64]");
    }
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);

    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi-style initial guess, then Newton on P_n.
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(j) + 1.0) * x * p1 -
                      static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
    return rule;
}

std::vector<std::pair<double, double>> graded_panels(double zmax, std::size_t k_panels) {
    std::vector<std::pair<double, double>> panels;
    panels.reserve(k_panels);
    double hi = zmax;
    for (std::size_t k = 0; k + 1 < k_panels; ++k) {
        const double lo = 0.5 * hi;
        panels.emplace_back(lo, hi);
        hi = lo;
    }
    panels.emplace_back(0.0, hi);
    return panels;
}

void QuadratureSpec::validate() const {
    if (panels < 1) throw ParameterError("quadrature: need at least one panel");
    if (gauss_points < 1 || gauss_points > 64) {
        throw ParameterError("quadrature: gauss points must be in [1, 64]");
    }
}

} // namespace pqspec
