#include "test_support.hpp"

#include "pqspec/quadrature.hpp"

namespace pqtest {

namespace {

struct SubCell {
    double lo;
    double hi;
    bool interior;
};

} // namespace

double dense_seminorm_oracle(const pqspec::GridFunction& u, double s, double r,
                             std::size_t subdiv, std::size_t panels, std::size_t gauss) {
    using namespace pqspec;
    const Grid& grid = u.grid();
    std::vector<double> vals(u.values().begin(), u.values().end());

    std::vector<SubCell> cells;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        const double lo = grid.cell_left(c), hi = grid.cell_right(c);
        for (std::size_t k = 0; k < subdiv; ++k) {
            SubCell sc;
            sc.lo = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(subdiv);
            sc.hi = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(subdiv);
            sc.interior = grid.cell_is_interior(c);
            cells.push_back(sc);
        }
    }

    const GaussRule gr = gauss_legendre(gauss);
    const double expo = 1.0 + r * s;
    double total = 0.0;

    const auto integrand = [&](double x, double y) {
        const double d = eval_plin(grid, vals, x) - eval_plin(grid, vals, y);
        return std::pow(std::abs(d), r) * std::pow(y - x, -expo);
    };

    // Difference coordinates z = y - x over [zmin, zmax] for the pair (A, B)
    // with A left of or equal to B; panels graded toward z = zmin.
    const auto integrate_pair = [&](const SubCell& a, const SubCell& b, double factor) {
        const double zmin = std::max(0.0, b.lo - a.hi);
        const double zmax = b.hi - a.lo;
        std::vector<std::pair<double, double>> zpanels;
        if (zmin == 0.0) {
            zpanels = graded_panels(zmax, panels);
        } else {
            // No singularity: geometric panels from zmin to zmax.
            const double ratio = std::pow(zmax / zmin, 1.0 / static_cast<double>(panels));
            double lo = zmin;
            for (std::size_t k = 0; k < panels; ++k) {
                const double hi = (k + 1 == panels) ? zmax : lo * ratio;
                zpanels.emplace_back(lo, hi);
                lo = hi;
            }
        }
        double acc = 0.0;
        for (const auto& [zlo, zhi] : zpanels) {
            const double jz = jacobian(zlo, zhi);
            for (std::size_t i = 0; i < gr.size(); ++i) {
                const double z = map_to(gr.points[i], zlo, zhi);
                const double xlo = std::max(a.lo, b.lo - z);
                const double xhi = std::min(a.hi, b.hi - z);
                if (!(xhi > xlo)) continue;
                const double jx = jacobian(xlo, xhi);
                double inner = 0.0;
                for (std::size_t k = 0; k < gr.size(); ++k) {
                    const double x = map_to(gr.points[k], xlo, xhi);
                    inner += gr.weights[k] * jx * integrand(x, x + z);
                }
                acc += gr.weights[i] * jz * inner;
            }
        }
        total += factor * acc;
    };

    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i; j < cells.size(); ++j) {
            if (!cells[i].interior && !cells[j].interior) continue;
            integrate_pair(cells[i], cells[j], 2.0);
        }
    }
    return total;
}

} // namespace pqtest
