#include "pqspec/exterior.hpp"

#include <algorithm>
#include <cmath>

#include "pqspec/errors.hpp"

namespace pqspec {

namespace {

struct NodeIntegrand {
    // Quadrature data frozen for one exterior node: interior values and
    // combined kernel weights per (s, r) pair.
    const std::vector<double>& uvals;
    const std::vector<double>& weights;
    std::vector<std::vector<double>> kernel; // one array per pair
    std::vector<double> r_exponents;

    double value(double v) const {
        double acc = 0.0;
        for (std::size_t p = 0; p < kernel.size(); ++p) {
            const double rm2 = r_exponents[p] - 2.0;
            const auto& kk = kernel[p];
            for (std::size_t k = 0; k < uvals.size(); ++k) {
                acc += kk[k] * signed_pow(v - uvals[k], rm2);
            }
        }
        return acc;
    }
    double derivative(double v) const {
        double acc = 0.0;
        for (std::size_t p = 0; p < kernel.size(); ++p) {
            const double rm2 = r_exponents[p] - 2.0;
            const double rm1 = r_exponents[p] - 1.0;
            const auto& kk = kernel[p];
            for (std::size_t k = 0; k < uvals.size(); ++k) {
                const double d = v - uvals[k];
                acc += kk[k] * rm1 * (d == 0.0 ? 0.0 : std::pow(std::abs(d), rm2));
            }
        }
        return acc;
    }
    /// Absolute mass of the integrand; the natural residual normalization.
    double scale(double v) const {
        double acc = 0.0;
        for (std::size_t p = 0; p < kernel.size(); ++p) {
            const double rm1 = r_exponents[p] - 1.0;
            const auto& kk = kernel[p];
            for (std::size_t k = 0; k < uvals.size(); ++k) {
                acc += kk[k] * std::pow(std::abs(v - uvals[k]), rm1);
            }
        }
        return acc;
    }
};

NodeIntegrand make_integrand(double x, const std::vector<double>& uvals,
                             const std::vector<double>& weights,
                             std::span<const double> y,
                             const std::vector<KernelPair>& pairs) {
    NodeIntegrand node{uvals, weights, {}, {}};
    node.kernel.resize(pairs.size());
    node.r_exponents.resize(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        node.r_exponents[p] = pairs[p].r;
        const double expo = 1.0 + pairs[p].r * pairs[p].s;
        auto& kk = node.kernel[p];
        kk.resize(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) {
            kk[k] = weights[k] * std::pow(std::abs(x - y[k]), -expo);
        }
    }
    return node;
}

void validate_pairs(const std::vector<KernelPair>& pairs) {
    if (pairs.empty()) throw ParameterError("exterior: need at least one kernel pair");
    for (const auto& p : pairs) {
        if (!(p.s > 0.0) || !(p.s < 1.0) || !(p.r > 1.0)) {
            throw ParameterError("exterior: kernel pair out of range");
        }
    }
}

// Bracket over nodal values of the closed domain; the piecewise-linear
// extremes sit at nodes.
std::pair<double, double> interior_range(const GridFunction& u) {
    const Grid& grid = u.grid();
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (grid.region(i) == Region::Exterior) continue;
        if (first) {
            lo = hi = u[i];
            first = false;
        } else {
            lo = std::min(lo, u[i]);
            hi = std::max(hi, u[i]);
        }
    }
    return {lo, hi};
}

double solve_node(const NodeIntegrand& node, double lo, double hi) {
    if (hi <= lo) return lo;
    // The map is strictly increasing with value(lo) <= 0 <= value(hi).
    double a = lo, b = hi;
    const double width_target = 1e-14 * (hi - lo);
    while (b - a > width_target) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (node.value(mid) <= 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    double v = 0.5 * (a + b);
    for (int it = 0; it < 2; ++it) {
        const double dv = node.derivative(v);
        if (!(dv > 0.0) || !std::isfinite(dv)) break;
        const double next = v - node.value(v) / dv;
        if (!std::isfinite(next) || next < lo || next > hi) break;
        v = next;
    }
    return v;
}

} // namespace

GridFunction extend_exterior_pairs(const GridFunction& u, const std::vector<KernelPair>& pairs,
                                   const QuadratureSpec& spec) {
    validate_pairs(pairs);
    const Grid& grid = u.grid();
    InteriorRule rule(grid, spec.gauss_points);
    const std::vector<double> uvals = rule.values_at_points(u.values());
    const std::vector<double> weights(rule.weight().begin(), rule.weight().end());
    const auto [lo, hi] = interior_range(u);

    GridFunction out = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (grid.region(i) != Region::Exterior) continue;
        const NodeIntegrand node =
            make_integrand(grid.node(i), uvals, weights, rule.x(), pairs);
        out[i] = solve_node(node, lo, hi);
    }
    return out;
}

GridFunction extend_exterior(const GridFunction& u, const Params& prm,
                             const QuadratureSpec& spec) {
    return extend_exterior_pairs(u, {{prm.s1, prm.p}, {prm.s2, prm.q}}, spec);
}

GridFunction neumann_residual_pairs(const GridFunction& u, const std::vector<KernelPair>& pairs,
                                    const QuadratureSpec& spec) {
    validate_pairs(pairs);
    const Grid& grid = u.grid();
    InteriorRule rule(grid, spec.gauss_points);
    const std::vector<double> uvals = rule.values_at_points(u.values());
    const std::vector<double> weights(rule.weight().begin(), rule.weight().end());

    GridFunction out(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (grid.region(i) != Region::Exterior) continue;
        const NodeIntegrand node =
            make_integrand(grid.node(i), uvals, weights, rule.x(), pairs);
        const double raw = node.value(u[i]);
        const double scale = node.scale(u[i]);
        out[i] = raw / std::max(scale, 1e-300);
    }
    return out;
}

GridFunction neumann_residual(const GridFunction& u, const Params& prm,
                              const QuadratureSpec& spec) {
    return neumann_residual_pairs(u, {{prm.s1, prm.p}, {prm.s2, prm.q}}, spec);
}

LinfReport linf_report(const GridFunction& u) {
    LinfReport rep;
    rep.sup_interior = u.max_abs_interior();
    rep.sup_exterior = u.max_abs_exterior();
    rep.global_sup = std::max(rep.sup_interior, rep.sup_exterior);
    rep.bound_ok = rep.global_sup <= 2.0 * rep.sup_interior;
    rep.exterior_dominated = rep.sup_exterior <= rep.sup_interior;
    return rep;
}

DeGiorgiReport degiorgi_sequence(const GridFunction& u, double q, std::size_t n_max,
                                 const QuadratureSpec& spec) {
    if (n_max < 1) throw ParameterError("degiorgi_sequence: n_max must be at least 1");
    if (!(q > 1.0)) throw ParameterError("degiorgi_sequence: q must exceed 1");
    InteriorRule rule(u.grid(), spec.gauss_points);
    const std::vector<double> uvals = rule.values_at_points(u.values());

    const auto truncation_mass = [&](double level) {
        double acc = 0.0;
        for (std::size_t k = 0; k < uvals.size(); ++k) {
            const double w = uvals[k] - level;
            if (w > 0.0) acc += rule.weight()[k] * std::pow(w, q);
        }
        return acc;
    };

    DeGiorgiReport rep;
    rep.levels.reserve(n_max + 1);
    rep.masses.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double level = 1.0 - std::pow(2.0, -static_cast<double>(n));
        rep.levels.push_back(level);
        rep.masses.push_back(truncation_mass(level));
    }
    rep.limit = truncation_mass(1.0);
    rep.limit_gap = std::abs(rep.masses.back() - rep.limit);
    rep.monotone = true;
    for (std::size_t n = 0; n + 1 < rep.masses.size(); ++n) {
        if (rep.masses[n + 1] > rep.masses[n] * (1.0 + 1e-14) + 1e-300) {
            rep.monotone = false;
            break;
        }
    }
    return rep;
}

} // namespace pqspec
