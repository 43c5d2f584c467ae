#include "pqspec/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "pqspec/errors.hpp"

namespace pqspec {

std::string to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::P1: return "P1";
        case RegimeTag::P2: return "P2";
        case RegimeTag::P3: return "P3";
        case RegimeTag::P4: return "P4";
    }
    return "?";
}

std::string to_string(Branch b) {
    return b == Branch::Coercive ? "coercive" : "nehari";
}

Regime classify_regime(const Params& prm) {
    const Params e = prm.effective();
    Regime out;
    if (e.q < e.p) {
        out.branch = Branch::Coercive;
        out.tag = (e.s2 < e.s1) ? RegimeTag::P1 : RegimeTag::P3; // ties s1 == s2 -> P3
    } else {
        out.branch = Branch::Nehari;
        out.tag = (e.s1 < e.s2) ? RegimeTag::P2 : RegimeTag::P4; // ties s1 == s2 -> P4
    }
    return out;
}

namespace detail {

bool shift_values(std::span<double> u, double m, const InteriorRule& rule, double* c_out) {
    // The shift only looks at values over the closed domain [a, b]; the
    // quadrature points interpolate between those nodes, so the bracket
    // [min, max] over interior quadrature values is contained in the nodal
    // one and the map changes sign on it.
    const auto vals = rule.values_at_points(std::span<const double>(u.data(), u.size()));
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) return false;

    const double mm2 = m - 2.0;
    const auto qmean_of_shift = [&](double c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            acc += rule.weight()[k] * signed_pow(vals[k] - c, mm2);
        }
        return acc;
    };

    // Strictly decreasing in c with qmean(lo) >= 0 >= qmean(hi): bisection is
    // unconditionally safe, Newton only polishes.
    double a = lo, b = hi;
    const double target_width = 1e-14 * (hi - lo);
    while (b - a > target_width) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (qmean_of_shift(mid) >= 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    double c = 0.5 * (a + b);
    for (int it = 0; it < 2; ++it) {
        double deriv = 0.0;
        const double mm2c = m - 2.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            const double d = vals[k] - c;
            deriv -= rule.weight()[k] * (m - 1.0) *
                     (d == 0.0 ? 0.0 : std::pow(std::abs(d), mm2c));
        }
        if (!(deriv < 0.0) || !std::isfinite(deriv)) break;
        const double step = qmean_of_shift(c) / deriv;
        const double next = c - step;
        if (!std::isfinite(next) || next < lo || next > hi) break;
        c = next;
    }

    for (double& v : u) v -= c;
    if (c_out != nullptr) *c_out = c;
    return true;
}

} // namespace detail

std::pair<GridFunction, double> shift_to_zero_qmean(const GridFunction& u, double m,
                                                    const QuadratureSpec& spec) {
    InteriorRule rule(u.grid(), spec.gauss_points);
    GridFunction out = u;
    double c = 0.0;
    if (!detail::shift_values(out.values(), m, rule, &c)) {
        throw DegenerateInputError("shift_to_zero_qmean: input is constant over the domain");
    }
    return {std::move(out), c};
}

GridFunction normalize_lq(const GridFunction& u, double m, double rho,
                          const QuadratureSpec& spec) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ParameterError("normalize_lq: rho must be positive");
    }
    const double mass = mass_q(u, m, spec);
    if (!(mass > 0.0)) {
        throw DegenerateInputError("normalize_lq: zero mass");
    }
    const double factor = std::pow(rho / mass, 1.0 / m);
    GridFunction out = u;
    for (double& v : out.values()) v *= factor;
    return out;
}

double nehari_scale_from(double semi_p, double denom, double p, double q) {
    if (!(q > p)) {
        throw ParameterError("nehari scaling requires p < q");
    }
    if (!(denom > 0.0)) {
        throw InfeasibleDirectionError(
            "nehari scaling: lambda*mass - [u]^q is not positive");
    }
    if (!(semi_p > 0.0)) {
        throw DegenerateInputError("nehari scaling: [u]^p vanishes (constant direction)");
    }
    return std::pow(semi_p / denom, 1.0 / (q - p));
}

double nehari_scale(const GridFunction& u, const Params& prm, const QuadratureSpec& spec) {
    const Params e = prm.effective();
    EnergyModel model(u.grid_ptr(), e, spec);
    const double semi_p = model.semi_p_pow(u.values());
    const double semi_q = model.semi_q_pow(u.values());
    const double mass = model.mass(u.values(), e.q);
    return nehari_scale_from(semi_p, e.lambda * mass - semi_q, e.p, e.q);
}

} // namespace pqspec
