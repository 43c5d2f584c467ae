#pragma once

// Internal descent machinery shared by the eigensolver and the brute-force
// oracle. Not installed; include only from library sources.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pqspec/constraints.hpp"
#include "pqspec/eigensolver.hpp"
#include "pqspec/energy.hpp"

namespace pqspec::detail {

constexpr double kLambda1ResidualTarget = 1e-8;
constexpr double kSolveResidualTarget = 1e-7;
constexpr double kCollapseStop = 1e-7; // below the classification floor
constexpr std::size_t kPatience = 5;   // small relative changes at acceptable residual
constexpr std::size_t kMaxPatience = 500; // small relative changes, unconditional exit

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::size_t stream) {
    return std::mt19937_64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

inline std::vector<double> random_start(const Grid& grid, std::mt19937_64& rng,
                                        double amplitude) {
    std::vector<double> u(grid.node_count());
    for (double& v : u) v = uniform(rng, -amplitude, amplitude);
    return u;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Removes from g its components along one or two constraint gradients
/// (orthogonal projection onto the tangent space). Singular Gram systems
/// degrade gracefully to a single-direction projection.
inline void project_out(std::vector<double>& g, std::span<const double> c1,
                        std::span<const double> c2) {
    const double g11 = dot(c1, c1);
    const double g22 = dot(c2, c2);
    const double g12 = dot(c1, c2);
    const double det = g11 * g22 - g12 * g12;
    const double b1 = dot(c1, g);
    const double b2 = dot(c2, g);
    double a1 = 0.0, a2 = 0.0;
    if (det > 1e-14 * std::max(g11 * g22, 1e-300)) {
        a1 = (g22 * b1 - g12 * b2) / det;
        a2 = (g11 * b2 - g12 * b1) / det;
    } else if (g11 > 0.0 || g22 > 0.0) {
        if (g11 >= g22) {
            a1 = b1 / g11;
        } else {
            a2 = b2 / g22;
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= a1 * c1[i] + a2 * c2[i];
}

struct DescentOutcome {
    double f = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool feasible = false;  // the start could be restored
    bool collapsed = false; // stopped at the degeneracy floor
};

/// Deterministic rank for multistart results: objective first with a
/// round-off tie window, then stationarity residual, then start order.
inline bool outcome_improves(const DescentOutcome& cand, const DescentOutcome& best) {
    const double scale = std::max({std::abs(cand.f), std::abs(best.f), 1e-300});
    const double tie = 1e-11 * scale;
    if (cand.f < best.f - tie) return true;
    if (cand.f > best.f + tie) return false;
    return cand.residual < best.residual;
}

// Projected gradient descent with Armijo backtracking; sufficient decrease
// is measured against the realized displacement, restoration included.
// Stops on a small stationarity residual, on kPatience consecutive relative
// changes below opts.tol, at the collapse floor, or at max_iter.
template <typename Problem>
DescentOutcome descend(Problem& pb, std::vector<double>& u, const SolverOptions& opts,
                       double residual_target) {
    DescentOutcome out;
    if (!pb.restore(u)) return out;
    double f = pb.value(u);
    if (!std::isfinite(f)) return out;
    out.feasible = true;

    const std::size_t n = u.size();
    std::vector<double> g(n), d(n), cand(n), u_prev, d_prev;
    double alpha = opts.step0;
    std::size_t small_changes = 0;
    bool have_prev = false;

    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        out.iterations = iter;
        pb.gradient(u, g);
        out.residual = pb.residual_norm(u, g);
        out.f = f;
        if (out.residual <= residual_target) break;
        // The objective stalls quadratically early near eigenpairs while the
        // residual still improves linearly, so a stagnant objective only
        // stops the iteration once the residual is comfortably acceptable
        // (or after a long plateau). All exits use the fresh residual above.
        if (small_changes >= kPatience && out.residual <= 0.5 * kResidualTol) break;
        if (small_changes >= kMaxPatience) break;
        if (pb.collapsed()) {
            out.collapsed = true;
            break;
        }
        // Step along the tangent-projected direction; the restoration then
        // only has to absorb second-order constraint violations.
        d = g;
        pb.project(u, d);

        // Barzilai-Borwein trial step, safeguarded by the backtracking below.
        double try_alpha;
        if (have_prev) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = u[i] - u_prev[i];
                const double y = d[i] - d_prev[i];
                ss += s * s;
                sy += s * y;
            }
            try_alpha = (sy > 0.0) ? std::clamp(ss / sy, 1e-10, 1e6 * opts.step0)
                                   : std::min(opts.step0, 2.0 * alpha);
        } else {
            try_alpha = std::min(opts.step0, 2.0 * alpha);
        }
        u_prev = u;
        d_prev = d;
        have_prev = true;

        bool moved = false;
        double fc = f;
        for (int bt = 0; bt < 80; ++bt) {
            for (std::size_t i = 0; i < n; ++i) cand[i] = u[i] - try_alpha * d[i];
            if (!pb.restore(cand)) {
                try_alpha *= opts.armijo_factor;
                continue;
            }
            fc = pb.value(cand);
            if (!std::isfinite(fc)) {
                try_alpha *= opts.armijo_factor;
                continue;
            }
            double disp2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dd = cand[i] - u[i];
                disp2 += dd * dd;
            }
            if (fc <= f - (opts.armijo_c / try_alpha) * disp2) {
                moved = true;
                break;
            }
            try_alpha *= opts.armijo_factor;
        }
        if (!moved) break;

        const double rel = (f - fc) / std::max(std::abs(fc), 1e-300);
        u.swap(cand);
        f = fc;
        out.f = f;
        alpha = try_alpha;
        if (rel <= opts.tol) {
            ++small_changes;
        } else {
            small_changes = 0;
        }
    }
    return out;
}

// Minimization of [u]^q over the unit-mass slice of the zero-q-mean cone.
struct RayleighQProblem {
    RayleighQProblem(const NonlocalOperator& op_, const InteriorRule& rule_, double q_)
        : op(op_), rule(rule_), q(q_) {}

    const NonlocalOperator& op;
    const InteriorRule& rule;
    double q;
    mutable double last_f = 0.0;
    std::vector<double> mass_basis;
    std::vector<double> cone_basis;

    bool restore(std::vector<double>& u) const {
        if (!shift_values(u, q, rule, nullptr)) return false;
        const double mass = rule.integral_abs_pow(u, q);
        if (!(mass > 0.0) || !std::isfinite(mass)) return false;
        const double factor = std::pow(1.0 / mass, 1.0 / q);
        if (!std::isfinite(factor)) return false;
        for (double& v : u) v *= factor;
        return true;
    }
    double value(std::span<const double> u) const {
        last_f = op.seminorm_pow(u);
        return last_f;
    }
    void gradient(std::span<const double> u, std::vector<double>& g) const {
        std::fill(g.begin(), g.end(), 0.0);
        op.add_basis_action(u, q, g); // derivative of [u]^q
    }
    double residual_norm(std::span<const double> u, std::span<const double> g) {
        // Eigen-residual E(u, phi_i) - lambda_hat * int |u|^{q-2}u phi_i with
        // lambda_hat = [u]^q at unit mass; normalized by [u]^q + lambda*mass.
        mass_basis.assign(u.size(), 0.0);
        rule.add_signed_pow_basis(u, q, 1.0, mass_basis);
        double rmax = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            rmax = std::max(rmax, std::abs(g[i] / q - last_f * mass_basis[i]));
        }
        return rmax / std::max(2.0 * last_f, 1e-300);
    }
    void project(std::span<const double> u, std::vector<double>& g) {
        // Tangent space of {q_mean = 0, mass = 1}: orthogonal to the cone
        // gradient int |u|^{q-2} phi_i and the mass gradient
        // int |u|^{q-2} u phi_i. mass_basis is fresh from residual_norm.
        cone_basis.assign(u.size(), 0.0);
        rule.add_abs_pow_basis(u, q, 1.0, cone_basis);
        project_out(g, cone_basis, mass_basis);
    }
    bool collapsed() const { return false; } // unit mass is restored every step
};

// Minimization of F_lambda over the cone (coercive restoration) or over the
// Nehari manifold (shift then rescale). Expects effective parameters, i.e.
// the rhs exponent in the q slot.
struct FunctionalProblem {
    FunctionalProblem(const EnergyModel& model_, bool nehari_)
        : model(model_), nehari(nehari_) {}

    const EnergyModel& model;
    bool nehari;
    mutable EnergyBreakdown bd{};
    std::vector<double> action_p, action_q, mass_basis, cone_basis, nehari_basis;

    double lambda() const { return model.params().lambda; }
    double m() const { return model.params().q; }

    bool restore(std::vector<double>& u) const {
        if (!shift_values(u, m(), model.interior_rule(), nullptr)) return false;
        if (!nehari) return true;
        const double semi_p = model.semi_p_pow(u);
        const double semi_q = model.semi_q_pow(u);
        const double mass = model.mass(u, m());
        const double denom = lambda() * mass - semi_q;
        if (!(denom > 0.0) || !(semi_p > 0.0)) return false;
        const double t =
            std::pow(semi_p / denom, 1.0 / (model.params().q - model.params().p));
        if (!std::isfinite(t) || !(t > 1e-8) || !(t < 1e8)) return false;
        for (double& v : u) v *= t;
        return true;
    }
    double value(std::span<const double> u) const {
        bd = model.breakdown(u);
        return bd.f_lambda;
    }
    void gradient(std::span<const double> u, std::vector<double>& g) {
        // Assemble from pieces so project() can reuse them for the Nehari
        // constraint gradient.
        action_p.assign(u.size(), 0.0);
        action_q.assign(u.size(), 0.0);
        mass_basis.assign(u.size(), 0.0);
        model.add_basis_action_p(u, 1.0, action_p);
        model.add_basis_action_q(u, 1.0, action_q);
        model.add_mass_basis(u, m(), 1.0, mass_basis);
        for (std::size_t i = 0; i < u.size(); ++i) {
            g[i] = action_p[i] + action_q[i] - lambda() * mass_basis[i];
        }
    }
    double residual_norm(std::span<const double>, std::span<const double> g) const {
        double rmax = 0.0;
        for (double v : g) rmax = std::max(rmax, std::abs(v));
        return rmax / std::max(bd.scale(lambda()), 1e-300);
    }
    void project(std::span<const double> u, std::vector<double>& g) {
        // The shift retraction is first-order compatible on the cone since
        // <g, 1> = -lambda * q_mean(u) = 0 there; only the Nehari rescaling
        // needs a tangent projection.
        if (!nehari) return;
        const double p = model.params().p;
        const double q = model.params().q;
        cone_basis.assign(u.size(), 0.0);
        model.interior_rule().add_abs_pow_basis(u, m(), 1.0, cone_basis);
        nehari_basis.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            nehari_basis[i] =
                p * action_p[i] + q * action_q[i] - lambda() * q * mass_basis[i];
        }
        project_out(g, cone_basis, nehari_basis);
    }
    bool collapsed() const {
        if (nehari) return false;
        return std::pow(bd.mass_q, 1.0 / m()) < kCollapseStop;
    }
};

/// Classification and reporting shared by the production solver and the
/// brute-force oracle. `original` carries the caller's parameter roles.
SolveResult assemble_solve_result(const EnergyModel& model, GridPtr grid,
                                  const Params& original, std::vector<double> u,
                                  const DescentOutcome& outcome, bool nehari,
                                  bool any_feasible, std::size_t total_iterations);

} // namespace pqspec::detail
