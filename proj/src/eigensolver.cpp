#include "pqspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "descent_detail.hpp"
#include "pqspec/errors.hpp"

namespace pqspec {

using detail::descend;
using detail::DescentOutcome;
using detail::FunctionalProblem;
using detail::random_start;
using detail::RayleighQProblem;
using detail::seeded_rng;

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw ParameterError("solver: tol must be positive");
    if (max_iter < 1) throw ParameterError("solver: max_iter must be at least 1");
    if (restarts < 1) throw ParameterError("solver: restarts must be at least 1");
    if (!(step0 > 0.0)) throw ParameterError("solver: step0 must be positive");
    if (!(armijo_factor > 0.0) || !(armijo_factor < 1.0)) {
        throw ParameterError("solver: backtracking factor must lie in (0, 1)");
    }
    if (!(armijo_c > 0.0) || !(armijo_c < 1.0)) {
        throw ParameterError("solver: sufficient-decrease constant must lie in (0, 1)");
    }
    quadrature.validate();
}

std::string to_string(Classification c) {
    return c == Classification::Eigenpair ? "eigenpair" : "no-nontrivial-solution";
}

namespace {

SolveResult lambda1_result(const NonlocalOperator& op, const InteriorRule& rule, double q,
                           std::vector<double> u, const DescentOutcome& outcome,
                           GridPtr grid) {
    SolveResult res(grid);
    std::copy(u.begin(), u.end(), res.u.values().begin());
    const double j = op.seminorm_pow(u);
    const double mass = rule.integral_abs_pow(u, q);
    res.lambda = j;
    res.energies.semi_p = 0.0;
    res.energies.semi_q = j;
    res.energies.mass_q = mass;
    res.energies.f_lambda = j / q - (j / q) * mass;
    res.residual_inf = outcome.residual;
    res.iterations = outcome.iterations;
    res.converged = outcome.feasible && outcome.residual <= kResidualTol;
    res.classification = (res.converged && mass > 0.0) ? Classification::Eigenpair
                                                       : Classification::NoNontrivialSolution;
    return res;
}

} // namespace

SolveResult compute_lambda1(double s2, double q, GridPtr grid, const SolverOptions& opts) {
    opts.validate();
    if (grid->interior_cell_count() < 4) {
        throw ParameterError("compute_lambda1: need at least 4 interior cells");
    }
    NonlocalOperator op(grid, s2, q, opts.quadrature);
    InteriorRule rule(*grid, opts.quadrature.gauss_points);
    RayleighQProblem problem{op, rule, q};

    bool have_best = false;
    std::vector<double> best_u;
    DescentOutcome best{};
    std::size_t total_iterations = 0;
    for (std::size_t k = 0; k < opts.restarts; ++k) {
        auto rng = seeded_rng(opts.rng_seed, k);
        std::vector<double> u = random_start(*grid, rng, 1.0);
        DescentOutcome outcome = descend(problem, u, opts, detail::kLambda1ResidualTarget);
        total_iterations += outcome.iterations;
        if (!outcome.feasible) continue;
        if (!have_best || detail::outcome_improves(outcome, best)) {
            have_best = true;
            best = outcome;
            best_u = std::move(u);
        }
    }
    if (!have_best) {
        throw DegenerateInputError("compute_lambda1: no feasible start");
    }
    SolveResult res = lambda1_result(op, rule, q, std::move(best_u), best, grid);
    res.iterations = total_iterations;
    return res;
}

SolveResult compute_lambda1_from(GridFunction start, double s2, double q,
                                 const SolverOptions& opts) {
    opts.validate();
    GridPtr grid = start.grid_ptr();
    NonlocalOperator op(grid, s2, q, opts.quadrature);
    InteriorRule rule(*grid, opts.quadrature.gauss_points);
    RayleighQProblem problem{op, rule, q};
    std::vector<double> u(start.values().begin(), start.values().end());
    DescentOutcome outcome = descend(problem, u, opts, detail::kLambda1ResidualTarget);
    if (!outcome.feasible) {
        throw DegenerateInputError("compute_lambda1: start cannot be projected to the cone");
    }
    return lambda1_result(op, rule, q, std::move(u), outcome, grid);
}

namespace detail {

SolveResult assemble_solve_result(const EnergyModel& model, GridPtr grid,
                                  const Params& original, std::vector<double> u,
                                  const DescentOutcome& outcome, bool nehari,
                                  bool any_feasible, std::size_t total_iterations) {
    const Params& e = model.params();
    SolveResult res(grid);
    res.lambda = e.lambda;
    res.regime = classify_regime(original);
    res.iterations = total_iterations;

    if (!any_feasible) {
        // Nehari branch with no admissible direction: the discrete
        // Poincare-Wirtinger inequality leaves the manifold empty, which is
        // the no-solution signal.
        res.converged = true;
        res.classification = Classification::NoNontrivialSolution;
        return res;
    }

    EnergyBreakdown bd = model.breakdown(u);
    const double lq_norm = std::pow(bd.mass_q, 1.0 / e.q);
    if (lq_norm < kDegeneracyFloor) {
        std::copy(u.begin(), u.end(), res.u.values().begin());
        if (original.rhs_exp == RhsExponent::P) std::swap(bd.semi_p, bd.semi_q);
        res.energies = bd;
        res.residual_inf = outcome.residual;
        res.converged = true;
        res.classification = Classification::NoNontrivialSolution;
        return res;
    }

    if (!nehari) {
        // Radial polish: rescale so that testing the weak form with v = u
        // holds exactly, t^p semi_p + t^q semi_q = lambda t^q mass. The
        // scaling is the exact stationarity correction in the u-direction
        // by homogeneity of each term.
        const double denom = e.lambda * bd.mass_q - bd.semi_q;
        if (denom > 0.0 && bd.semi_p > 0.0) {
            const double t = std::pow(denom / bd.semi_p, 1.0 / (e.p - e.q));
            if (std::isfinite(t) && t > 0.5 && t < 2.0) {
                for (double& v : u) v *= t;
                bd = model.breakdown(u);
            }
        }
    }

    std::copy(u.begin(), u.end(), res.u.values().begin());
    // Recompute the stationarity residual at the reported iterate.
    std::vector<double> g(u.size(), 0.0);
    model.gradient(u, g);
    double rmax = 0.0;
    for (double v : g) rmax = std::max(rmax, std::abs(v));
    res.residual_inf = rmax / std::max(bd.scale(e.lambda), 1e-300);

    if (original.rhs_exp == RhsExponent::P) {
        EnergyBreakdown swapped = bd;
        std::swap(swapped.semi_p, swapped.semi_q);
        res.energies = swapped;
    } else {
        res.energies = bd;
    }

    if (res.residual_inf <= kResidualTol) {
        res.converged = true;
        res.classification = Classification::Eigenpair;
        if (nehari) {
            res.nehari_min = (1.0 / e.p - 1.0 / e.q) * bd.semi_p;
        }
        return res;
    }
    res.converged = false;
    res.classification = Classification::NoNontrivialSolution;
    return res;
}

} // namespace detail

SolveResult solve_at_lambda(const Params& prm, GridPtr grid, const SolverOptions& opts,
                            const SolveResult& lambda1) {
    opts.validate();
    const Params e = prm.effective();
    if (!(e.lambda > 0.0)) {
        throw ParameterError("solve_at_lambda requires lambda > 0");
    }
    if (!lambda1.u.grid().same_mesh(*grid)) {
        throw ParameterError("solve_at_lambda: precomputed lambda1 lives on another grid");
    }
    const bool nehari = e.p < e.q;
    EnergyModel model(grid, e, opts.quadrature);
    FunctionalProblem problem{model, nehari};

    const double lam1 = lambda1.lambda;
    std::span<const double> u1 = lambda1.u.values();

    std::vector<std::vector<double>> starts;
    starts.reserve(opts.restarts + 3);
    if (!nehari) {
        if (e.lambda > lam1) {
            // F(t u1) = t^p semi_p/p + (t^q/q)(lam1 - lambda) is negative at
            // the scale below, which lands the descent in the nontrivial
            // basin.
            const double semi_p1 = model.semi_p_pow(u1);
            if (semi_p1 > 0.0) {
                const double t_star =
                    std::pow((e.lambda - lam1) / semi_p1, 1.0 / (e.p - e.q));
                if (std::isfinite(t_star) && t_star > 0.0) {
                    for (double factor : {1.0, 0.5, 2.0}) {
                        std::vector<double> s(u1.begin(), u1.end());
                        for (double& v : s) v *= factor * t_star;
                        starts.push_back(std::move(s));
                    }
                }
            }
        }
    } else {
        starts.emplace_back(u1.begin(), u1.end());
    }
    for (std::size_t k = 0; starts.size() < opts.restarts + (nehari ? 1u : 0u); ++k) {
        auto rng = seeded_rng(opts.rng_seed, 101 + k);
        if (nehari) {
            // Perturbations of the first eigenfunction stay feasible for
            // small amplitudes.
            const double eps = 0.3 / static_cast<double>(1ull << std::min<std::size_t>(k, 30));
            std::vector<double> s(u1.begin(), u1.end());
            const auto noise = random_start(*grid, rng, eps);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] += noise[i];
            starts.push_back(std::move(s));
        } else {
            starts.push_back(random_start(*grid, rng, 1.0));
        }
    }

    bool any_feasible = false;
    bool have_best = false;
    std::vector<double> best_u;
    DescentOutcome best{};
    std::size_t total_iterations = 0;
    for (auto& start : starts) {
        DescentOutcome outcome = descend(problem, start, opts, detail::kSolveResidualTarget);
        total_iterations += outcome.iterations;
        if (!outcome.feasible) continue;
        any_feasible = true;
        if (!have_best || detail::outcome_improves(outcome, best)) {
            have_best = true;
            best = outcome;
            best_u = std::move(start);
        }
    }
    return detail::assemble_solve_result(model, grid, prm, std::move(best_u), best, nehari,
                                         any_feasible, total_iterations);
}

SolveResult solve_at_lambda(const Params& prm, GridPtr grid, const SolverOptions& opts) {
    const Params e = prm.effective();
    if (!(e.lambda > 0.0)) {
        throw ParameterError("solve_at_lambda requires lambda > 0");
    }
    SolveResult lam1 = compute_lambda1(e.s2, e.q, grid, opts);
    return solve_at_lambda(prm, grid, opts, lam1);
}

std::pair<double, GridFunction> residual(const GridFunction& u, const Params& prm,
                                         const QuadratureSpec& spec) {
    EnergyModel model(u.grid_ptr(), prm.effective(), spec);
    GridFunction g(u.grid_ptr());
    std::vector<double> gv(u.size(), 0.0);
    model.gradient(u.values(), gv);
    const EnergyBreakdown bd = model.breakdown(u.values());
    const double scale = bd.scale(prm.lambda);
    const double denom = scale > 0.0 ? scale : 1.0;
    double rmax = 0.0;
    for (std::size_t i = 0; i < gv.size(); ++i) {
        g[i] = gv[i] / denom;
        rmax = std::max(rmax, std::abs(g[i]));
    }
    return {rmax, std::move(g)};
}

std::pair<double, GridFunction> residual_q(const GridFunction& u, double s2, double q,
                                           double lambda, const QuadratureSpec& spec) {
    NonlocalOperator op(u.grid_ptr(), s2, q, spec);
    InteriorRule rule(u.grid(), spec.gauss_points);
    std::vector<double> g(u.size(), 0.0);
    op.add_basis_action(u.values(), 1.0, g);
    rule.add_signed_pow_basis(u.values(), q, -lambda, g);
    const double scale =
        op.seminorm_pow(u.values()) + lambda * rule.integral_abs_pow(u.values(), q);
    const double denom = scale > 0.0 ? scale : 1.0;
    GridFunction gv(u.grid_ptr());
    double rmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        gv[i] = g[i] / denom;
        rmax = std::max(rmax, std::abs(gv[i]));
    }
    return {rmax, std::move(gv)};
}

double rayleigh_pq(const GridFunction& u, const Params& prm, const QuadratureSpec& spec) {
    const Params e = prm.effective();
    EnergyModel model(u.grid_ptr(), e, spec);
    const double semi_p = model.semi_p_pow(u.values());
    const double semi_q = model.semi_q_pow(u.values());
    const double mass = model.mass(u.values(), e.q);
    if (semi_p + semi_q == 0.0) {
        throw DegenerateInputError("rayleigh_pq: constant function");
    }
    if (!(mass > 0.0)) {
        throw DegenerateInputError("rayleigh_pq: zero mass");
    }
    return (semi_p / e.p + semi_q / e.q) * (e.q / mass);
}

ScanReport scan_spectrum(const Params& prm_base, GridPtr grid,
                         const std::vector<double>& lambdas, const SolverOptions& opts) {
    opts.validate();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) {
            throw ParameterError("scan_spectrum: lambdas must be positive");
        }
        if (i > 0 && lambdas[i] < lambdas[i - 1]) {
            throw ParameterError("scan_spectrum: lambdas must be ascending");
        }
    }
    const Params e = prm_base.effective();
    SolveResult lam1 = compute_lambda1(e.s2, e.q, grid, opts);

    ScanReport report;
    report.lambda1_h = lam1.lambda;
    report.rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        SolveResult r = solve_at_lambda(prm_base.with_lambda(lam), grid, opts, lam1);
        ScanRow row;
        row.lambda = lam;
        row.classification = r.classification;
        row.residual_inf = r.residual_inf;
        row.f_min = r.energies.f_lambda;
        row.converged = r.converged;
        report.rows.push_back(row);
        if (r.classification == Classification::NoNontrivialSolution) {
            report.largest_no_solution = lam;
        } else if (!report.smallest_eigenpair) {
            report.smallest_eigenpair = lam;
        }
    }
    return report;
}

} // namespace pqspec
