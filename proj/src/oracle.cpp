#include "pqspec/oracle.hpp"

#include <cmath>

#include "descent_detail.hpp"
#include "pqspec/errors.hpp"

namespace pqspec {

DenseForm DenseForm::assemble(GridPtr grid, double s2, const QuadratureSpec& spec) {
    const std::size_t n = grid->node_count();
    DenseForm form;

    NonlocalOperator op(grid, s2, 2.0, spec);
    const auto a_flat = op.assemble_dense();
    form.a = Eigen::Map<const Eigen::MatrixXd>(a_flat.data(), n, n);

    form.m = Eigen::MatrixXd::Zero(n, n);
    InteriorRule rule(*grid, spec.gauss_points);
    for (std::size_t k = 0; k < rule.point_count(); ++k) {
        // Two hats are active per interior quadrature point.
        const double x = rule.x()[k];
        const double w = rule.weight()[k];
        std::size_t cell = 0;
        for (std::size_t c = grid->first_interior_cell();
             c < grid->first_interior_cell() + grid->interior_cell_count(); ++c) {
            if (x >= grid->cell_left(c) && x <= grid->cell_right(c)) {
                cell = c;
                break;
            }
        }
        const double t = (x - grid->cell_left(cell)) / grid->cell_width(cell);
        const double phi[2] = {1.0 - t, t};
        const std::size_t nodes[2] = {cell, cell + 1};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                form.m(nodes[i], nodes[j]) += w * phi[i] * phi[j];
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (grid->region(i) == Region::Exterior) {
            form.exterior_nodes.push_back(i);
        } else {
            form.mass_nodes.push_back(i);
        }
    }
    return form;
}

std::vector<std::pair<double, GridFunction>> dense_eigensolve_q2(double s2, GridPtr grid,
                                                                 const QuadratureSpec& spec) {
    if (grid->node_count() > 2000) {
        throw ParameterError("dense_eigensolve_q2: node count exceeds the dense cap (2000)");
    }
    const DenseForm form = DenseForm::assemble(grid, s2, spec);
    const auto& fn = form.mass_nodes;
    const auto& en = form.exterior_nodes;
    const Eigen::Index nf = static_cast<Eigen::Index>(fn.size());
    const Eigen::Index ne = static_cast<Eigen::Index>(en.size());

    Eigen::MatrixXd aff(nf, nf), afe(nf, ne), aee(ne, ne), mff(nf, nf);
    for (Eigen::Index i = 0; i < nf; ++i) {
        for (Eigen::Index j = 0; j < nf; ++j) {
            aff(i, j) = form.a(fn[i], fn[j]);
            mff(i, j) = form.m(fn[i], fn[j]);
        }
        for (Eigen::Index j = 0; j < ne; ++j) afe(i, j) = form.a(fn[i], en[j]);
    }
    for (Eigen::Index i = 0; i < ne; ++i) {
        for (Eigen::Index j = 0; j < ne; ++j) aee(i, j) = form.a(en[i], en[j]);
    }

    // Schur complement on the exterior block: the pencil restricted to the
    // mass-carrying nodes, with collar values recovered from stationarity.
    Eigen::LLT<Eigen::MatrixXd> llt(aee);
    if (llt.info() != Eigen::Success) {
        throw DegenerateInputError("dense_eigensolve_q2: exterior block not positive definite");
    }
    const Eigen::MatrixXd aee_inv_aef = llt.solve(afe.transpose());
    Eigen::MatrixXd schur = aff - afe * aee_inv_aef;
    schur = 0.5 * (schur + schur.transpose()).eval();
    const Eigen::MatrixXd msym = 0.5 * (mff + mff.transpose());

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(schur, msym);
    if (eig.info() != Eigen::Success) {
        throw DegenerateInputError("dense_eigensolve_q2: pencil solve failed");
    }

    std::vector<std::pair<double, GridFunction>> out;
    out.reserve(static_cast<std::size_t>(nf));
    for (Eigen::Index k = 0; k < nf; ++k) {
        const Eigen::VectorXd vf = eig.eigenvectors().col(k);
        const Eigen::VectorXd ve = -aee_inv_aef * vf;
        GridFunction u(grid);
        for (Eigen::Index i = 0; i < nf; ++i) u[fn[i]] = vf(i);
        for (Eigen::Index i = 0; i < ne; ++i) u[en[i]] = ve(i);
        out.emplace_back(eig.eigenvalues()(k), std::move(u));
    }
    return out;
}

namespace {

void check_tiny(const Grid& grid) {
    if (grid.node_count() > 12) {
        throw ParameterError("brute-force oracle: node count must be at most 12");
    }
}

/// Signed hats at every node of the closed domain plus the first sine modes;
/// the deterministic complement of the random starts.
std::vector<std::vector<double>> pattern_starts(const Grid& grid) {
    std::vector<std::vector<double>> starts;
    const std::size_t n = grid.node_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (grid.region(i) == Region::Exterior) continue;
        std::vector<double> hat(n, 0.0);
        hat[i] = 1.0;
        starts.push_back(hat);
        for (double& v : hat) v = -v;
        starts.push_back(hat);
    }
    const double pi = 3.14159265358979323846;
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> mode(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = (grid.node(i) - grid.a()) / (grid.b() - grid.a());
            mode[i] = std::sin(pi * k * t);
        }
        starts.push_back(mode);
        for (double& v : mode) v = -v;
        starts.push_back(mode);
    }
    return starts;
}

} // namespace

SolveResult multistart_bruteforce(const Params& prm, GridPtr grid, std::size_t n_starts,
                                  const SolverOptions& opts) {
    opts.validate();
    check_tiny(*grid);
    const Params e = prm.effective();
    const bool nehari = (e.lambda > 0.0) && (e.p < e.q);
    EnergyModel model(grid, e, opts.quadrature);
    detail::FunctionalProblem problem{model, nehari};

    std::vector<std::vector<double>> starts = pattern_starts(*grid);
    for (std::size_t k = 0; k < n_starts; ++k) {
        auto rng = detail::seeded_rng(opts.rng_seed, 1000 + k);
        starts.push_back(detail::random_start(*grid, rng, 1.0));
    }

    bool any_feasible = false;
    bool have_best = false;
    std::vector<double> best_u;
    detail::DescentOutcome best{};
    std::size_t total_iterations = 0;
    for (auto& start : starts) {
        detail::DescentOutcome outcome =
            detail::descend(problem, start, opts, detail::kSolveResidualTarget);
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

SolveResult bruteforce_lambda1(double s2, double q, GridPtr grid, std::size_t n_starts,
                               const SolverOptions& opts) {
    opts.validate();
    check_tiny(*grid);
    NonlocalOperator op(grid, s2, q, opts.quadrature);
    InteriorRule rule(*grid, opts.quadrature.gauss_points);
    detail::RayleighQProblem problem{op, rule, q};

    std::vector<std::vector<double>> starts = pattern_starts(*grid);
    for (std::size_t k = 0; k < n_starts; ++k) {
        auto rng = detail::seeded_rng(opts.rng_seed, 2000 + k);
        starts.push_back(detail::random_start(*grid, rng, 1.0));
    }

    bool have_best = false;
    std::vector<double> best_u;
    detail::DescentOutcome best{};
    for (auto& start : starts) {
        detail::DescentOutcome outcome =
            detail::descend(problem, start, opts, detail::kLambda1ResidualTarget);
        if (!outcome.feasible) continue;
        if (!have_best || detail::outcome_improves(outcome, best)) {
            have_best = true;
            best = outcome;
            best_u = std::move(start);
        }
    }
    if (!have_best) {
        throw DegenerateInputError("bruteforce_lambda1: no feasible start");
    }

    SolveResult res(grid);
    std::copy(best_u.begin(), best_u.end(), res.u.values().begin());
    res.lambda = best.f;
    res.energies.semi_q = best.f;
    res.energies.mass_q = rule.integral_abs_pow(best_u, q);
    res.energies.f_lambda = 0.0;
    res.residual_inf = best.residual;
    res.iterations = best.iterations;
    res.converged = best.residual <= kResidualTol;
    res.classification = res.converged ? Classification::Eigenpair
                                       : Classification::NoNontrivialSolution;
    return res;
}

} // namespace pqspec
