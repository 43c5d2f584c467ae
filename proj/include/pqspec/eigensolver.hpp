#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pqspec/constraints.hpp"
#include "pqspec/energy.hpp"

namespace pqspec {

struct SolverOptions {
    double tol = 1e-8;          // relative-change stopping threshold
    std::size_t max_iter = 50000;
    std::size_t restarts = 8;
    std::uint64_t rng_seed = 0;
    double step0 = 1.0;
    double armijo_factor = 0.5; // backtracking multiplier
    double armijo_c = 1e-4;     // sufficient-decrease constant
    QuadratureSpec quadrature{};

    void validate() const;
};

enum class Classification : std::uint8_t { Eigenpair, NoNontrivialSolution };

std::string to_string(Classification c);

/// Residual threshold below which a stationary point counts as an eigenpair,
/// and the L^q floor below which an iterate counts as collapsed to zero.
inline constexpr double kResidualTol = 1e-6;
inline constexpr double kDegeneracyFloor = 1e-6;

struct SolveResult {
    explicit SolveResult(GridPtr grid) : u(std::move(grid)) {}

    double lambda = 0.0;
    GridFunction u;
    EnergyBreakdown energies;
    double residual_inf = 0.0;          // normalized by the energy scale
    std::optional<double> nehari_min;   // inf of F over the manifold, nehari branch
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<Regime> regime;
    Classification classification = Classification::NoNontrivialSolution;
};

struct ScanRow {
    double lambda = 0.0;
    Classification classification = Classification::NoNontrivialSolution;
    double residual_inf = 0.0;
    double f_min = 0.0;
    bool converged = false;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    double lambda1_h = 0.0;
    std::optional<double> largest_no_solution; // largest lambda classified trivial
    std::optional<double> smallest_eigenpair;  // smallest lambda classified eigenpair
};

/// First nonzero eigenvalue of the fractional q-Laplacian under the nonlocal
/// Neumann condition: minimizes [u]^q_{s2,q} over the zero-q-mean cone with
/// unit L^q mass, by projected gradient descent with Armijo backtracking,
/// best of `restarts` seeded random starts.
SolveResult compute_lambda1(double s2, double q, GridPtr grid, const SolverOptions& opts = {});

/// Same minimization from one explicit start (no restarts).
SolveResult compute_lambda1_from(GridFunction start, double s2, double q,
                                 const SolverOptions& opts = {});

/// Eigenfunction search at fixed lambda > 0: direct minimization of F_lambda
/// over the cone when p > q, Nehari-manifold minimization when p < q (roles
/// swapped when rhs_exp == P). Returns the classification rather than
/// throwing when no nontrivial solution emerges.
SolveResult solve_at_lambda(const Params& prm, GridPtr grid, const SolverOptions& opts = {});

/// Variant reusing a precomputed compute_lambda1 result for the same grid and
/// the effective (s2, q) pair; the scan path uses it to avoid recomputation.
SolveResult solve_at_lambda(const Params& prm, GridPtr grid, const SolverOptions& opts,
                            const SolveResult& lambda1);

/// (max_i |<F'_lambda(u), phi_i>|, per-node vector), both normalized by
/// semi_p + semi_q + lambda*mass. Exterior components measure the discrete
/// nonlocal Neumann condition.
std::pair<double, GridFunction> residual(const GridFunction& u, const Params& prm,
                                         const QuadratureSpec& spec = {});

/// Residual of the pure fractional q-Laplacian eigenproblem at (lambda, u).
std::pair<double, GridFunction> residual_q(const GridFunction& u, double s2, double q,
                                           double lambda, const QuadratureSpec& spec = {});

/// (semi_p/p + semi_q/q) / (mass/q); its infimum over the cone equals
/// lambda1. Throws DegenerateInputError for constant u.
double rayleigh_pq(const GridFunction& u, const Params& prm, const QuadratureSpec& spec = {});

/// solve_at_lambda over an ascending list of lambdas, with the bracketing
/// classification threshold. Per-row failures are recorded, not thrown.
ScanReport scan_spectrum(const Params& prm_base, GridPtr grid,
                         const std::vector<double>& lambdas, const SolverOptions& opts = {});

} // namespace pqspec
