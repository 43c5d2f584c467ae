#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "pqspec/eigensolver.hpp"

namespace pqspec {

/// Dense Galerkin pencil of the r = 2 nonlocal form: A over all nodes, the
/// interior L2 mass M (zero rows on collar nodes), and the node partition
/// used to eliminate the mass-free exterior block.
struct DenseForm {
    Eigen::MatrixXd a;
    Eigen::MatrixXd m;
    std::vector<std::size_t> mass_nodes;     // nodes of the closed domain [a, b]
    std::vector<std::size_t> exterior_nodes; // collar nodes

    static DenseForm assemble(GridPtr grid, double s2, const QuadratureSpec& spec = {});
};

/// Ground truth for the q = 2 problem: eigenvalues of A v = lambda M v with
/// the exterior block eliminated by a Schur complement (exactly the
/// variational elimination of the collar unknowns). Returned ascending; the
/// first eigenvalue is zero with constant eigenvector, the second one is the
/// reference for lambda1(s2, 2). Node count is capped at 2000.
std::vector<std::pair<double, GridFunction>> dense_eigensolve_q2(
    double s2, GridPtr grid, const QuadratureSpec& spec = {});

/// Brute-force minimization of F_lambda on tiny grids (node count <= 12):
/// the branch-appropriate descent from n_starts dense random starts plus
/// deterministic pattern starts (signed hats and low sine modes). The best
/// objective certifies the production solver.
SolveResult multistart_bruteforce(const Params& prm, GridPtr grid, std::size_t n_starts,
                                  const SolverOptions& opts = {});

/// Brute-force counterpart of compute_lambda1 on tiny grids.
SolveResult bruteforce_lambda1(double s2, double q, GridPtr grid, std::size_t n_starts,
                               const SolverOptions& opts = {});

} // namespace pqspec
