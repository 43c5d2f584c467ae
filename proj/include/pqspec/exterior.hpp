#pragma once

#include <vector>

#include "pqspec/energy.hpp"

namespace pqspec {

/// Truncation levels C_n = 1 - 2^{-n} and masses U_n = int ((u - C_n)^+)^q,
/// together with the limiting integral int ((u - 1)^+)^q.
struct DeGiorgiReport {
    std::vector<double> levels;
    std::vector<double> masses;
    double limit = 0.0;
    double limit_gap = 0.0;
    bool monotone = false;
};

/// Sups of |u| split by region; the global bound is sup <= 2 sup_interior,
/// the exterior estimate the stronger sup_exterior <= sup_interior.
struct LinfReport {
    double sup_interior = 0.0;
    double sup_exterior = 0.0;
    double global_sup = 0.0;
    bool bound_ok = false;
    bool exterior_dominated = false;
};

/// One (s, r) kernel of the nonlocal normal derivative.
struct KernelPair {
    double s;
    double r;
};

/// Replaces every exterior nodal value by the root of
///   v -> sum_k int_Omega |v - u(y)|^{r_k - 2}(v - u(y)) |x - y|^{-(1 + r_k s_k)} dy,
/// found by bisection on [min u, max u] over the closed domain plus Newton
/// polishing. Interior and boundary values are untouched.
GridFunction extend_exterior_pairs(const GridFunction& u, const std::vector<KernelPair>& pairs,
                                   const QuadratureSpec& spec = {});

/// The (p,q)-Neumann extension: kernels (s1, p) and (s2, q) of prm.
GridFunction extend_exterior(const GridFunction& u, const Params& prm,
                             const QuadratureSpec& spec = {});

/// Per-node nonlocal Neumann residual at exterior nodes, each normalized by
/// the absolute mass of its own integrand; zero at non-exterior nodes.
GridFunction neumann_residual_pairs(const GridFunction& u, const std::vector<KernelPair>& pairs,
                                    const QuadratureSpec& spec = {});

GridFunction neumann_residual(const GridFunction& u, const Params& prm,
                              const QuadratureSpec& spec = {});

LinfReport linf_report(const GridFunction& u);

DeGiorgiReport degiorgi_sequence(const GridFunction& u, double q, std::size_t n_max,
                                 const QuadratureSpec& spec = {});

} // namespace pqspec
