#pragma once

#include <string>
#include <utility>

#include "pqspec/energy.hpp"

namespace pqspec {

enum class RegimeTag : std::uint8_t { P1, P2, P3, P4 };
enum class Branch : std::uint8_t { Coercive, Nehari };

/// Parameter-ordering regime and the solver branch it selects. The branch
/// depends only on sign(p - q): direct minimization when p > q, Nehari
/// manifold when p < q.
struct Regime {
    RegimeTag tag;
    Branch branch;
};

std::string to_string(RegimeTag t);
std::string to_string(Branch b);

/// Classifies the four parameter orderings (ties s1 == s2 fall to the
/// crossing cases P3/P4). Classification is applied to the effective
/// parameters, so the rhs_exp == P variant reuses the same taxonomy with the
/// pair roles interchanged.
Regime classify_regime(const Params& prm);

/// Returns (u - c, c) where c solves integral |u - c|^{m-2}(u - c) = 0, found
/// by bisection on [min u, max u] over the closed domain plus two Newton
/// polishing steps. Throws DegenerateInputError for constant input.
std::pair<GridFunction, double> shift_to_zero_qmean(const GridFunction& u, double m,
                                                    const QuadratureSpec& spec = {});

/// u scaled so that integral |u|^m = rho. Positive scaling, so a zero q-mean
/// is preserved. Throws DegenerateInputError when the mass vanishes.
GridFunction normalize_lq(const GridFunction& u, double m, double rho,
                          const QuadratureSpec& spec = {});

/// The Nehari scaling formula t = (semi_p / (lambda*mass - semi_q))^(1/(q-p)).
double nehari_scale_from(double semi_p, double denom, double p, double q);

/// Scaling t > 0 putting t*u on the Nehari manifold of F_lambda. Requires the
/// nehari branch (p < q after role normalization); throws
/// InfeasibleDirectionError when lambda*mass - semi_q <= 0 and
/// DegenerateInputError when u has zero seminorm.
double nehari_scale(const GridFunction& u, const Params& prm, const QuadratureSpec& spec = {});

namespace detail {

/// Shift/normalize/rescale on raw values against prebuilt rules; used by the
/// solver loops. shift_values returns the shift c and subtracts it in place;
/// returns false (untouched) for constant input.
bool shift_values(std::span<double> u, double m, const InteriorRule& rule, double* c_out);

} // namespace detail

} // namespace pqspec
