#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pqspec/grid.hpp"
#include "pqspec/quadrature.hpp"

namespace pqspec {

enum class RhsExponent : std::uint8_t { Q, P };

/// Problem parameters: kernel orders s1, s2 in (0,1), exponents p, q in
/// (1,inf) with p != q, eigenvalue parameter lambda >= 0, and the exponent of
/// the right-hand side |u|^{m-2}u (default m = q; m = p swaps the roles of
/// the two operators). The kernel normalization constant is fixed to 1.
struct Params {
    double s1;
    double s2;
    double p;
    double q;
    double lambda = 0.0;
    RhsExponent rhs_exp = RhsExponent::Q;

    Params(double s1_, double s2_, double p_, double q_, double lambda_ = 0.0,
           RhsExponent rhs = RhsExponent::Q);

    double sigma() const { return s1 > s2 ? s1 : s2; }
    double theta() const { return p > q ? p : q; }
    /// Exponent m of the right-hand side and of the cone constraint.
    double rhs_m() const { return rhs_exp == RhsExponent::Q ? q : p; }

    /// Parameters with the roles of (s1,p) and (s2,q) interchanged so that
    /// the right-hand side always carries the (s2,q) pair. Identity when
    /// rhs_exp == Q.
    Params effective() const;

    Params with_lambda(double lam) const;
};

/// Nodal values over the full mesh (interior, boundary and collar nodes),
/// interpreted as a piecewise-linear function.
class GridFunction {
public:
    explicit GridFunction(GridPtr grid);
    GridFunction(GridPtr grid, std::vector<double> values);

    static GridFunction constant(GridPtr grid, double c);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    /// Max over nodes in the closed domain [a, b] / in the collar.
    double max_abs_interior() const;
    double max_abs_exterior() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// The energy pieces of one function: the two Gagliardo seminorm powers, the
/// right-hand-side mass, and the value of the functional
///   F_lambda(u) = semi_p/p + semi_q/q - (lambda/m) * mass_q,  m = rhs_m.
struct EnergyBreakdown {
    double semi_p = 0.0; // [u]^p_{s1,p}
    double semi_q = 0.0; // [u]^q_{s2,q}
    double mass_q = 0.0; // integral_Omega |u|^m
    double f_lambda = 0.0;

    /// Normalization used for residuals: semi_p + semi_q + lambda*mass.
    double scale(double lambda) const { return semi_p + semi_q + lambda * mass_q; }
};

/// Precomputed quadrature table over all cell pairs meeting the interaction
/// region. Each point carries the difference u(x)-u(y) as three weighted
/// nodal differences
///   du = (1-tx)(u[xL]-u[yL]) + tx(u[xR]-u[yL]) + ty(u[yL]-u[yR]),
/// so constants are annihilated bit-exactly, plus one combined
/// weight-times-kernel value per kernel. Identical and node-sharing pairs use
/// difference coordinates with geometrically graded panels; disjoint pairs a
/// tensor Gauss rule. Weights include all symmetry factors, so
///   [u]_{s,r}^r = sum_k W_k |du_k|^r
/// over the truncated interaction region.
class PairwiseTable {
public:
    struct Kernel {
        double s;
        double r;
    };

    PairwiseTable(const Grid& grid, std::vector<Kernel> kernels, const QuadratureSpec& spec);

    std::size_t point_count() const { return wk_[0].size(); }
    std::size_t kernel_count() const { return kernels_.size(); }
    const Kernel& kernel(std::size_t j) const { return kernels_[j]; }

    /// sum_k W_k |du_k|^r for kernel j; equals the seminorm power.
    double energy(std::span<const double> u, std::size_t j) const;

    /// sum_k W_k |du_k|^{r-2} du_k dv_k for kernel j (the form action).
    double action(std::span<const double> u, std::span<const double> v, std::size_t j) const;

    /// out[i] += scale * E(u, phi_i) for kernel j, every node i. This is the
    /// exact derivative of energy(u, j)/r with respect to u_i.
    void add_basis_action(std::span<const double> u, std::size_t j, double scale,
                          std::span<double> out) const;

    /// Dense Galerkin matrix A_ij = E(phi_i, phi_j); kernel must have r == 2.
    std::vector<double> assemble_dense(std::size_t j, std::size_t node_count) const;

private:
    template <typename F>
    double reduce_points(F&& per_point) const;

    std::vector<Kernel> kernels_;
    std::vector<std::int32_t> idx_; // 6 per point: (i, j) per difference term
    std::vector<double> coef_;      // 3 per point
    std::vector<double> wk_[2];     // per-kernel weight, one array per kernel
    std::vector<std::size_t> batch_begin_;
};

/// Gauss points over the interior cells; all integrals over Omega use it.
class InteriorRule {
public:
    InteriorRule(const Grid& grid, std::size_t gauss_points);

    std::size_t point_count() const { return x_.size(); }
    std::span<const double> x() const { return x_; }
    std::span<const double> weight() const { return w_; }

    /// u evaluated at every quadrature point.
    std::vector<double> values_at_points(std::span<const double> u) const;

    double integral_abs_pow(std::span<const double> u, double m) const;    // int |u|^m
    double integral_signed_pow(std::span<const double> u, double m) const; // int |u|^{m-2} u

    /// out[i] += scale * int |u|^{m-2} u phi_i. The derivative of
    /// integral_abs_pow is m times this vector.
    void add_signed_pow_basis(std::span<const double> u, double m, double scale,
                              std::span<double> out) const;

    /// out[i] += scale * int |u|^{m-2} phi_i, the derivative of the zero
    /// q-mean constraint (up to the factor m-1).
    void add_abs_pow_basis(std::span<const double> u, double m, double scale,
                           std::span<double> out) const;

private:
    std::vector<double> x_;
    std::vector<double> w_;
    std::vector<std::uint32_t> left_;
    std::vector<double> t_;
};

/// Both nonlocal kernels of one Params plus the interior rule, sharing one
/// geometric table. The gradient is the exact derivative of the quadrature
/// energy, so finite differences of f() match gradient() to round-off-level
/// accuracy.
class EnergyModel {
public:
    EnergyModel(GridPtr grid, const Params& prm, const QuadratureSpec& spec = {});

    const Params& params() const { return prm_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const InteriorRule& interior_rule() const { return interior_; }

    double semi_p_pow(std::span<const double> u) const { return table_.energy(u, 0); }
    double semi_q_pow(std::span<const double> u) const { return table_.energy(u, 1); }
    double mass(std::span<const double> u, double m) const {
        return interior_.integral_abs_pow(u, m);
    }
    double q_mean(std::span<const double> u, double m) const {
        return interior_.integral_signed_pow(u, m);
    }

    EnergyBreakdown breakdown(std::span<const double> u) const;
    double f(std::span<const double> u) const { return breakdown(u).f_lambda; }

    /// g_i = <F'_lambda(u), phi_i> over all nodes.
    void gradient(std::span<const double> u, std::span<double> out) const;

    void add_basis_action_p(std::span<const double> u, double scale, std::span<double> out) const {
        table_.add_basis_action(u, 0, scale, out);
    }
    void add_basis_action_q(std::span<const double> u, double scale, std::span<double> out) const {
        table_.add_basis_action(u, 1, scale, out);
    }
    void add_mass_basis(std::span<const double> u, double m, double scale,
                        std::span<double> out) const {
        interior_.add_signed_pow_basis(u, m, scale, out);
    }

private:
    GridPtr grid_;
    Params prm_;
    PairwiseTable table_;
    InteriorRule interior_;
};

/// Single-kernel counterpart used by the pure-q eigenvalue pipeline.
class NonlocalOperator {
public:
    NonlocalOperator(GridPtr grid, double s, double r, const QuadratureSpec& spec = {});

    double s() const { return table_.kernel(0).s; }
    double r() const { return table_.kernel(0).r; }
    const GridPtr& grid_ptr() const { return grid_; }

    double seminorm_pow(std::span<const double> u) const { return table_.energy(u, 0); }
    double action(std::span<const double> u, std::span<const double> v) const {
        return table_.action(u, v, 0);
    }
    void add_basis_action(std::span<const double> u, double scale, std::span<double> out) const {
        table_.add_basis_action(u, 0, scale, out);
    }
    /// Dense Galerkin matrix; requires r == 2.
    std::vector<double> assemble_dense() const;

private:
    GridPtr grid_;
    PairwiseTable table_;
};

// Convenience entry points (each builds its quadrature table on the fly).

/// [u]_{s,r}^r over the truncated interaction region.
double seminorm(const GridFunction& u, double s, double r, const QuadratureSpec& spec = {});

/// E_{s,r}(u, v); throws ParameterError on grid mismatch.
double form_action(const GridFunction& u, const GridFunction& v, double s, double r,
                   const QuadratureSpec& spec = {});

/// integral_Omega |u|^m.
double mass_q(const GridFunction& u, double m, const QuadratureSpec& spec = {});

/// integral_Omega |u|^{m-2} u (odd in u).
double q_mean(const GridFunction& u, double m, const QuadratureSpec& spec = {});

EnergyBreakdown f_lambda(const GridFunction& u, const Params& prm,
                         const QuadratureSpec& spec = {});

GridFunction grad_f_lambda(const GridFunction& u, const Params& prm,
                           const QuadratureSpec& spec = {});

/// |t|^{r-2} t with the subgradient convention 0 at t = 0 (needed for r < 2).
double signed_pow(double t, double r_minus_2);

} // namespace pqspec
