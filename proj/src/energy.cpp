#include "pqspec/energy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pqspec/errors.hpp"
#include "pqspec/runtime.hpp"

namespace pqspec {

namespace {

constexpr std::size_t kBatches = 64;

void check_fraction(double s, const char* name) {
    if (!(s > 0.0) || !(s < 1.0) || !std::isfinite(s)) {
        throw ParameterError(std::string(name) + " must lie in (0, 1)");
    }
}

void check_exponent(double r, const char* name) {
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw ParameterError(std::string(name) + " must lie in (1, inf)");
    }
}

// Runs fn(b) for every batch, possibly on several workers. Each batch writes
// only its own slot, so results do not depend on the worker count.
template <typename F>
void for_batches(std::size_t nb, F&& fn) {
    const std::size_t t = std::min(thread_count(), nb);
    if (t <= 1) {
        for (std::size_t b = 0; b < nb; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        workers.emplace_back([&] {
            for (std::size_t b = next.fetch_add(1); b < nb; b = next.fetch_add(1)) fn(b);
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace

double signed_pow(double t, double r_minus_2) {
    if (t == 0.0) return 0.0;
    if (r_minus_2 == 0.0) return t;
    return std::pow(std::abs(t), r_minus_2) * t;
}

// ---------------------------------------------------------------------------
// Params
// ---------------------------------------------------------------------------

Params::Params(double s1_, double s2_, double p_, double q_, double lambda_, RhsExponent rhs)
    : s1(s1_), s2(s2_), p(p_), q(q_), lambda(lambda_), rhs_exp(rhs) {
    check_fraction(s1, "s1");
    check_fraction(s2, "s2");
    check_exponent(p, "p");
    check_exponent(q, "q");
    if (p == q) {
        throw UnsupportedParametersError("unsupported parameters: p == q is not admitted");
    }
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw ParameterError("lambda must be finite and >= 0");
    }
}

Params Params::effective() const {
    if (rhs_exp == RhsExponent::Q) return *this;
    return Params(s2, s1, q, p, lambda, RhsExponent::Q);
}

Params Params::with_lambda(double lam) const {
    Params out = *this;
    if (!std::isfinite(lam) || lam < 0.0) {
        throw ParameterError("lambda must be finite and >= 0");
    }
    out.lambda = lam;
    return out;
}

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_->node_count(), 0.0) {}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->node_count()) {
        throw ParameterError("grid function: value count must equal node count");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ParameterError("grid function: values must be finite");
    }
}

GridFunction GridFunction::constant(GridPtr grid, double c) {
    GridFunction u(std::move(grid));
    std::fill(u.values_.begin(), u.values_.end(), c);
    return u;
}

double GridFunction::max_abs_interior() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (grid_->region(i) != Region::Exterior) m = std::max(m, std::abs(values_[i]));
    }
    return m;
}

double GridFunction::max_abs_exterior() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (grid_->region(i) == Region::Exterior) m = std::max(m, std::abs(values_[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// PairwiseTable
// ---------------------------------------------------------------------------

PairwiseTable::PairwiseTable(const Grid& grid, std::vector<Kernel> kernels,
                             const QuadratureSpec& spec)
    : kernels_(std::move(kernels)) {
    spec.validate();
    if (kernels_.empty() || kernels_.size() > 2) {
        throw ParameterError("pairwise table: one or two kernels");
    }
    for (const Kernel& k : kernels_) {
        check_fraction(k.s, "kernel s");
        check_exponent(k.r, "kernel r");
    }

    const GaussRule gauss = gauss_legendre(spec.gauss_points);
    const std::size_t g = gauss.size();
    const auto pairs = cell_pairs(grid);

    // Singular pairs get panels*g*g points, disjoint pairs g*g.
    std::size_t estimate = 0;
    for (const CellPair& cp : pairs) {
        estimate += (cp.kind == PairKind::Disjoint ? g * g : spec.panels * g * g);
    }
    idx_.reserve(6 * estimate);
    coef_.reserve(3 * estimate);
    for (std::size_t j = 0; j < kernels_.size(); ++j) wk_[j].reserve(estimate);

    const auto emit = [&](double x, double y, double w_geom, std::uint32_t ca, std::uint32_t cb) {
        const double wa = grid.cell_width(ca);
        const double wb = grid.cell_width(cb);
        const double tx = (x - grid.cell_left(ca)) / wa;
        const double ty = (y - grid.cell_left(cb)) / wb;
        // du = (1-tx)(u[xL]-u[yL]) + tx(u[xR]-u[yL]) + ty(u[yL]-u[yR])
        idx_.push_back(static_cast<std::int32_t>(ca));
        idx_.push_back(static_cast<std::int32_t>(cb));
        idx_.push_back(static_cast<std::int32_t>(ca + 1));
        idx_.push_back(static_cast<std::int32_t>(cb));
        idx_.push_back(static_cast<std::int32_t>(cb));
        idx_.push_back(static_cast<std::int32_t>(cb + 1));
        coef_.push_back(1.0 - tx);
        coef_.push_back(tx);
        coef_.push_back(ty);
        const double z = y - x; // positive by construction
        for (std::size_t j = 0; j < kernels_.size(); ++j) {
            const double expo = 1.0 + kernels_[j].r * kernels_[j].s;
            wk_[j].push_back(w_geom * std::pow(z, -expo));
        }
    };

    for (const CellPair& cp : pairs) {
        const std::uint32_t ca = cp.cell_a;
        const std::uint32_t cb = cp.cell_b;
        if (cp.kind == PairKind::Disjoint) {
            // ca lies strictly left of cb; plain tensor rule, factor 2 for the
            // two orderings of the pair.
            const double la = grid.cell_left(ca), ra = grid.cell_right(ca);
            const double lb = grid.cell_left(cb), rb = grid.cell_right(cb);
            const double ja = jacobian(la, ra), jb = jacobian(lb, rb);
            for (std::size_t i = 0; i < g; ++i) {
                const double x = map_to(gauss.points[i], la, ra);
                const double wx = gauss.weights[i] * ja;
                for (std::size_t k = 0; k < g; ++k) {
                    const double y = map_to(gauss.points[k], lb, rb);
                    const double wy = gauss.weights[k] * jb;
                    emit(x, y, 2.0 * wx * wy, ca, cb);
                }
            }
            continue;
        }
        // Difference coordinates z = y - x with geometric grading toward the
        // singular line z = 0; the integrand is symmetric under swapping x
        // and y, hence the factor 2.
        const double l1 = grid.cell_left(ca), r1 = grid.cell_right(ca);
        const double l2 = grid.cell_left(cb), r2 = grid.cell_right(cb);
        const double zmax = r2 - l1;
        for (const auto& [zlo, zhi] : graded_panels(zmax, spec.panels)) {
            const double jz = jacobian(zlo, zhi);
            for (std::size_t i = 0; i < g; ++i) {
                const double z = map_to(gauss.points[i], zlo, zhi);
                const double wz = gauss.weights[i] * jz;
                const double xlo = std::max(l1, l2 - z);
                const double xhi = std::min(r1, r2 - z);
                if (!(xhi > xlo)) continue;
                const double jx = jacobian(xlo, xhi);
                for (std::size_t k = 0; k < g; ++k) {
                    const double x = map_to(gauss.points[k], xlo, xhi);
                    const double wx = gauss.weights[k] * jx;
                    emit(x, x + z, 2.0 * wz * wx, ca, cb);
                }
            }
        }
    }

    // Fixed batch boundaries; every reduction walks them in order, so sums
    // are bitwise identical for any worker count.
    const std::size_t n = wk_[0].size();
    const std::size_t nb = std::min<std::size_t>(kBatches, std::max<std::size_t>(n, 1));
    batch_begin_.resize(nb + 1);
    for (std::size_t b = 0; b <= nb; ++b) batch_begin_[b] = n * b / nb;
}

template <typename F>
double PairwiseTable::reduce_points(F&& per_point) const {
    const std::size_t nb = batch_begin_.size() - 1;
    std::vector<double> partial(nb, 0.0);
    for_batches(nb, [&](std::size_t b) {
        double acc = 0.0;
        for (std::size_t k = batch_begin_[b]; k < batch_begin_[b + 1]; ++k) acc += per_point(k);
        partial[b] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

namespace {

inline double table_diff(const std::int32_t* id, const double* cf, const double* u,
                         std::size_t k) {
    const std::size_t o6 = 6 * k;
    const std::size_t o3 = 3 * k;
    return cf[o3] * (u[id[o6]] - u[id[o6 + 1]]) + cf[o3 + 1] * (u[id[o6 + 2]] - u[id[o6 + 3]]) +
           cf[o3 + 2] * (u[id[o6 + 4]] - u[id[o6 + 5]]);
}

} // namespace

double PairwiseTable::energy(std::span<const double> u, std::size_t j) const {
    const double r = kernels_[j].r;
    const double* w = wk_[j].data();
    const std::int32_t* id = idx_.data();
    const double* cf = coef_.data();
    const double* uv = u.data();
    if (r == 2.0) {
        return reduce_points([&](std::size_t k) {
            const double d = table_diff(id, cf, uv, k);
            return w[k] * d * d;
        });
    }
    return reduce_points([&](std::size_t k) {
        const double d = table_diff(id, cf, uv, k);
        return d == 0.0 ? 0.0 : w[k] * std::pow(std::abs(d), r);
    });
}

double PairwiseTable::action(std::span<const double> u, std::span<const double> v,
                             std::size_t j) const {
    const double r = kernels_[j].r;
    const double* w = wk_[j].data();
    const std::int32_t* id = idx_.data();
    const double* cf = coef_.data();
    const double* uv = u.data();
    const double* vv = v.data();
    if (r == 2.0) {
        return reduce_points([&](std::size_t k) {
            return w[k] * table_diff(id, cf, uv, k) * table_diff(id, cf, vv, k);
        });
    }
    const double rm2 = r - 2.0;
    return reduce_points([&](std::size_t k) {
        const double dv = table_diff(id, cf, vv, k);
        if (dv == 0.0) return 0.0;
        return w[k] * signed_pow(table_diff(id, cf, uv, k), rm2) * dv;
    });
}

void PairwiseTable::add_basis_action(std::span<const double> u, std::size_t j, double scale,
                                     std::span<double> out) const {
    const double r = kernels_[j].r;
    const double rm2 = r - 2.0;
    const bool linear = (r == 2.0);
    const double* w = wk_[j].data();
    const std::int32_t* id = idx_.data();
    const double* cf = coef_.data();
    const double* uv = u.data();
    const std::size_t nb = batch_begin_.size() - 1;
    const std::size_t n = out.size();

    std::vector<double> buffers(nb * n, 0.0);
    for_batches(nb, [&](std::size_t b) {
        double* g = buffers.data() + b * n;
        for (std::size_t k = batch_begin_[b]; k < batch_begin_[b + 1]; ++k) {
            const double d = table_diff(id, cf, uv, k);
            if (d == 0.0) continue;
            const double a = w[k] * (linear ? d : signed_pow(d, rm2));
            const std::size_t o6 = 6 * k;
            const std::size_t o3 = 3 * k;
            for (std::size_t s = 0; s < 3; ++s) {
                const double ac = a * cf[o3 + s];
                g[id[o6 + 2 * s]] += ac;
                g[id[o6 + 2 * s + 1]] -= ac;
            }
        }
    });
    for (std::size_t b = 0; b < nb; ++b) {
        const double* g = buffers.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) out[i] += scale * g[i];
    }
}

std::vector<double> PairwiseTable::assemble_dense(std::size_t j, std::size_t node_count) const {
    if (kernels_[j].r != 2.0) {
        throw ParameterError("dense assembly is defined for r == 2 only");
    }
    std::vector<double> a(node_count * node_count, 0.0);
    const double* w = wk_[j].data();
    for (std::size_t k = 0; k < point_count(); ++k) {
        const std::size_t o6 = 6 * k;
        const std::size_t o3 = 3 * k;
        // Flatten the three differences into six signed hat values.
        const std::int32_t nodes[6] = {idx_[o6],     idx_[o6 + 1], idx_[o6 + 2],
                                       idx_[o6 + 3], idx_[o6 + 4], idx_[o6 + 5]};
        const double vals[6] = {coef_[o3],      -coef_[o3],     coef_[o3 + 1],
                                -coef_[o3 + 1], coef_[o3 + 2],  -coef_[o3 + 2]};
        for (std::size_t s = 0; s < 6; ++s) {
            const double ws = w[k] * vals[s];
            double* row = a.data() + static_cast<std::size_t>(nodes[s]) * node_count;
            for (std::size_t t = 0; t < 6; ++t) {
                row[nodes[t]] += ws * vals[t];
            }
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// InteriorRule
// ---------------------------------------------------------------------------

InteriorRule::InteriorRule(const Grid& grid, std::size_t gauss_points) {
    const GaussRule gauss = gauss_legendre(gauss_points);
    const std::size_t first = grid.first_interior_cell();
    const std::size_t count = grid.interior_cell_count();
    x_.reserve(count * gauss.size());
    w_.reserve(count * gauss.size());
    left_.reserve(count * gauss.size());
    t_.reserve(count * gauss.size());
    for (std::size_t c = first; c < first + count; ++c) {
        const double lo = grid.cell_left(c), hi = grid.cell_right(c);
        const double jac = jacobian(lo, hi);
        for (std::size_t i = 0; i < gauss.size(); ++i) {
            const double x = map_to(gauss.points[i], lo, hi);
            x_.push_back(x);
            w_.push_back(gauss.weights[i] * jac);
            left_.push_back(static_cast<std::uint32_t>(c));
            t_.push_back((x - lo) / (hi - lo));
        }
    }
}

std::vector<double> InteriorRule::values_at_points(std::span<const double> u) const {
    std::vector<double> out(x_.size());
    for (std::size_t k = 0; k < x_.size(); ++k) {
        out[k] = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
    }
    return out;
}

double InteriorRule::integral_abs_pow(std::span<const double> u, double m) const {
    check_exponent(m, "mass exponent");
    double acc = 0.0;
    if (m == 2.0) {
        for (std::size_t k = 0; k < x_.size(); ++k) {
            const double v = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
            acc += w_[k] * v * v;
        }
        return acc;
    }
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double v = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
        acc += w_[k] * std::pow(std::abs(v), m);
    }
    return acc;
}

double InteriorRule::integral_signed_pow(std::span<const double> u, double m) const {
    check_exponent(m, "mass exponent");
    const double mm2 = m - 2.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double v = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
        acc += w_[k] * signed_pow(v, mm2);
    }
    return acc;
}

void InteriorRule::add_signed_pow_basis(std::span<const double> u, double m, double scale,
                                        std::span<double> out) const {
    check_exponent(m, "mass exponent");
    const double mm2 = m - 2.0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double v = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
        const double a = scale * w_[k] * signed_pow(v, mm2);
        out[left_[k]] += a * (1.0 - t_[k]);
        out[left_[k] + 1] += a * t_[k];
    }
}

void InteriorRule::add_abs_pow_basis(std::span<const double> u, double m, double scale,
                                     std::span<double> out) const {
    check_exponent(m, "mass exponent");
    const double mm2 = m - 2.0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const double v = (1.0 - t_[k]) * u[left_[k]] + t_[k] * u[left_[k] + 1];
        const double av = (v == 0.0 && mm2 < 0.0) ? 0.0 : std::pow(std::abs(v), mm2);
        const double a = scale * w_[k] * av;
        out[left_[k]] += a * (1.0 - t_[k]);
        out[left_[k] + 1] += a * t_[k];
    }
}

// ---------------------------------------------------------------------------
// EnergyModel / NonlocalOperator
// ---------------------------------------------------------------------------

EnergyModel::EnergyModel(GridPtr grid, const Params& prm, const QuadratureSpec& spec)
    : grid_(std::move(grid)),
      prm_(prm),
      table_(*grid_, {{prm.s1, prm.p}, {prm.s2, prm.q}}, spec),
      interior_(*grid_, spec.gauss_points) {}

EnergyBreakdown EnergyModel::breakdown(std::span<const double> u) const {
    EnergyBreakdown out;
    out.semi_p = table_.energy(u, 0);
    out.semi_q = table_.energy(u, 1);
    const double m = prm_.rhs_m();
    out.mass_q = interior_.integral_abs_pow(u, m);
    out.f_lambda = out.semi_p / prm_.p + out.semi_q / prm_.q - (prm_.lambda / m) * out.mass_q;
    return out;
}

void EnergyModel::gradient(std::span<const double> u, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    table_.add_basis_action(u, 0, 1.0, out);
    table_.add_basis_action(u, 1, 1.0, out);
    if (prm_.lambda != 0.0) {
        interior_.add_signed_pow_basis(u, prm_.rhs_m(), -prm_.lambda, out);
    }
}

NonlocalOperator::NonlocalOperator(GridPtr grid, double s, double r, const QuadratureSpec& spec)
    : grid_(std::move(grid)), table_(*grid_, {{s, r}}, spec) {}

std::vector<double> NonlocalOperator::assemble_dense() const {
    return table_.assemble_dense(0, grid_->node_count());
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

double seminorm(const GridFunction& u, double s, double r, const QuadratureSpec& spec) {
    NonlocalOperator op(u.grid_ptr(), s, r, spec);
    return op.seminorm_pow(u.values());
}

double form_action(const GridFunction& u, const GridFunction& v, double s, double r,
                   const QuadratureSpec& spec) {
    if (!u.grid().same_mesh(v.grid())) {
        throw ParameterError("form_action: functions live on different grids");
    }
    NonlocalOperator op(u.grid_ptr(), s, r, spec);
    return op.action(u.values(), v.values());
}

double mass_q(const GridFunction& u, double m, const QuadratureSpec& spec) {
    InteriorRule rule(u.grid(), spec.gauss_points);
    return rule.integral_abs_pow(u.values(), m);
}

double q_mean(const GridFunction& u, double m, const QuadratureSpec& spec) {
    InteriorRule rule(u.grid(), spec.gauss_points);
    return rule.integral_signed_pow(u.values(), m);
}

EnergyBreakdown f_lambda(const GridFunction& u, const Params& prm, const QuadratureSpec& spec) {
    EnergyModel model(u.grid_ptr(), prm, spec);
    return model.breakdown(u.values());
}

GridFunction grad_f_lambda(const GridFunction& u, const Params& prm, const QuadratureSpec& spec) {
    EnergyModel model(u.grid_ptr(), prm, spec);
    GridFunction g(u.grid_ptr());
    model.gradient(u.values(), g.values());
    return g;
}

} // namespace pqspec
