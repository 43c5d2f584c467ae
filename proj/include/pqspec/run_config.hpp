#pragma once

#include <json.hpp>
#include <string>

#include "pqspec/eigensolver.hpp"
#include "pqspec/energy.hpp"
#include "pqspec/grid.hpp"

namespace pqspec {

/// Flat JSON run configuration: problem parameters, grid, quadrature knobs,
/// solver options, output directory. Unknown keys are rejected.
struct RunConfig {
    // problem
    double s1 = 0.0;
    double s2 = 0.0;
    double p = 0.0;
    double q = 0.0;
    double lambda = 0.0;
    RhsExponent rhs_exp = RhsExponent::Q;
    // grid
    double a = 0.0;
    double b = 1.0;
    std::size_t n_int = 64;
    double collar_width = 0.0; // 0 -> 2 (b - a)
    std::size_t n_ext = 0;     // 0 -> collar at interior spacing
    // quadrature
    std::size_t panels = 12;
    std::size_t gauss_points = 5;
    // solver
    SolverOptions solver_options{};
    // oracle subcommand
    std::string oracle_mode = "dense"; // dense | bruteforce | both
    std::size_t oracle_starts = 64;
    // output
    std::string output_dir = ".";

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    double effective_collar() const { return collar_width > 0.0 ? collar_width : 2.0 * (b - a); }
    std::size_t effective_n_ext() const;

    Params params() const;
    GridPtr make_grid() const;
    QuadratureSpec quadrature() const;
    SolverOptions solver() const;

    nlohmann::ordered_json to_json() const;
};

} // namespace pqspec
