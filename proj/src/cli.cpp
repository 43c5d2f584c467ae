#include "pqspec/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pqspec/errors.hpp"
#include "pqspec/exterior.hpp"
#include "pqspec/oracle.hpp"
#include "pqspec/report_io.hpp"

namespace pqspec {

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path out_path(const RunConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    return std::filesystem::path(config.output_dir) / name;
}

/// Deterministic payload plus an isolated metadata block; byte-identical
/// reruns differ only inside "meta".
void write_report(const RunConfig& config, const std::string& name,
                  nlohmann::ordered_json result) {
    nlohmann::ordered_json doc;
    doc["result"] = std::move(result);
    doc["config"] = config.to_json();
    doc["meta"] = {{"timestamp", timestamp_utc()}};
    write_text_file(out_path(config, name).string(), doc.dump(2) + "\n");
}

} // namespace

int cmd_lambda1(const RunConfig& config) {
    const Params prm = config.params().effective();
    const GridPtr grid = config.make_grid();
    const SolveResult res = compute_lambda1(prm.s2, prm.q, grid, config.solver());

    nlohmann::ordered_json result = to_json(res);
    result["lambda1"] = res.lambda;
    result["grid"] = grid_to_json(*grid);
    write_report(config, "result.json", std::move(result));
    write_text_file(out_path(config, "u1.csv").string(), function_to_csv(res.u));
    write_text_file(out_path(config, "u1.svg").string(), function_to_svg(res.u));
    return res.converged ? 0 : 2;
}

int cmd_solve(const RunConfig& config, double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        std::cerr << "solve: lambda must be nonnegative\n";
        return 1;
    }
    const GridPtr grid = config.make_grid();

    if (lambda == 0.0) {
        // The zero eigenvalue with constant eigenfunctions; the residual is
        // identically zero, no solve needed.
        const Params prm = config.params().with_lambda(0.0);
        const GridFunction u = GridFunction::constant(grid, 1.0);
        auto [rmax, rvec] = residual(u, prm, config.quadrature());
        SolveResult res(grid);
        res.u = u;
        res.lambda = 0.0;
        res.energies = f_lambda(u, prm, config.quadrature());
        res.residual_inf = rmax;
        res.converged = true;
        res.regime = classify_regime(prm);
        res.classification = Classification::Eigenpair;
        nlohmann::ordered_json result = to_json(res);
        result["grid"] = grid_to_json(*grid);
        write_report(config, "result.json", std::move(result));
        write_text_file(out_path(config, "u.csv").string(), function_to_csv(res.u));
        write_text_file(out_path(config, "u.svg").string(), function_to_svg(res.u));
        return 0;
    }

    const Params prm = config.params().with_lambda(lambda);
    const SolveResult res = solve_at_lambda(prm, grid, config.solver());
    nlohmann::ordered_json result = to_json(res);
    result["grid"] = grid_to_json(*grid);
    write_report(config, "result.json", std::move(result));
    write_text_file(out_path(config, "u.csv").string(), function_to_csv(res.u));
    write_text_file(out_path(config, "u.svg").string(), function_to_svg(res.u));
    return res.converged ? 0 : 2;
}

int cmd_scan(const RunConfig& config, double lambda_min, double lambda_max,
             std::size_t steps) {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min) || steps < 2) {
        std::cerr << "scan: need 0 < min < max and at least 2 steps\n";
        return 1;
    }
    std::vector<double> lambdas(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        lambdas[k] = lambda_min + (lambda_max - lambda_min) * static_cast<double>(k) /
                                      static_cast<double>(steps - 1);
    }
    const GridPtr grid = config.make_grid();
    const ScanReport report = scan_spectrum(config.params(), grid, lambdas, config.solver());

    write_report(config, "scan.json", to_json(report));
    write_text_file(out_path(config, "scan.csv").string(), scan_to_csv(report));
    write_text_file(out_path(config, "scan.svg").string(), scan_to_svg(report));
    for (const auto& row : report.rows) {
        if (!row.converged) return 2;
    }
    return 0;
}

int cmd_check(const RunConfig& config, const std::string& input_csv) {
    const GridPtr grid = config.make_grid();
    std::ifstream in(input_csv);
    if (!in) {
        std::cerr << "check: cannot open '" << input_csv << "'\n";
        return 1;
    }
    const GridFunction u = function_from_csv(in, grid);
    const Params prm = config.params();
    const QuadratureSpec spec = config.quadrature();

    const GridFunction extended = extend_exterior(u, prm, spec);
    const GridFunction res_input = neumann_residual(u, prm, spec);
    const GridFunction res_extended = neumann_residual(extended, prm, spec);
    double rmax_input = 0.0, rmax_extended = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        rmax_input = std::max(rmax_input, std::abs(res_input[i]));
        rmax_extended = std::max(rmax_extended, std::abs(res_extended[i]));
    }
    const LinfReport linf = linf_report(extended);
    const DeGiorgiReport dg = degiorgi_sequence(extended, prm.rhs_m(), 40, spec);

    const bool extension_ok = rmax_extended <= 1e-10;
    const bool pass = extension_ok && linf.bound_ok && linf.exterior_dominated && dg.monotone;

    nlohmann::ordered_json result;
    result["neumann_residual_input"] = rmax_input;
    result["neumann_residual_extended"] = rmax_extended;
    result["extension_ok"] = extension_ok;
    result["linf"] = to_json(linf);
    result["degiorgi"] = to_json(dg);
    result["pass"] = pass;
    write_report(config, "check.json", std::move(result));
    write_text_file(out_path(config, "degiorgi.csv").string(), degiorgi_to_csv(dg));
    write_text_file(out_path(config, "u_extended.csv").string(), function_to_csv(extended));
    return pass ? 0 : 2;
}

int cmd_oracle(const RunConfig& config) {
    const GridPtr grid = config.make_grid();
    nlohmann::ordered_json result;

    if (config.oracle_mode == "dense" || config.oracle_mode == "both") {
        const Params prm = config.params().effective();
        if (prm.q != 2.0) {
            std::cerr << "oracle: the dense pencil needs q = 2 (effective)\n";
            return 1;
        }
        auto pairs = dense_eigensolve_q2(prm.s2, grid, config.quadrature());
        auto eigs = nlohmann::ordered_json::array();
        const std::size_t count = std::min<std::size_t>(pairs.size(), 10);
        for (std::size_t k = 0; k < count; ++k) eigs.push_back(pairs[k].first);
        result["dense"] = {{"eigenvalues", eigs},
                           {"lambda1", pairs.size() > 1 ? pairs[1].first : 0.0}};
    }
    if (config.oracle_mode == "bruteforce" || config.oracle_mode == "both") {
        SolveResult brute(grid);
        if (config.lambda > 0.0) {
            brute = multistart_bruteforce(config.params(), grid, config.oracle_starts,
                                          config.solver());
        } else {
            const Params prm = config.params().effective();
            brute = bruteforce_lambda1(prm.s2, prm.q, grid, config.oracle_starts,
                                       config.solver());
        }
        result["bruteforce"] = to_json(brute);
    }
    result["grid"] = grid_to_json(*grid);
    write_report(config, "oracle.json", std::move(result));
    return 0;
}

} // namespace pqspec
