#include <CLI11.hpp>
#include <iostream>

#include "pqspec/cli.hpp"
#include "pqspec/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fractional (p,q)-Laplacian Neumann eigenvalue solver"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration")->required();

    auto* lambda1 = app.add_subcommand("lambda1", "first nonzero eigenvalue of the q-problem");

    double lambda = 0.0;
    auto* solve = app.add_subcommand("solve", "eigenfunction search at fixed lambda");
    solve->add_option("--lambda", lambda, "eigenvalue parameter (>= 0)")->required();

    double lambda_min = 0.0, lambda_max = 0.0;
    std::size_t steps = 0;
    auto* scan = app.add_subcommand("scan", "classify a range of lambdas");
    scan->add_option("--min", lambda_min, "smallest lambda (> 0)")->required();
    scan->add_option("--max", lambda_max, "largest lambda")->required();
    scan->add_option("--steps", steps, "number of lambdas (>= 2)")->required();

    std::string input_csv;
    auto* check = app.add_subcommand("check", "verify a nodal CSV");
    check->add_option("--input", input_csv, "CSV of nodal values (header x,u)")->required();

    auto* oracle = app.add_subcommand("oracle", "dense / brute-force references");

    CLI11_PARSE(app, argc, argv);

    try {
        const pqspec::RunConfig config = pqspec::RunConfig::from_file(config_path);
        if (lambda1->parsed()) return pqspec::cmd_lambda1(config);
        if (solve->parsed()) return pqspec::cmd_solve(config, lambda);
        if (scan->parsed()) return pqspec::cmd_scan(config, lambda_min, lambda_max, steps);
        if (check->parsed()) return pqspec::cmd_check(config, input_csv);
        if (oracle->parsed()) return pqspec::cmd_oracle(config);
    } catch (const pqspec::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
