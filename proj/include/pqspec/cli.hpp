#pragma once

#include <string>

#include "pqspec/run_config.hpp"

namespace pqspec {

// Exit codes: 0 classified result, 1 usage or input error, 2 numerical
// non-convergence. Each command writes its artifacts into
// config.output_dir.

/// Computes lambda1(s2, q); writes result.json, u1.csv and u1.svg.
int cmd_lambda1(const RunConfig& config);

/// Eigenfunction search at the given lambda; writes result.json, u.csv and
/// u.svg. lambda == 0 emits the constant eigenpair directly.
int cmd_solve(const RunConfig& config, double lambda);

/// Scans [lambda_min, lambda_max] in `steps` equispaced values; writes
/// scan.csv, scan.json and scan.svg.
int cmd_scan(const RunConfig& config, double lambda_min, double lambda_max,
             std::size_t steps);

/// Verifies a nodal CSV: Neumann extension, pointwise residuals, sup bounds
/// and the truncation diagnostics; writes check.json and degiorgi.csv.
int cmd_check(const RunConfig& config, const std::string& input_csv);

/// Runs the dense q = 2 pencil and/or the brute-force minimizer per
/// config.oracle_mode; writes oracle.json.
int cmd_oracle(const RunConfig& config);

} // namespace pqspec
