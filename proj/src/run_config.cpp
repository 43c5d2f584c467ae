#include "pqspec/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "pqspec/errors.hpp"

namespace pqspec {

namespace {

const std::set<std::string> kKnownKeys = {
    "s1",     "s2",        "p",           "q",          "lambda",       "rhs_exp",
    "a",      "b",         "n_int",       "L",          "n_ext",        "panels",
    "gauss_points",        "tol",         "max_iter",   "restarts",     "rng_seed",
    "step0",  "armijo_factor",            "armijo_c",   "oracle_mode",  "oracle_starts",
    "output_dir"};

double need_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ParameterError(std::string("config: missing or non-numeric key '") + key + "'");
    }
    return j.at(key).get<double>();
}

std::size_t count_or(const nlohmann::json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<std::size_t>(v.get<long long>());
    }
    throw ParameterError(std::string("config: '") + key + "' must be a nonnegative integer");
}

} // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParameterError("config: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kKnownKeys.contains(it.key())) {
            throw ParameterError("config: unknown key '" + it.key() + "'");
        }
    }
    RunConfig c;
    c.s1 = need_number(j, "s1");
    c.s2 = need_number(j, "s2");
    c.p = need_number(j, "p");
    c.q = need_number(j, "q");
    c.lambda = j.value("lambda", 0.0);
    if (j.contains("rhs_exp")) {
        const std::string rhs = j.at("rhs_exp").get<std::string>();
        if (rhs == "q") {
            c.rhs_exp = RhsExponent::Q;
        } else if (rhs == "p") {
            c.rhs_exp = RhsExponent::P;
        } else {
            throw ParameterError("config: rhs_exp must be \"q\" or \"p\"");
        }
    }
    c.a = j.value("a", 0.0);
    c.b = j.value("b", 1.0);
    c.n_int = count_or(j, "n_int", 64);
    c.collar_width = j.value("L", 0.0);
    c.n_ext = count_or(j, "n_ext", 0);
    c.panels = count_or(j, "panels", 12);
    c.gauss_points = count_or(j, "gauss_points", 5);
    c.solver_options.tol = j.value("tol", 1e-8);
    c.solver_options.max_iter = count_or(j, "max_iter", 50000);
    c.solver_options.restarts = count_or(j, "restarts", 8);
    c.solver_options.rng_seed = count_or(j, "rng_seed", 0);
    c.solver_options.step0 = j.value("step0", 1.0);
    c.solver_options.armijo_factor = j.value("armijo_factor", 0.5);
    c.solver_options.armijo_c = j.value("armijo_c", 1e-4);
    c.oracle_mode = j.value("oracle_mode", std::string("dense"));
    if (c.oracle_mode != "dense" && c.oracle_mode != "bruteforce" && c.oracle_mode != "both") {
        throw ParameterError("config: oracle_mode must be dense, bruteforce or both");
    }
    c.oracle_starts = count_or(j, "oracle_starts", 64);
    c.output_dir = j.value("output_dir", std::string("."));

    // Fail fast on inconsistent values.
    c.params();
    c.make_grid();
    c.solver().validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config: JSON parse error: ") + e.what());
    }
    return from_json(j);
}

std::size_t RunConfig::effective_n_ext() const {
    if (n_ext > 0) return n_ext;
    // Collar cells at the interior spacing.
    const double h = (b - a) / static_cast<double>(n_int);
    const double count = effective_collar() / h;
    return static_cast<std::size_t>(std::llround(std::max(1.0, count)));
}

Params RunConfig::params() const { return Params(s1, s2, p, q, lambda, rhs_exp); }

GridPtr RunConfig::make_grid() const {
    return build_grid(a, b, n_int, effective_collar(), effective_n_ext());
}

QuadratureSpec RunConfig::quadrature() const {
    QuadratureSpec spec;
    spec.panels = panels;
    spec.gauss_points = gauss_points;
    spec.validate();
    return spec;
}

SolverOptions RunConfig::solver() const {
    SolverOptions opts = solver_options;
    opts.quadrature = quadrature();
    return opts;
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["s1"] = s1;
    j["s2"] = s2;
    j["p"] = p;
    j["q"] = q;
    j["lambda"] = lambda;
    j["rhs_exp"] = rhs_exp == RhsExponent::Q ? "q" : "p";
    j["a"] = a;
    j["b"] = b;
    j["n_int"] = n_int;
    j["L"] = effective_collar();
    j["n_ext"] = effective_n_ext();
    j["panels"] = panels;
    j["gauss_points"] = gauss_points;
    j["tol"] = solver_options.tol;
    j["max_iter"] = solver_options.max_iter;
    j["restarts"] = solver_options.restarts;
    j["rng_seed"] = solver_options.rng_seed;
    j["step0"] = solver_options.step0;
    j["armijo_factor"] = solver_options.armijo_factor;
    j["armijo_c"] = solver_options.armijo_c;
    j["oracle_mode"] = oracle_mode;
    j["oracle_starts"] = oracle_starts;
    j["output_dir"] = output_dir;
    return j;
}

} // namespace pqspec
