#pragma once

#include <stdexcept>
#include <string>

namespace pqspec {

/// Invalid or inconsistent user-supplied parameters (bad grid sizes,
/// mismatched grids, exponents out of range).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter combinations the solver deliberately rejects (p == q).
class UnsupportedParametersError : public ParameterError {
public:
    explicit UnsupportedParametersError(const std::string& what) : ParameterError(what) {}
};

/// Input that makes the requested operation meaningless (constant function
/// where a non-constant one is required, zero mass before normalization).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Direction that cannot be scaled onto the Nehari manifold: the
/// denominator lambda*mass - [u]^q is not positive.
class InfeasibleDirectionError : public std::runtime_error {
public:
    explicit InfeasibleDirectionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pqspec
