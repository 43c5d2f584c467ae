#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "pqspec/eigensolver.hpp"
#include "pqspec/energy.hpp"
#include "pqspec/exterior.hpp"
#include "pqspec/grid.hpp"

namespace pqspec {

// JSON. Grids serialize as the five defining numbers; coordinates are
// recomputed on load, never stored.
nlohmann::ordered_json grid_to_json(const Grid& grid);
GridPtr grid_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const EnergyBreakdown& b);
nlohmann::ordered_json to_json(const SolveResult& r);
nlohmann::ordered_json to_json(const ScanReport& r);
nlohmann::ordered_json to_json(const LinfReport& r);
nlohmann::ordered_json to_json(const DeGiorgiReport& r);

/// 17-significant-digit decimal, the shortest form that round-trips doubles.
std::string format_g17(double v);

// CSV emission; all numbers via format_g17 so files parse back bit-exactly.
std::string function_to_csv(const GridFunction& u); // header "x,u"
std::string scan_to_csv(const ScanReport& r);       // "lambda,classification,residual,f_min"
std::string degiorgi_to_csv(const DeGiorgiReport& r); // "n,C_n,U_n"

/// Parses an "x,u" CSV against the given grid; throws ParameterError on a
/// node-count or coordinate mismatch.
GridFunction function_from_csv(std::istream& in, GridPtr grid);

// Plain polyline SVG plots, no dependencies.
std::string function_to_svg(const GridFunction& u);
std::string scan_to_svg(const ScanReport& r);

void write_text_file(const std::string& path, const std::string& content);

} // namespace pqspec
