#include "pqspec/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "pqspec/errors.hpp"

namespace pqspec {

nlohmann::ordered_json grid_to_json(const Grid& grid) {
    nlohmann::ordered_json j;
    j["a"] = grid.a();
    j["b"] = grid.b();
    j["n_int"] = grid.n_int();
    j["L"] = grid.collar_width();
    j["n_ext"] = grid.n_ext();
    return j;
}

GridPtr grid_from_json(const nlohmann::json& j) {
    return build_grid(j.at("a").get<double>(), j.at("b").get<double>(),
                      j.at("n_int").get<std::size_t>(), j.at("L").get<double>(),
                      j.at("n_ext").get<std::size_t>());
}

nlohmann::ordered_json to_json(const EnergyBreakdown& b) {
    nlohmann::ordered_json j;
    j["semi_p"] = b.semi_p;
    j["semi_q"] = b.semi_q;
    j["mass_q"] = b.mass_q;
    j["f_lambda"] = b.f_lambda;
    return j;
}

nlohmann::ordered_json to_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    j["lambda"] = r.lambda;
    j["classification"] = to_string(r.classification);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["residual_inf"] = r.residual_inf;
    j["energies"] = to_json(r.energies);
    if (r.nehari_min) {
        j["nehari_min"] = *r.nehari_min;
    } else {
        j["nehari_min"] = nullptr;
    }
    if (r.regime) {
        j["regime"] = {{"tag", to_string(r.regime->tag)},
                       {"branch", to_string(r.regime->branch)}};
    } else {
        j["regime"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json to_json(const ScanReport& r) {
    nlohmann::ordered_json j;
    j["lambda1_h"] = r.lambda1_h;
    j["largest_no_solution"] =
        r.largest_no_solution ? nlohmann::ordered_json(*r.largest_no_solution)
                              : nlohmann::ordered_json(nullptr);
    j["smallest_eigenpair"] = r.smallest_eigenpair
                                  ? nlohmann::ordered_json(*r.smallest_eigenpair)
                                  : nlohmann::ordered_json(nullptr);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json rj;
        rj["lambda"] = row.lambda;
        rj["classification"] = to_string(row.classification);
        rj["residual_inf"] = row.residual_inf;
        rj["f_min"] = row.f_min;
        rj["converged"] = row.converged;
        rows.push_back(rj);
    }
    j["rows"] = rows;
    return j;
}

nlohmann::ordered_json to_json(const LinfReport& r) {
    nlohmann::ordered_json j;
    j["sup_interior"] = r.sup_interior;
    j["sup_exterior"] = r.sup_exterior;
    j["global_sup"] = r.global_sup;
    j["bound_ok"] = r.bound_ok;
    j["exterior_dominated"] = r.exterior_dominated;
    return j;
}

nlohmann::ordered_json to_json(const DeGiorgiReport& r) {
    nlohmann::ordered_json j;
    j["levels"] = r.levels;
    j["masses"] = r.masses;
    j["limit"] = r.limit;
    j["limit_gap"] = r.limit_gap;
    j["monotone"] = r.monotone;
    return j;
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string function_to_csv(const GridFunction& u) {
    std::string out = "x,u\n";
    const Grid& grid = u.grid();
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_g17(grid.node(i));
        out += ',';
        out += format_g17(u[i]);
        out += '\n';
    }
    return out;
}

std::string scan_to_csv(const ScanReport& r) {
    std::string out = "lambda,classification,residual,f_min\n";
    for (const auto& row : r.rows) {
        out += format_g17(row.lambda);
        out += ',';
        out += to_string(row.classification);
        out += ',';
        out += format_g17(row.residual_inf);
        out += ',';
        out += format_g17(row.f_min);
        out += '\n';
    }
    return out;
}

std::string degiorgi_to_csv(const DeGiorgiReport& r) {
    std::string out = "n,C_n,U_n\n";
    for (std::size_t n = 0; n < r.levels.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += format_g17(r.levels[n]);
        out += ',';
        out += format_g17(r.masses[n]);
        out += '\n';
    }
    return out;
}

GridFunction function_from_csv(std::istream& in, GridPtr grid) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,u", 0) != 0) {
        throw ParameterError("csv: expected header 'x,u'");
    }
    std::vector<double> xs, us;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParameterError("csv: malformed row");
        xs.push_back(std::stod(line.substr(0, comma)));
        us.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() != grid->node_count()) {
        throw ParameterError("csv: node count does not match the configured grid");
    }
    const double span = grid->node(grid->node_count() - 1) - grid->node(0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - grid->node(i)) > 1e-9 * span) {
            throw ParameterError("csv: node coordinates do not match the configured grid");
        }
    }
    return GridFunction(std::move(grid), std::move(us));
}

namespace {

struct SvgFrame {
    double x_lo, x_hi, y_lo, y_hi;
    static constexpr double width = 640.0, height = 400.0, margin = 50.0;

    double px(double x) const {
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
    }
    double py(double y) const {
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
    }
};

void svg_header(std::ostringstream& s) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n"
      << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
}

void svg_axes(std::ostringstream& s, const SvgFrame& f, const std::string& xlabel,
              const std::string& ylabel) {
    s << "<line x1=\"" << f.px(f.x_lo) << "\" y1=\"" << f.py(f.y_lo) << "\" x2=\""
      << f.px(f.x_hi) << "\" y2=\"" << f.py(f.y_lo) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << f.px(f.x_lo) << "\" y1=\"" << f.py(f.y_lo) << "\" x2=\""
      << f.px(f.x_lo) << "\" y2=\"" << f.py(f.y_hi) << "\" stroke=\"black\"/>\n"
      << "<text x=\"320\" y=\"392\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
      << "</text>\n"
      << "<text x=\"14\" y=\"200\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 14 200)\">"
      << ylabel << "</text>\n";
}

} // namespace

std::string function_to_svg(const GridFunction& u) {
    const Grid& grid = u.grid();
    double ylo = u[0], yhi = u[0];
    for (double v : u.values()) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
    }
    if (yhi - ylo < 1e-12) {
        yhi += 1.0;
        ylo -= 1.0;
    }
    const double pad = 0.05 * (yhi - ylo);
    SvgFrame f{grid.node(0), grid.node(grid.node_count() - 1), ylo - pad, yhi + pad};

    std::ostringstream s;
    svg_header(s);
    svg_axes(s, f, "x", "u");
    // Domain boundary markers.
    for (double xb : {grid.a(), grid.b()}) {
        s << "<line x1=\"" << f.px(xb) << "\" y1=\"" << f.py(f.y_lo) << "\" x2=\"" << f.px(xb)
          << "\" y2=\"" << f.py(f.y_hi) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < u.size(); ++i) {
        s << f.px(grid.node(i)) << ',' << f.py(u[i]) << ' ';
    }
    s << "\"/>\n</svg>\n";
    return s.str();
}

std::string scan_to_svg(const ScanReport& r) {
    double xlo = r.lambda1_h, xhi = r.lambda1_h;
    for (const auto& row : r.rows) {
        xlo = std::min(xlo, row.lambda);
        xhi = std::max(xhi, row.lambda);
    }
    if (xhi - xlo < 1e-12) {
        xhi += 1.0;
        xlo = std::max(0.0, xlo - 1.0);
    }
    const double pad = 0.05 * (xhi - xlo);
    SvgFrame f{xlo - pad, xhi + pad, -0.15, 1.15};

    std::ostringstream s;
    svg_header(s);
    svg_axes(s, f, "lambda", "eigenpair found");
    s << "<line x1=\"" << f.px(r.lambda1_h) << "\" y1=\"" << f.py(f.y_lo) << "\" x2=\""
      << f.px(r.lambda1_h) << "\" y2=\"" << f.py(f.y_hi)
      << "\" stroke=\"crimson\" stroke-dasharray=\"5 3\"/>\n"
      << "<text x=\"" << f.px(r.lambda1_h) + 4 << "\" y=\"" << f.py(f.y_hi) + 14
      << "\" font-size=\"12\" fill=\"crimson\">lambda1_h</text>\n";
    for (const auto& row : r.rows) {
        const double y = row.classification == Classification::Eigenpair ? 1.0 : 0.0;
        const char* color = row.classification == Classification::Eigenpair
                                ? "steelblue"
                                : "darkorange";
        s << "<circle cx=\"" << f.px(row.lambda) << "\" cy=\"" << f.py(y)
          << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open output file '" + path + "'");
    out << content;
}

} // namespace pqspec
