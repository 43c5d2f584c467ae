#include "pqspec/grid.hpp"

#include <cmath>
#include <sstream>

#include "pqspec/errors.hpp"

namespace pqspec {

Grid::Grid(double a, double b, std::size_t n_int, double collar_width, std::size_t n_ext)
    : a_(a), b_(b), n_int_(n_int), collar_width_(collar_width), n_ext_(n_ext) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(collar_width)) {
        throw ParameterError("grid: endpoints and collar width must be finite");
    }
    if (!(a < b)) {
        throw ParameterError("grid: requires a < b");
    }
    if (!(collar_width > 0.0)) {
        throw ParameterError("grid: collar width must be positive");
    }
    if (n_int < 2) {
        throw ParameterError("grid: need at least 2 interior cells");
    }
    if (n_ext < 1) {
        throw ParameterError("grid: need at least 1 exterior cell per side");
    }

    const double hi = (b - a) / static_cast<double>(n_int);
    const double he = collar_width / static_cast<double>(n_ext);

    nodes_.reserve(n_int + 2 * n_ext + 1);
    regions_.reserve(n_int + 2 * n_ext + 1);

    // Left collar: a - L, ..., a - he. Built from a outward so the node at a
    // is exact and spacing is uniform to round-off.
    for (std::size_t i = 0; i < n_ext; ++i) {
        const double x = a - static_cast<double>(n_ext - i) * he;
        nodes_.push_back(x);
        regions_.push_back(Region::Exterior);
    }
    nodes_.push_back(a);
    regions_.push_back(Region::Boundary);
    for (std::size_t i = 1; i < n_int; ++i) {
        nodes_.push_back(a + static_cast<double>(i) * hi);
        regions_.push_back(Region::Interior);
    }
    nodes_.push_back(b);
    regions_.push_back(Region::Boundary);
    for (std::size_t i = 1; i <= n_ext; ++i) {
        nodes_.push_back(b + static_cast<double>(i) * he);
        regions_.push_back(Region::Exterior);
    }
}

GridPtr build_grid(double a, double b, std::size_t n_int, double collar_width, std::size_t n_ext) {
    return std::make_shared<const Grid>(a, b, n_int, collar_width, n_ext);
}

CellPair CellPair::make(std::uint32_t a, std::uint32_t b, bool a_interior, bool b_interior) {
    CellPair p;
    p.cell_a = a;
    p.cell_b = b;
    if (a == b) {
        p.kind = PairKind::Identical;
    } else if (b == a + 1) {
        p.kind = PairKind::SharingNode;
    } else {
        p.kind = PairKind::Disjoint;
    }
    p.in_interaction_region = a_interior || b_interior;
    return p;
}

std::vector<CellPair> cell_pairs(const Grid& grid) {
    const std::size_t nc = grid.cell_count();
    std::vector<CellPair> pairs;
    // Unordered pairs with repetition, minus the exterior-exterior block.
    const std::size_t n_ext_cells = nc - grid.interior_cell_count();
    pairs.reserve(nc * (nc + 1) / 2 - n_ext_cells * (n_ext_cells + 1) / 2);
    for (std::size_t i = 0; i < nc; ++i) {
        const bool ii = grid.cell_is_interior(i);
        for (std::size_t j = i; j < nc; ++j) {
            const bool jj = grid.cell_is_interior(j);
            if (!ii && !jj) continue;
            pairs.push_back(CellPair::make(static_cast<std::uint32_t>(i),
                                           static_cast<std::uint32_t>(j), ii, jj));
        }
    }
    return pairs;
}

std::string to_string(Region r) {
    switch (r) {
        case Region::Interior: return "interior";
        case Region::Boundary: return "boundary";
        case Region::Exterior: return "exterior";
    }
    return "?";
}

std::string to_string(PairKind k) {
    switch (k) {
        case PairKind::Identical: return "identical";
        case PairKind::SharingNode: return "sharing-a-node";
        case PairKind::Disjoint: return "disjoint";
    }
    return "?";
}

} // namespace pqspec
