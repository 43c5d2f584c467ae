#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pqspec {

enum class Region : std::uint8_t { Interior, Boundary, Exterior };

/// 1-D mesh of the domain (a,b) plus a truncated exterior collar of width L
/// on each side. Interior cells have uniform spacing h = (b-a)/n_int, each
/// collar side has n_ext uniform cells of spacing L/n_ext. Nodal values on
/// this mesh are interpreted as a piecewise-linear function on [a-L, b+L];
/// interactions beyond the collar are dropped.
class Grid {
public:
    Grid(double a, double b, std::size_t n_int, double collar_width, std::size_t n_ext);

    double a() const { return a_; }
    double b() const { return b_; }
    double collar_width() const { return collar_width_; }
    std::size_t n_int() const { return n_int_; }
    std::size_t n_ext() const { return n_ext_; }

    double h_int() const { return (b_ - a_) / static_cast<double>(n_int_); }
    double h_ext() const { return collar_width_ / static_cast<double>(n_ext_); }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t cell_count() const { return nodes_.size() - 1; }

    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    Region region(std::size_t i) const { return regions_[i]; }

    /// Cell i spans [node(i), node(i+1)]. A cell is interior iff it lies
    /// inside [a, b]; cells never straddle a or b.
    bool cell_is_interior(std::size_t cell) const {
        return cell >= n_ext_ && cell < n_ext_ + n_int_;
    }
    /// Node index of the left endpoint of the first interior cell.
    std::size_t first_interior_cell() const { return n_ext_; }
    std::size_t interior_cell_count() const { return n_int_; }

    double cell_left(std::size_t cell) const { return nodes_[cell]; }
    double cell_right(std::size_t cell) const { return nodes_[cell + 1]; }
    double cell_width(std::size_t cell) const { return nodes_[cell + 1] - nodes_[cell]; }

    /// Structural identity; node coordinates are a function of these five
    /// numbers, so equality of them is equality of grids.
    bool same_mesh(const Grid& other) const {
        return a_ == other.a_ && b_ == other.b_ && n_int_ == other.n_int_ &&
               collar_width_ == other.collar_width_ && n_ext_ == other.n_ext_;
    }

private:
    double a_;
    double b_;
    std::size_t n_int_;
    double collar_width_;
    std::size_t n_ext_;
    std::vector<double> nodes_;
    std::vector<Region> regions_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(double a, double b, std::size_t n_int, double collar_width, std::size_t n_ext);

enum class PairKind : std::uint8_t { Identical, SharingNode, Disjoint };

/// Unordered cell pair contributing to the interaction region: at least one
/// of the two cells is interior (exterior-exterior pairs are excluded).
struct CellPair {
    std::uint32_t cell_a; // cell_a <= cell_b
    std::uint32_t cell_b;
    PairKind kind;
    bool in_interaction_region; // true for every emitted pair

    static CellPair make(std::uint32_t a, std::uint32_t b, bool a_interior, bool b_interior);
};

/// Every unordered cell pair (with repetition) that meets the interaction
/// region, in lexicographic (a, b) order.
std::vector<CellPair> cell_pairs(const Grid& grid);

std::string to_string(Region r);
std::string to_string(PairKind k);

} // namespace pqspec
