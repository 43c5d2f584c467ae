#include <doctest.h>

#include <limits>

#include "pqspec/errors.hpp"
#include "pqspec/grid.hpp"

using namespace pqspec;

TEST_SUITE_BEGIN("grid");

TEST_CASE("constructor arithmetic") {
    auto g = build_grid(0.0, 1.0, 4, 2.0, 4);
    CHECK(g->cell_count() == 12);
    CHECK(g->node_count() == 13);
    CHECK(g->node(0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(g->node(12) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(g->h_int() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g->h_ext() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("smallest legal grid with region tags") {
    auto g = build_grid(0.0, 1.0, 2, 1.0, 1);
    REQUIRE(g->node_count() == 5);
    const double expected[5] = {-1.0, 0.0, 0.5, 1.0, 2.0};
    const Region tags[5] = {Region::Exterior, Region::Boundary, Region::Interior,
                            Region::Boundary, Region::Exterior};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(g->node(i) == doctest::Approx(expected[i]).epsilon(1e-15));
        CHECK(g->region(i) == tags[i]);
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(build_grid(1.0, 0.0, 4, 1.0, 2), ParameterError);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, -1.0, 2), ParameterError);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 1, 1.0, 2), ParameterError);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, 1.0, 0), ParameterError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(build_grid(0.0, nan, 4, 1.0, 2), ParameterError);
}

TEST_CASE("nodes strictly increasing, uniform per segment") {
    auto g = build_grid(-0.5, 2.0, 7, 1.25, 3);
    for (std::size_t i = 0; i + 1 < g->node_count(); ++i) {
        CHECK(g->node(i) < g->node(i + 1));
    }
    for (std::size_t c = g->first_interior_cell();
         c < g->first_interior_cell() + g->interior_cell_count(); ++c) {
        CHECK(g->cell_width(c) == doctest::Approx(g->h_int()).epsilon(1e-13));
    }
    for (std::size_t c = 0; c < g->first_interior_cell(); ++c) {
        CHECK(g->cell_width(c) == doctest::Approx(g->h_ext()).epsilon(1e-13));
    }
}

TEST_CASE("cell pairs on the four-cell grid") {
    auto g = build_grid(0.0, 1.0, 2, 1.0, 1);
    auto pairs = cell_pairs(*g);
    // Cells {e, i, i, e}: 10 unordered pairs with repetition minus (e,e) x3.
    CHECK(pairs.size() == 7);
    for (const auto& cp : pairs) {
        CHECK((g->cell_is_interior(cp.cell_a) || g->cell_is_interior(cp.cell_b)));
        CHECK(cp.in_interaction_region);
        if (cp.cell_a == cp.cell_b) CHECK(cp.kind == PairKind::Identical);
        if (cp.cell_b == cp.cell_a + 1) CHECK(cp.kind == PairKind::SharingNode);
        if (cp.cell_b > cp.cell_a + 1) CHECK(cp.kind == PairKind::Disjoint);
    }
}

TEST_CASE("excluded pair count over assorted grids") {
    const std::size_t cases[][2] = {{2, 1}, {3, 2}, {5, 4}, {8, 3}, {16, 16}};
    for (const auto& c : cases) {
        auto g = build_grid(0.0, 1.0, c[0], 1.5, c[1]);
        const std::size_t nc = g->cell_count();
        const std::size_t ne = nc - g->interior_cell_count();
        const std::size_t total = nc * (nc + 1) / 2;
        const std::size_t excluded = ne * (ne + 1) / 2;
        CHECK(cell_pairs(*g).size() == total - excluded);
    }
}

TEST_SUITE_END();
