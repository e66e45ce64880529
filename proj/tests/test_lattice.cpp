#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace qcat;
using testutil::max_diff;

TEST_CASE("CellStructure validates subcell dimensions") {
    CHECK(CellStructure({2, 3}).cell_dim() == 6);
    CHECK(CellStructure({2, 2}).subcell_count() == 2);
    CHECK_THROWS_AS(CellStructure(std::vector<Index>{}), std::invalid_argument);
    CHECK_THROWS_AS(CellStructure({2, 1}), std::invalid_argument);
}

TEST_CASE("Lattice wrapping and relative offsets") {
    Lattice lat(6, CellStructure({2}));
    CHECK(lat.wrap_cell(-1) == 5);
    CHECK(lat.wrap_cell(7) == 1);
    CHECK(lat.relative_offset(5, 0) == -1);
    CHECK(lat.relative_offset(0, 5) == 1);
    // Offsets fold into (-N/2, N/2]; the antipode keeps the + sign.
    CHECK(lat.relative_offset(3, 0) == 3);
    CHECK(lat.relative_offset(0, 3) == 3);

    Lattice odd(5, CellStructure({2}));
    CHECK(odd.relative_offset(4, 0) == -1);
    CHECK(odd.relative_offset(0, 4) == 1);
    CHECK(odd.relative_offset(2, 0) == 2);
    CHECK(odd.relative_offset(3, 0) == -2);

    CHECK_THROWS_AS(Lattice(1, CellStructure({2})), std::invalid_argument);
}

TEST_CASE("Window sorts, rejects duplicates, and indexes sites") {
    Window w({Site{1, 2}, Site{0, 2}, Site{1, 1}});
    REQUIRE(w.size() == 3);
    CHECK(w.sites()[0] == Site{0, 2});
    CHECK(w.sites()[1] == Site{1, 1});
    CHECK(w.sites()[2] == Site{1, 2});
    CHECK(w.position(Site{1, 1}) == 1);
    CHECK(w.contains(Site{0, 2}));
    CHECK_FALSE(w.contains(Site{0, 1}));
    CHECK_THROWS_AS(w.position(Site{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Window({Site{0, 1}, Site{0, 1}}), std::invalid_argument);

    CellStructure cell({2, 3});
    CHECK(w.slot_dims(cell) == std::vector<Index>{3, 2, 3});
    CHECK(w.dimension(cell) == 18);
    CHECK(Window{}.dimension(cell) == 1);
}

TEST_CASE("translate wraps around the lattice") {
    Lattice lat(4, CellStructure({2, 2}));
    CHECK(translate(Site{0, 2}, -1, lat) == Site{3, 2});
    CHECK(translate(Site{3, 1}, 2, lat) == Site{1, 1});
}

TEST_CASE("window_union merges without duplicates") {
    Window a({Site{0, 1}, Site{1, 1}});
    Window b({Site{1, 1}, Site{2, 2}});
    Window u = window_union(a, b);
    CHECK(u.size() == 3);
    CHECK(u.contains(Site{2, 2}));
}

TEST_CASE("embed_operator places factors at the right slots") {
    CellStructure cell({2, 2});
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Window from({Site{1, 1}});
    Window into({Site{0, 2}, Site{1, 1}, Site{1, 2}});
    // Canonical order of `into` is (0,2),(1,1),(1,2), so X sits in the middle.
    Matrix id2 = Matrix::Identity(2, 2);
    CHECK(max_diff(embed_operator(x, from, into, cell), kron(kron(id2, x), id2)) == 0.0);
}

TEST_CASE("embed_operator on multi-site operators and error cases") {
    CellStructure cell({2, 2});
    std::mt19937_64 rng(29);
    Matrix op = testutil::random_matrix(4, rng);
    Window from({Site{0, 1}, Site{2, 2}});
    Window into({Site{0, 1}, Site{1, 1}, Site{2, 2}});
    // Slots of `into`: (0,1),(1,1),(2,2); op acts on slots 0 and 2, so
    // entry ((i0,i1,i2),(j0,j1,j2)) = op((i0,i2),(j0,j2)) * delta(i1,j1).
    Matrix embedded = embed_operator(op, from, into, cell);
    Matrix expected(8, 8);
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j) {
            const Index i0 = i >> 2, i1 = (i >> 1) & 1, i2 = i & 1;
            const Index j0 = j >> 2, j1 = (j >> 1) & 1, j2 = j & 1;
            expected(i, j) = i1 == j1 ? op(i0 * 2 + i2, j0 * 2 + j2) : Complex(0.0);
        }
    CHECK(max_diff(embedded, expected) < 1e-15);

    CHECK_THROWS_AS(embed_operator(op, from, Window({Site{0, 1}}), cell),
                    std::invalid_argument);
    CHECK_THROWS_AS(embed_operator(Matrix::Identity(3, 3), from, into, cell),
                    std::invalid_argument);
}

TEST_CASE("embedding from the empty window scales the identity") {
    CellStructure cell({2, 2});
    Matrix scalar(1, 1);
    scalar(0, 0) = Complex(0.0, 2.0);
    Window into({Site{0, 1}, Site{0, 2}});
    CHECK(max_diff(embed_operator(scalar, Window{}, into, cell),
                   Complex(0.0, 2.0) * Matrix::Identity(4, 4)) == 0.0);
}
