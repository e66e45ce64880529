#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace qcat;
using testutil::max_diff;

TEST_CASE("kron matches the hand-expanded index formula") {
    Matrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    Matrix expected(4, 4);
    expected << 0, 0, 1, 0,
                0, 0, 0, -1,
                1, 0, 0, 0,
                0, -1, 0, 0;
    CHECK(max_diff(kron(x, z), expected) == 0.0);

    // Generic shape and entry check against the definition.
    std::mt19937_64 rng(7);
    Matrix a = testutil::random_matrix(2, rng), b = testutil::random_matrix(3, rng);
    Matrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j)
            CHECK(std::abs(k(i, j) - a(i / 3, j / 3) * b(i % 3, j % 3)) < 1e-15);
}

TEST_CASE("kron refuses dimensions beyond the dense cap") {
    Matrix big = Matrix::Identity(300, 300);
    CHECK_THROWS_AS(kron(big, big), too_large_error);
}

TEST_CASE("rank_and_nullspace on a rank-deficient matrix") {
    Matrix m(2, 2);
    m << 1, 1, 1, 1;
    auto r = rank_and_nullspace(m);
    CHECK(r.rank == 1);
    REQUIRE(r.nullspace.dim() == 1);
    CHECK((m * r.nullspace.basis).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(11);
    Matrix thin = testutil::random_matrix(6, rng).leftCols(3);
    Matrix lowrank = thin * thin.adjoint();  // rank 3 in C^6
    auto rr = rank_and_nullspace(lowrank);
    CHECK(rr.rank == 3);
    CHECK(rr.nullspace.dim() == 3);
    CHECK((lowrank * rr.nullspace.basis).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_diff(rr.nullspace.basis.adjoint() * rr.nullspace.basis,
                   Matrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("orthonormal_columns spans duplicated input") {
    Matrix cols(3, 3);
    cols.col(0) = Vector::Unit(3, 0);
    cols.col(1) = Vector::Unit(3, 0) * 2.0;
    cols.col(2) = Vector::Unit(3, 1);
    Matrix q = orthonormal_columns(cols);
    CHECK(q.cols() == 2);
    CHECK(max_diff(q.adjoint() * q, Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("subspace_intersection solves the two-plane example") {
    // u = span{e1+e2, e3}, v = span{e1-e2, e3} in C^4; intersection = span{e3}.
    const double r = 1.0 / std::sqrt(2.0);
    Subspace u, v;
    u.ambient_dim = v.ambient_dim = 4;
    u.basis = Matrix::Zero(4, 2);
    u.basis(0, 0) = r;
    u.basis(1, 0) = r;
    u.basis(2, 1) = 1.0;
    v.basis = Matrix::Zero(4, 2);
    v.basis(0, 0) = r;
    v.basis(1, 0) = -r;
    v.basis(2, 1) = 1.0;
    Subspace w = subspace_intersection(u, v);
    REQUIRE(w.dim() == 1);
    CHECK(std::abs(std::abs(w.basis(2, 0)) - 1.0) < 1e-12);
}

TEST_CASE("operator Schmidt rank distinguishes products") {
    std::mt19937_64 rng(3);
    Matrix b = testutil::random_matrix(2, rng), c = testutil::random_matrix(2, rng);
    CHECK(operator_schmidt_rank(kron(b, c), 2, 2) == 1);

    Matrix d = testutil::random_matrix(2, rng), e = testutil::random_matrix(2, rng);
    CHECK(operator_schmidt_rank(kron(b, c) + kron(d, e), 2, 2) == 2);

    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    CHECK(operator_schmidt_rank(swap, 2, 2) == 4);
}

TEST_CASE("realign inverts a known product") {
    std::mt19937_64 rng(5);
    Matrix b = testutil::random_matrix(2, rng), c = testutil::random_matrix(3, rng);
    Matrix r = realign(kron(b, c), 2, 3);
    // realign(B (x) C) = vec-like outer product of B and C entries: rank 1.
    CHECK(rank_and_nullspace(r).rank == 1);
    CHECK_THROWS_AS(realign(Matrix::Identity(5, 5), 2, 3), std::invalid_argument);
}

TEST_CASE("is_unitary") {
    CHECK(is_unitary(Matrix::Identity(3, 3)));
    CHECK_FALSE(is_unitary(2.0 * Matrix::Identity(3, 3)));
    std::mt19937_64 rng(9);
    CHECK(is_unitary(testutil::random_unitary(5, rng), 1e-12));
    CHECK(is_unitary(testutil::paper_scattering(), 1e-15));
}

TEST_CASE("vec/unvec are column-major and mutually inverse") {
    Matrix m(2, 2);
    m << 1, 3, 2, 4;
    Vector v = vec(m);
    CHECK(v(0) == Complex(1));
    CHECK(v(1) == Complex(2));
    CHECK(v(2) == Complex(3));
    CHECK(v(3) == Complex(4));
    CHECK(max_diff(unvec(v, 2, 2), m) == 0.0);
}

TEST_CASE("partial_trace_slot reduces a Kronecker product") {
    std::mt19937_64 rng(13);
    Matrix a = testutil::random_matrix(2, rng), b = testutil::random_matrix(3, rng);
    Matrix ab = kron(a, b);
    CHECK(max_diff(partial_trace_slot(ab, {2, 3}, 0), a.trace() * b) < 1e-12);
    CHECK(max_diff(partial_trace_slot(ab, {2, 3}, 1), b.trace() * a) < 1e-12);
    CHECK_THROWS_AS(partial_trace_slot(ab, {2, 3}, 2), std::invalid_argument);
}

TEST_CASE("permute_slots swaps Kronecker factors") {
    std::mt19937_64 rng(17);
    Matrix a = testutil::random_matrix(2, rng), b = testutil::random_matrix(3, rng);
    CHECK(max_diff(permute_slots(kron(a, b), {2, 3}, {1, 0}), kron(b, a)) < 1e-12);

    Matrix c = testutil::random_matrix(2, rng);
    // order[t] = old slot at new position t; rotate (a,b,c) -> (c,a,b).
    Matrix abc = kron(kron(a, b), c);
    CHECK(max_diff(permute_slots(abc, {2, 3, 2}, {2, 0, 1}), kron(kron(c, a), b)) < 1e-12);
}

TEST_CASE("gram and psd nullspaces agree with the SVD route") {
    Matrix k(4, 3);
    k.setZero();
    k.col(0) = Vector::Unit(4, 0);
    k.col(1) = Vector::Unit(4, 0);  // duplicate column
    k.col(2) = Vector::Unit(4, 1);
    Matrix n1 = gram_nullspace(k);
    REQUIRE(n1.cols() == 1);
    CHECK((k * n1).cwiseAbs().maxCoeff() < 1e-9);
    Matrix n2 = psd_nullspace(Matrix(k.adjoint() * k));
    CHECK(n2.cols() == 1);
    auto svd = rank_and_nullspace(k);
    CHECK(svd.nullspace.dim() == 1);
}

TEST_CASE("psd_nullspace verdict is stable across tolerances") {
    Matrix k(4, 3);
    k.setZero();
    k.col(0) = Vector::Unit(4, 0);
    k.col(1) = Vector::Unit(4, 0) + 1e-14 * Vector::Unit(4, 2);
    k.col(2) = Vector::Unit(4, 1);
    Matrix gram = k.adjoint() * k;
    for (double tol : {1e-6, 1e-9, 1e-12})
        CHECK(psd_nullspace(gram, tol).cols() == 1);
}

TEST_CASE("closest_unitary is a projection onto the unitary group") {
    std::mt19937_64 rng(23);
    Matrix u = testutil::random_unitary(4, rng);
    CHECK(max_diff(closest_unitary(u), u) < 1e-12);
    Matrix perturbed = u + 1e-3 * testutil::random_matrix(4, rng);
    Matrix snapped = closest_unitary(perturbed);
    CHECK(is_unitary(snapped, 1e-12));
    CHECK(max_diff(snapped, u) < 1e-2);
}
