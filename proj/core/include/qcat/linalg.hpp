#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qcat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown when a requested dense object exceeds the configured size cap.
struct too_large_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest admissible side for any dense matrix produced here.
inline constexpr Index kMaxDenseDim = 1 << 16;

/// Default relative rank tolerance. Any value in [1e-12, 1e-6] gives the
/// same verdicts on the spectra this project produces (gaps of order 1).
inline constexpr double kRankTol = 1e-9;

/// A subspace of C^ambient_dim held as orthonormal basis columns.
struct Subspace {
    Index ambient_dim = 0;
    Matrix basis;  // ambient_dim x k, orthonormal columns
    double tol = kRankTol;

    Index dim() const { return basis.cols(); }
};

Matrix kron(const Matrix& a, const Matrix& b);

struct RankResult {
    Index rank = 0;
    Subspace nullspace;
};

/// Rank counts singular values above tol * (largest singular value);
/// the nullspace spans the remaining right-singular directions.
RankResult rank_and_nullspace(const Matrix& m, double tol = kRankTol);

/// Orthonormal basis for the column span of `cols`.
Matrix orthonormal_columns(const Matrix& cols, double tol = kRankTol);

/// Intersection of span(u) and span(v), via the nullspace of [U | -V].
Subspace subspace_intersection(const Subspace& u, const Subspace& v,
                               double tol = kRankTol);

/// Rank of the realignment of a square matrix of side dimA*dimB.
/// Rank 1 iff m = B (x) C for some B, C.
Index operator_schmidt_rank(const Matrix& m, Index dimA, Index dimB,
                            double tol = kRankTol);

/// Realignment map: the (dimA^2) x (dimB^2) matrix with entry
/// ((i1,j1),(i2,j2)) = m[(i1*dimB+i2),(j1*dimB+j2)].
Matrix realign(const Matrix& m, Index dimA, Index dimB);

bool is_unitary(const Matrix& m, double tol = 1e-10);

/// Column-vectorization (column-major stacking).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Partial trace over one tensor slot. `dims` are the slot dimensions of
/// the square matrix m (first slot most significant); returns the matrix
/// on the remaining slots.
Matrix partial_trace_slot(const Matrix& m, const std::vector<Index>& dims,
                          std::size_t slot);

/// Reorder tensor slots of a square matrix. `order[t]` is the old slot
/// occupying new position t; dims are the old slot dimensions.
Matrix permute_slots(const Matrix& m, const std::vector<Index>& dims,
                     const std::vector<std::size_t>& order);

/// Nullspace of a tall matrix K through the Gram matrix K^dag K.
/// Columns of the result are orthonormal coefficient vectors c with
/// ||K c|| ~ 0 relative to the largest singular value.
Matrix gram_nullspace(const Matrix& k, double tol = kRankTol);

/// Nullspace from a positive semidefinite Gram matrix directly.
Matrix psd_nullspace(const Matrix& gram, double tol = kRankTol);

/// Nearest unitary in Frobenius norm (polar factor via SVD).
Matrix closest_unitary(const Matrix& m);

}  // namespace qcat
