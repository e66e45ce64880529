#include "qcat/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qcat {

Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.rows() * b.rows() > kMaxDenseDim || a.cols() * b.cols() > kMaxDenseDim)
        throw too_large_error("kron: product dimension exceeds cap");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

RankResult rank_and_nullspace(const Matrix& m, double tol) {
    if (tol <= 0) throw std::invalid_argument("rank_and_nullspace: tol must be > 0");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax) ++rank;
    if (smax == 0.0) rank = 0;
    RankResult r;
    r.rank = rank;
    r.nullspace.ambient_dim = m.cols();
    r.nullspace.tol = tol;
    r.nullspace.basis = svd.matrixV().rightCols(m.cols() - rank);
    return r;
}

Matrix orthonormal_columns(const Matrix& cols, double tol) {
    if (cols.cols() == 0) return Matrix(cols.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (smax > 0 && sv(i) > tol * smax) ++rank;
    return svd.matrixU().leftCols(rank);
}

Subspace subspace_intersection(const Subspace& u, const Subspace& v, double tol) {
    if (u.ambient_dim != v.ambient_dim)
        throw std::invalid_argument("subspace_intersection: ambient dimension mismatch");
    Subspace out;
    out.ambient_dim = u.ambient_dim;
    out.tol = tol;
    if (u.dim() == 0 || v.dim() == 0) {
        out.basis = Matrix(u.ambient_dim, 0);
        return out;
    }
    Matrix stacked(u.ambient_dim, u.dim() + v.dim());
    stacked << u.basis, -v.basis;
    RankResult rr = rank_and_nullspace(stacked, tol);
    // Each null vector splits as (c, d) with U c = V d; the common vector is U c.
    Matrix members(u.ambient_dim, rr.nullspace.dim());
    for (Index k = 0; k < rr.nullspace.dim(); ++k)
        members.col(k) = u.basis * rr.nullspace.basis.col(k).head(u.dim());
    out.basis = orthonormal_columns(members, tol);
    return out;
}

Matrix realign(const Matrix& m, Index dimA, Index dimB) {
    if (m.rows() != m.cols() || m.rows() != dimA * dimB)
        throw std::invalid_argument("realign: side must equal dimA*dimB");
    Matrix r(dimA * dimA, dimB * dimB);
    for (Index i1 = 0; i1 < dimA; ++i1)
        for (Index j1 = 0; j1 < dimA; ++j1)
            for (Index i2 = 0; i2 < dimB; ++i2)
                for (Index j2 = 0; j2 < dimB; ++j2)
                    r(i1 * dimA + j1, i2 * dimB + j2) =
                        m(i1 * dimB + i2, j1 * dimB + j2);
    return r;
}

Index operator_schmidt_rank(const Matrix& m, Index dimA, Index dimB, double tol) {
    return rank_and_nullspace(realign(m, dimA, dimB), tol).rank;
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("is_unitary: matrix not square");
    Matrix d = m.adjoint() * m;
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff() <= tol;
}

Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) throw std::invalid_argument("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

namespace {

Index total_dim(const std::vector<Index>& dims) {
    Index d = 1;
    for (Index x : dims) d *= x;
    return d;
}

// Strides for mixed-radix decomposition, first slot most significant.
std::vector<Index> strides_of(const std::vector<Index>& dims) {
    std::vector<Index> s(dims.size(), 1);
    for (std::size_t t = dims.size(); t-- > 1;)
        s[t - 1] = s[t] * dims[t];
    return s;
}

}  // namespace

Matrix partial_trace_slot(const Matrix& m, const std::vector<Index>& dims,
                          std::size_t slot) {
    const Index d = total_dim(dims);
    if (m.rows() != d || m.cols() != d)
        throw std::invalid_argument("partial_trace_slot: dims do not match matrix");
    if (slot >= dims.size())
        throw std::invalid_argument("partial_trace_slot: slot out of range");
    const auto strides = strides_of(dims);
    const Index ds = dims[slot];
    const Index stride = strides[slot];
    const Index dout = d / ds;
    Matrix out = Matrix::Zero(dout, dout);
    // Index i of the full space splits as (hi, k, lo) around the traced slot.
    const Index hiCount = d / (ds * stride);
    for (Index hi = 0; hi < hiCount; ++hi)
        for (Index lo = 0; lo < stride; ++lo) {
            const Index rowOut = hi * stride + lo;
            for (Index hj = 0; hj < hiCount; ++hj)
                for (Index lj = 0; lj < stride; ++lj) {
                    const Index colOut = hj * stride + lj;
                    Complex acc = 0.0;
                    for (Index k = 0; k < ds; ++k)
                        acc += m((hi * ds + k) * stride + lo,
                                 (hj * ds + k) * stride + lj);
                    out(rowOut, colOut) = acc;
                }
        }
    return out;
}

Matrix permute_slots(const Matrix& m, const std::vector<Index>& dims,
                     const std::vector<std::size_t>& order) {
    const Index d = total_dim(dims);
    if (m.rows() != d || m.cols() != d)
        throw std::invalid_argument("permute_slots: dims do not match matrix");
    if (order.size() != dims.size())
        throw std::invalid_argument("permute_slots: order size mismatch");
    std::vector<Index> newDims(dims.size());
    for (std::size_t t = 0; t < order.size(); ++t) newDims[t] = dims[order[t]];
    const auto oldStrides = strides_of(dims);
    const auto newStrides = strides_of(newDims);
    // map[iOld] = iNew
    std::vector<Index> map(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        Index rem = i, iNew = 0;
        std::vector<Index> digit(dims.size());
        for (std::size_t t = 0; t < dims.size(); ++t) {
            digit[t] = rem / oldStrides[t];
            rem %= oldStrides[t];
        }
        for (std::size_t t = 0; t < order.size(); ++t)
            iNew += digit[order[t]] * newStrides[t];
        map[static_cast<std::size_t>(i)] = iNew;
    }
    Matrix out(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
}

Matrix gram_nullspace(const Matrix& k, double tol) {
    if (k.cols() == 0) return Matrix(0, 0);
    return psd_nullspace(k.adjoint() * k, tol);
}

Matrix psd_nullspace(const Matrix& gram, double tol) {
    const Index n = gram.cols();
    if (n == 0) return Matrix(0, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const auto& ev = es.eigenvalues();  // ascending
    const double emax = ev(n - 1);
    // The Gram route squares singular values, so the relative threshold is
    // tol^2 with a floor above eigensolver noise.
    const double thr = std::max(tol * tol, 1e-10) * std::max(emax, 0.0);
    Index nullCount = 0;
    while (nullCount < n && ev(nullCount) <= thr) ++nullCount;
    if (emax <= 0.0) nullCount = n;
    return es.eigenvectors().leftCols(nullCount);
}

Matrix closest_unitary(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace qcat
