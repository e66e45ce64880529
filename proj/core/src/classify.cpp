#include "qcat/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcat {

namespace {

// Re-express an operator given in the canonical basis of a constructed
// cell's window in the construction-order basis.
Matrix to_construction_basis(const Matrix& m, const std::vector<Index>& toCanonical) {
    Matrix out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out(i, j) = m(toCanonical[static_cast<std::size_t>(i)],
                          toCanonical[static_cast<std::size_t>(j)]);
    return out;
}

// Incremental orthonormal span of a stream of vectors; stops growing at
// the ambient dimension.
class SpanBuilder {
  public:
    SpanBuilder(Index ambient, double tol) : basis_(ambient, 0), tol_(tol) {}

    void add(const Vector& v) {
        Vector r = v;
        // Two-pass re-orthogonalization keeps the basis stable.
        for (int pass = 0; pass < 2; ++pass)
            if (basis_.cols() > 0) r -= basis_ * (basis_.adjoint() * r);
        const double vn = v.norm();
        if (vn > 0 && r.norm() > tol_ * vn) {
            basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
            basis_.col(basis_.cols() - 1) = r / r.norm();
        }
    }

    Index dim() const { return basis_.cols(); }
    const Matrix& basis() const { return basis_; }
    bool full() const { return basis_.cols() == basis_.rows(); }

  private:
    Matrix basis_;
    double tol_;
};

}  // namespace

IntersectionAlgebra intersection_algebra(const GroupedCircuit& gc, int z_offset,
                                         const ClassifyOptions& opts) {
    const Lattice& grouped = gc.grouped_lattice();
    const CellStructure& cell = gc.base().lattice.cell;
    const int y = grouped.n_cells / 2;
    const int z = grouped.wrap_cell(y + z_offset);

    ConjugationOptions copts{opts.site_cap, opts.tol};
    ConjugatedCellBasis basis(gc, z, Direction::Forward, copts);
    const Window& w = basis.window();
    const Window cellY = gc.cell_window(y);

    std::vector<Site> targetSites;
    for (const Site& s : cellY.sites())
        if (w.contains(s)) targetSites.push_back(s);
    const Window target{targetSites};
    const Index targetDim = target.dimension(cell);
    const Index windowDim = w.dimension(cell);
    const double dRest = static_cast<double>(windowDim / targetDim);

    const Index n = basis.source_dim() * basis.source_dim();
    // Column i holds vec of the target restriction (normalized partial
    // trace) of the i-th conjugated matrix unit, assembled from the reshaped
    // row blocks without forming any window-sized unit. Conjugation
    // preserves Hilbert-Schmidt inner products, so the Gram matrix of the
    // off-target residuals is
    //   H = rest_dim * I - dRest * B^dag B.
    const auto q = basis.restriction_blocks(target);
    Matrix bmat(targetDim * targetDim, n);
    Index i = 0;
    for (Index a = 0; a < basis.source_dim(); ++a)
        for (Index b = 0; b < basis.source_dim(); ++b, ++i)
            bmat.col(i) = vec(Matrix(q[static_cast<std::size_t>(a)].adjoint() *
                                     q[static_cast<std::size_t>(b)])) /
                          dRest;
    Matrix gram = -dRest * (bmat.adjoint() * bmat);
    gram.diagonal().array() += static_cast<double>(basis.rest_dim());

    Matrix coeffs = psd_nullspace(gram, opts.tol);

    // Each null combination is B (x) I with B its target restriction;
    // expand B to the whole constructed cell (identity on any cell sites
    // the window never reached) in the construction-order basis.
    const auto toCanonical = construction_index_map(gc, y);
    const Index dW = cellY.dimension(cell);
    SpanBuilder span(dW * dW, opts.tol);
    for (Index k = 0; k < coeffs.cols(); ++k) {
        Matrix b = unvec(bmat * coeffs.col(k), targetDim, targetDim);
        Matrix onCell = embed_operator(b, target, cellY, cell);
        span.add(vec(to_construction_basis(onCell, toCanonical)));
    }

    IntersectionAlgebra out;
    out.z_offset = z_offset;
    out.basis = span.basis();
    out.dim = span.dim();

    out.adjoint_closed = true;
    for (Index k = 0; k < out.basis.cols(); ++k) {
        Matrix m = unvec(Vector(out.basis.col(k)), dW, dW);
        Vector adj = vec(Matrix(m.adjoint()));
        Vector resid = adj - out.basis * (out.basis.adjoint() * adj);
        if (resid.norm() > 1e-9 * adj.norm()) out.adjoint_closed = false;
    }
    return out;
}

bool factorization_pretest(Index cell_dim, int neighborhood_size) {
    if (cell_dim < 2) throw std::invalid_argument("factorization_pretest: cell_dim < 2");
    if (neighborhood_size < 1)
        throw std::invalid_argument("factorization_pretest: neighborhood_size < 1");
    // d factors as a product of r integers >= 2 iff it has at least r
    // prime factors counted with multiplicity.
    Index n = cell_dim;
    int multiplicity = 0;
    for (Index p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++multiplicity;
        }
    if (n > 1) ++multiplicity;
    return multiplicity >= neighborhood_size;
}

int default_lattice_cells(const std::vector<Layer>& layers, int m) {
    int diameter = 0;
    for (const Layer& layer : layers)
        if (const auto* adv = std::get_if<AdvectionLayer>(&layer)) {
            const auto [mn, mx] =
                std::minmax_element(adv->offsets.begin(), adv->offsets.end());
            diameter += *mx - *mn;
        }
    return m * std::max(5, diameter + 3);
}

namespace {

Index span_dim_of_products(const std::vector<IntersectionAlgebra>& ds, Index dW,
                           double tol, bool reversed) {
    std::vector<std::size_t> orderIdx(ds.size());
    for (std::size_t t = 0; t < ds.size(); ++t)
        orderIdx[t] = reversed ? ds.size() - 1 - t : t;

    Index count = 1;
    for (const auto& d : ds) {
        if (count > (Index{1} << 16) / std::max<Index>(d.dim, 1))
            throw too_large_error("product span: too many ordered products");
        count *= d.dim;
    }

    SpanBuilder span(dW * dW, tol);
    std::vector<Index> pick(ds.size(), 0);
    for (Index it = 0; it < count && !span.full(); ++it) {
        Matrix prod = Matrix::Identity(dW, dW);
        for (std::size_t t : orderIdx)
            prod = prod * unvec(Vector(ds[t].basis.col(pick[t])), dW, dW);
        span.add(vec(prod));
        for (std::size_t t = pick.size(); t-- > 0;) {
            if (++pick[t] < ds[t].dim) break;
            pick[t] = 0;
        }
    }
    return span.dim();
}

}  // namespace

CriterionReport qlga_criterion(const Circuit& circuit,
                               const CellConstruction& construction,
                               const ClassifyOptions& opts) {
    Circuit resized =
        with_lattice(circuit, default_lattice_cells(circuit.layers, construction.group));
    GroupedCircuit gc = regroup(resized, construction);
    const Index dW = gc.grouped_lattice().cell.cell_dim();

    CriterionReport report;
    report.construction = construction;
    report.cell_alg_dim = dW * dW;

    ConjugationOptions copts{opts.site_cap, opts.tol};
    NeighborhoodReport nbr = minimal_neighborhood(gc, copts);
    if (!nbr.structurally_reversible())
        throw anomaly_error("minimal neighborhood violates structural reversibility");
    report.neighborhood = nbr.forward;

    report.pretest_passed =
        factorization_pretest(dW, static_cast<int>(nbr.forward.size()));
    if (!report.pretest_passed) {
        report.verdict = Verdict::NotQLGA;
        return report;
    }

    std::vector<IntersectionAlgebra> ds;
    for (int k : nbr.forward) {  // ascending offsets
        IntersectionAlgebra d = intersection_algebra(gc, -k, opts);
        if (d.dim < 1) throw anomaly_error("intersection algebra lost the identity");
        report.d_dims[k] = d.dim;
        ds.push_back(std::move(d));
    }

    report.product_span_dim = span_dim_of_products(ds, dW, opts.tol, false);
    const Index reversedSpan = span_dim_of_products(ds, dW, opts.tol, true);
    if (reversedSpan != report.product_span_dim)
        throw anomaly_error("product span depends on factor order");

    report.verdict =
        report.product_span_dim == report.cell_alg_dim ? Verdict::QLGA : Verdict::NotQLGA;
    if (report.verdict == Verdict::QLGA) {
        std::vector<Index> dims;
        for (const auto& [k, dim] : report.d_dims) {
            const auto root = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dim))));
            if (root * root != dim)
                throw anomaly_error("intersection algebra dimension is not a square");
            dims.push_back(root);
        }
        report.subcell_dims = std::move(dims);
    }
    return report;
}

ScanResult scan_constructions(const Circuit& circuit, int max_m,
                              std::vector<std::vector<int>> shift_candidates,
                              const ClassifyOptions& opts) {
    if (max_m < 1) throw std::invalid_argument("scan_constructions: max_m must be >= 1");
    const int d = circuit.lattice.cell.subcell_count();
    if (shift_candidates.empty()) {
        // All shift vectors with entries in {-1, 0, +1}.
        std::vector<std::vector<int>> acc{{}};
        for (int j = 0; j < d; ++j) {
            std::vector<std::vector<int>> next;
            for (const auto& prefix : acc)
                for (int c : {-1, 0, 1}) {
                    auto e = prefix;
                    e.push_back(c);
                    next.push_back(std::move(e));
                }
            acc = std::move(next);
        }
        shift_candidates = std::move(acc);
    }
    ScanResult result;
    for (int m = 1; m <= max_m; ++m)
        for (const auto& shift : shift_candidates) {
            CriterionReport r =
                qlga_criterion(circuit, CellConstruction{shift, m}, opts);
            result.any_qlga = result.any_qlga || r.verdict == Verdict::QLGA;
            result.reports.push_back(std::move(r));
        }
    return result;
}

ProductPropertyReport product_property_check(const Matrix& s, int trials,
                                             std::uint64_t seed, double tol) {
    if (s.rows() != 4 || s.cols() != 4)
        throw std::invalid_argument("product_property_check: matrix side must be 4");
    if (!is_unitary(s, 1e-8))
        throw std::invalid_argument("product_property_check: matrix must be unitary");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Matrix id2 = Matrix::Identity(2, 2);

    ProductPropertyReport report;
    report.identity_rank1 =
        operator_schmidt_rank(s.adjoint() * Matrix::Identity(4, 4) * s, 2, 2, tol) == 1;

    while (report.trials < trials) {
        Matrix a(2, 2);
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
        Matrix dev = a - (a.trace() / 2.0) * id2;
        if (dev.cwiseAbs().maxCoeff() < 1e-6) continue;  // skip near-identity draws
        ++report.trials;
        if (operator_schmidt_rank(s.adjoint() * kron(id2, a) * s, 2, 2, tol) == 1)
            ++report.rank1_right;
        if (operator_schmidt_rank(s.adjoint() * kron(a, id2) * s, 2, 2, tol) == 1)
            ++report.rank1_left;
    }
    return report;
}

}  // namespace qcat
