#pragma once

#include "qcat/heisenberg.hpp"

#include <map>
#include <optional>
#include <string>

namespace qcat {

/// Thrown when a computation hits a state the theory says cannot happen
/// (non-integer subcell dimension, order-dependent product span, broken
/// structural reversibility).
struct anomaly_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// D_{z,y}: the part of the conjugated cell-z algebra that is local upon
/// constructed cell y, re-expressed as operators on cell y alone
/// (construction-order basis).
struct IntersectionAlgebra {
    int z_offset = 0;  // z - y
    Matrix basis;      // d_W^2 x dim, orthonormal vectorized operators
    Index dim = 0;
    bool adjoint_closed = false;
};

struct ClassifyOptions {
    double tol = kRankTol;
    int site_cap = 12;
};

IntersectionAlgebra intersection_algebra(const GroupedCircuit& gc, int z_offset,
                                         const ClassifyOptions& opts = {});

/// True iff cell_dim factors as a product of neighborhood_size integers,
/// each >= 2 (i.e. cell_dim has at least that many prime factors counted
/// with multiplicity).
bool factorization_pretest(Index cell_dim, int neighborhood_size);

enum class Verdict { QLGA, NotQLGA };

struct CriterionReport {
    CellConstruction construction;
    std::set<int> neighborhood;
    std::map<int, Index> d_dims;  // offset k -> dim D_{y-k,y}
    Index product_span_dim = 0;
    Index cell_alg_dim = 0;  // d_W^2 of the constructed cell
    Verdict verdict = Verdict::NotQLGA;
    bool pretest_passed = false;
    std::optional<std::vector<Index>> subcell_dims;  // sqrt(dim) per k, QLGA only
};

/// The QLGA decision: regroup, find the neighborhood, run the dimension
/// pre-test, compute every D_{y-k,y} and the span of their ordered
/// products, and compare against the full cell algebra.
CriterionReport qlga_criterion(const Circuit& circuit,
                               const CellConstruction& construction,
                               const ClassifyOptions& opts = {});

struct ScanResult {
    std::vector<CriterionReport> reports;
    bool any_qlga = false;
};

/// Run the criterion over every (shift, m) pair with m <= max_m. An empty
/// candidate list means all shift vectors with entries in {-1, 0, +1}.
ScanResult scan_constructions(const Circuit& circuit, int max_m,
                              std::vector<std::vector<int>> shift_candidates = {},
                              const ClassifyOptions& opts = {});

struct ProductPropertyReport {
    int trials = 0;
    int rank1_right = 0;      // s^dag (I (x) A) s with product form
    int rank1_left = 0;       // s^dag (A (x) I) s with product form
    bool identity_rank1 = false;
};

/// Samples random non-identity 2x2 matrices A and counts how often the
/// conjugated embeddings stay in product form. Deterministic under seed.
ProductPropertyReport product_property_check(const Matrix& s, int trials,
                                             std::uint64_t seed,
                                             double tol = kRankTol);

/// Smallest lattice size divisible by m leaving room for a three-cell
/// neighborhood plus buffer around the layer offsets.
int default_lattice_cells(const std::vector<Layer>& layers, int m);

}  // namespace qcat
