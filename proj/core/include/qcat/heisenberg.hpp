#pragma once

#include "qcat/qca.hpp"

#include <set>

namespace qcat {

/// Thrown when a conjugated operator's support outgrows the site cap.
struct support_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operator together with its exact support, at subcell granularity.
/// The matrix is stored against the canonical order of the window.
struct LocalOperator {
    Window window;
    Matrix matrix;
};

enum class Direction { Forward, Backward };  // G^dag A G  /  G A G^dag

struct ConjugationOptions {
    int site_cap = 12;
    double tol = 1e-9;
};

/// Removes every site on which the operator acts as an identity factor
/// (per-site normalized partial-trace test).
LocalOperator trim_support(const LocalOperator& op, const CellStructure& cell,
                           double tol = 1e-9);

/// Conjugate a local operator through the circuit, layer by layer.
/// Advection layers relabel sites; scattering layers enlarge the window to
/// whole cells and conjugate cell-wise. The result is trimmed.
LocalOperator conjugate_through(const LocalOperator& op, const Circuit& circuit,
                                Direction direction,
                                const ConjugationOptions& opts = {});

/// Conjugation of the full operator algebra of one constructed cell,
/// folded into a single window unitary: for any A on `source`,
/// G^dag A G = transform^dag (A at tracked slots) transform on `window`
/// (forward direction; backward analogously). Matrix units come out as
/// products of row blocks of `transform`, which is far cheaper than
/// conjugating each unit separately.
class ConjugatedCellBasis {
  public:
    ConjugatedCellBasis(const GroupedCircuit& gc, int z, Direction direction,
                        const ConjugationOptions& opts = {});

    const Window& source() const { return source_; }
    const Window& window() const { return window_; }
    Index source_dim() const { return sourceDim_; }
    Index rest_dim() const { return restDim_; }

    /// Conjugate of the matrix unit |a><b| (indices in the canonical basis
    /// of the source window), as an untrimmed operator on window().
    Matrix unit(Index a, Index b) const;

    /// Conjugate of an arbitrary operator on the source window.
    Matrix conjugate(const Matrix& a) const;

    /// Row blocks rearranged against a target sub-window of window():
    /// the unnormalized partial trace of unit(a,b) onto `target` equals
    /// restriction_blocks(target)[a]^dag * restriction_blocks(target)[b].
    /// Avoids materializing any window-sized unit.
    std::vector<Matrix> restriction_blocks(const Window& target) const;

    /// Basis index map from construction order to the canonical order of
    /// the source window.
    const std::vector<Index>& construction_to_canonical() const { return toCanonical_; }

  private:
    Window source_;
    Window window_;
    CellStructure cell_;
    Index sourceDim_ = 0;
    Index restDim_ = 0;
    Matrix blocks_;  // transform with rows regrouped as (source index, rest index)
    std::vector<Index> toCanonical_;
};

struct NeighborhoodReport {
    std::set<int> forward;   // support offsets of G^dag A_z G, in cells
    std::set<int> backward;  // support offsets of G A_z G^dag

    bool structurally_reversible() const;
};

/// Matrix unit basis of constructed cell y, as local operators on the
/// cell's window (canonical slot order).
std::vector<LocalOperator> cell_matrix_units(const GroupedCircuit& gc, int y);

/// Basis index map of a constructed cell: construction order (group
/// position, subcell) to the canonical order of the cell window.
std::vector<Index> construction_index_map(const GroupedCircuit& gc, int y);

/// Cell-granularity support offsets of a local operator relative to
/// constructed cell z.
std::set<int> support_offsets(const GroupedCircuit& gc, const LocalOperator& op, int z);

/// Union of supports of all conjugated matrix units of one cell, forward
/// and backward, in constructed-cell offsets.
NeighborhoodReport minimal_neighborhood(const GroupedCircuit& gc,
                                        const ConjugationOptions& opts = {});
NeighborhoodReport minimal_neighborhood(const Circuit& circuit,
                                        const ConjugationOptions& opts = {});

}  // namespace qcat
