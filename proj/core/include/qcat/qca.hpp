#pragma once

#include "qcat/lattice.hpp"

#include <variant>
#include <vector>

namespace qcat {

/// Advection: the new content of subcell j at cell x is the old content of
/// subcell j at cell x + e_j. This sign convention is normative for the
/// whole project and is pinned by a dense-conjugation test.
struct AdvectionLayer {
    std::vector<int> offsets;  // e_1,...,e_d
};

/// A fixed cell-local unitary applied to every cell simultaneously.
struct ScatteringLayer {
    Matrix s;
};

using Layer = std::variant<AdvectionLayer, ScatteringLayer>;

/// Layers are applied left-to-right in time: the circuit [s1, S1, s2, S2]
/// realizes the operator product S2 s2 S1 s1.
struct Circuit {
    Lattice lattice;
    std::vector<Layer> layers;
};

/// Relabeling of subcells across cells (shift c_j per subcell) plus a
/// grouping of m adjacent relabeled cells into one larger cell.
struct CellConstruction {
    std::vector<int> shift_offsets;  // c_1,...,c_d
    int group = 1;                   // m

    static CellConstruction identity(int subcell_count) {
        return CellConstruction{std::vector<int>(static_cast<std::size_t>(subcell_count), 0), 1};
    }
    bool is_identity() const;
};

struct StateVector {
    Lattice lattice;
    Vector amplitudes;  // length cell_dim^N, site (0,1) most significant
};

/// Layer and circuit validation (offset lengths, scattering unitarity).
void validate(const Circuit& circuit, double tol = 1e-10);

StateVector basis_state(const Lattice& lattice, const std::vector<Index>& digits);
StateVector all_quiescent_state(const Lattice& lattice);

StateVector apply_advection(const StateVector& state, const AdvectionLayer& layer);
StateVector apply_scattering(const StateVector& state, const ScatteringLayer& layer);
StateVector apply_layer(const StateVector& state, const Layer& layer);

StateVector simulate(StateVector state, const Circuit& circuit, int steps);

inline constexpr Index kDenseEvolutionCap = 4096;

/// Full unitary of the circuit, column by column. Oracle-scale only.
Matrix build_dense_evolution(const Circuit& circuit, Index cap = kDenseEvolutionCap);

/// One-cell translation as a permutation matrix on the full state space.
Matrix translation_matrix(const Lattice& lattice, Index cap = kDenseEvolutionCap);

Circuit concat(const Circuit& first, const Circuit& second);

/// Convenience: the two-layer circuit [advection, scattering].
Circuit qlga_circuit(const Lattice& lattice, std::vector<int> offsets, Matrix s);

Circuit with_lattice(const Circuit& circuit, int n_cells);

/// A circuit viewed through a cell construction: the same evolution over a
/// lattice of N/m constructed cells, each a window of original sites.
class GroupedCircuit {
  public:
    GroupedCircuit(Circuit base, CellConstruction construction);

    const Circuit& base() const { return base_; }
    const CellConstruction& construction() const { return construction_; }
    const Lattice& grouped_lattice() const { return grouped_; }

    /// Original sites of constructed cell y, in construction order
    /// (group position ascending, subcell ascending).
    std::vector<Site> sites_of_cell(int y) const;
    Window cell_window(int y) const;

    /// Constructed cell containing an original site.
    int cell_of_site(const Site& s) const;

    /// Slot permutation mapping construction order of cell y to the
    /// canonical order of its window: order[t] = construction-order slot
    /// at canonical position t.
    std::vector<std::size_t> canonical_order(int y) const;

    /// Dense index map: entry i is the original-layout basis index of
    /// grouped-layout basis index i. Oracle-scale only.
    std::vector<Index> relabel_index_map(Index cap = kDenseEvolutionCap) const;

    /// Dense evolution in the grouped layout (relabeled conjugation of the
    /// base evolution). Oracle-scale only.
    Matrix dense_evolution(Index cap = kDenseEvolutionCap) const;

  private:
    Circuit base_;
    CellConstruction construction_;
    Lattice grouped_;
};

GroupedCircuit regroup(const Circuit& circuit, const CellConstruction& construction);

}  // namespace qcat
