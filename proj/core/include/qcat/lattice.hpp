#pragma once

#include "qcat/linalg.hpp"

#include <compare>
#include <vector>

namespace qcat {

/// Factorization of the cell Hilbert space into subcells (d_1,...,d_d),
/// each of dimension >= 2.
struct CellStructure {
    std::vector<Index> subcell_dims;

    CellStructure() = default;
    explicit CellStructure(std::vector<Index> dims);

    int subcell_count() const { return static_cast<int>(subcell_dims.size()); }
    Index cell_dim() const;

    bool operator==(const CellStructure&) const = default;
};

/// Periodic one-dimensional lattice of N identical cells.
struct Lattice {
    int n_cells = 0;
    CellStructure cell;

    Lattice() = default;
    Lattice(int n, CellStructure c);

    int wrap_cell(long long x) const {
        long long m = x % n_cells;
        return static_cast<int>(m < 0 ? m + n_cells : m);
    }
    /// Offset of cell x relative to cell z, folded into (-N/2, N/2].
    int relative_offset(int x, int z) const;

    bool operator==(const Lattice&) const = default;
};

/// One subcell slot: cell index in [0, N), subcell index in [1, d].
struct Site {
    int cell = 0;
    int subcell = 1;

    auto operator<=>(const Site&) const = default;
};

/// Ordered, duplicate-free set of sites; the tensor-slot layout of every
/// operator matrix follows this canonical (cell, subcell) order.
class Window {
  public:
    Window() = default;
    /// Sorts and rejects duplicates.
    explicit Window(std::vector<Site> sites);

    const std::vector<Site>& sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }

    bool contains(const Site& s) const;
    /// Position of s in the canonical order; throws if absent.
    std::size_t position(const Site& s) const;

    std::vector<Index> slot_dims(const CellStructure& cell) const;
    Index dimension(const CellStructure& cell) const;

    bool operator==(const Window&) const = default;

  private:
    std::vector<Site> sites_;
};

Site translate(const Site& s, int z, const Lattice& lattice);

Window window_union(const Window& a, const Window& b);

/// Embed an operator on `from` into `into` (acting as identity on the
/// extra sites), with tensor factors in the canonical order of `into`.
Matrix embed_operator(const Matrix& op, const Window& from, const Window& into,
                      const CellStructure& cell);

}  // namespace qcat
