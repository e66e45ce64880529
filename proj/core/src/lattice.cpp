#include "qcat/lattice.hpp"

#include <algorithm>

namespace qcat {

CellStructure::CellStructure(std::vector<Index> dims) : subcell_dims(std::move(dims)) {
    if (subcell_dims.empty())
        throw std::invalid_argument("CellStructure: need at least one subcell");
    for (Index d : subcell_dims)
        if (d < 2) throw std::invalid_argument("CellStructure: subcell dims must be >= 2");
}

Index CellStructure::cell_dim() const {
    Index d = 1;
    for (Index x : subcell_dims) d *= x;
    return d;
}

Lattice::Lattice(int n, CellStructure c) : n_cells(n), cell(std::move(c)) {
    if (n_cells < 2) throw std::invalid_argument("Lattice: need at least 2 cells");
}

int Lattice::relative_offset(int x, int z) const {
    int off = wrap_cell(static_cast<long long>(x) - z);
    if (off > n_cells / 2) off -= n_cells;
    return off;
}

Window::Window(std::vector<Site> sites) : sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
        throw std::invalid_argument("Window: duplicate sites");
}

bool Window::contains(const Site& s) const {
    return std::binary_search(sites_.begin(), sites_.end(), s);
}

std::size_t Window::position(const Site& s) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || *it != s)
        throw std::invalid_argument("Window: site not present");
    return static_cast<std::size_t>(it - sites_.begin());
}

std::vector<Index> Window::slot_dims(const CellStructure& cell) const {
    std::vector<Index> dims;
    dims.reserve(sites_.size());
    for (const Site& s : sites_)
        dims.push_back(cell.subcell_dims.at(static_cast<std::size_t>(s.subcell - 1)));
    return dims;
}

Index Window::dimension(const CellStructure& cell) const {
    Index d = 1;
    for (Index x : slot_dims(cell)) {
        if (d > kMaxDenseDim / x) throw too_large_error("Window: dimension exceeds cap");
        d *= x;
    }
    return d;
}

Site translate(const Site& s, int z, const Lattice& lattice) {
    return Site{lattice.wrap_cell(static_cast<long long>(s.cell) + z), s.subcell};
}

Window window_union(const Window& a, const Window& b) {
    std::vector<Site> merged;
    merged.reserve(a.size() + b.size());
    std::set_union(a.sites().begin(), a.sites().end(),
                   b.sites().begin(), b.sites().end(), std::back_inserter(merged));
    return Window(std::move(merged));
}

Matrix embed_operator(const Matrix& op, const Window& from, const Window& into,
                      const CellStructure& cell) {
    const Index dFrom = from.dimension(cell);
    if (op.rows() != dFrom || op.cols() != dFrom)
        throw std::invalid_argument("embed_operator: matrix side does not match window");
    for (const Site& s : from.sites())
        if (!into.contains(s))
            throw std::invalid_argument("embed_operator: from is not a subset of into");

    const Index dInto = into.dimension(cell);
    const Index dRest = dInto / dFrom;
    // Build op (x) I in [from..., rest...] slot order, then permute the
    // slots into the canonical order of `into`.
    Matrix big = kron(op, Matrix::Identity(dRest, dRest));

    std::vector<Index> dimsOrdered;  // dims in [from..., rest...] order
    std::vector<std::size_t> fromPos, restPos;
    const auto intoDims = into.slot_dims(cell);
    for (std::size_t t = 0; t < into.size(); ++t) {
        if (from.contains(into.sites()[t])) fromPos.push_back(t);
        else restPos.push_back(t);
    }
    for (std::size_t t : fromPos) dimsOrdered.push_back(intoDims[t]);
    for (std::size_t t : restPos) dimsOrdered.push_back(intoDims[t]);

    // order[t] = position, in the [from..., rest...] layout, of the slot
    // that canonical position t should hold.
    std::vector<std::size_t> order(into.size());
    std::vector<std::size_t> layout;  // canonical slot index per mixed position
    layout.insert(layout.end(), fromPos.begin(), fromPos.end());
    layout.insert(layout.end(), restPos.begin(), restPos.end());
    for (std::size_t mixed = 0; mixed < layout.size(); ++mixed)
        order[layout[mixed]] = mixed;
    return permute_slots(big, dimsOrdered, order);
}

}  // namespace qcat
