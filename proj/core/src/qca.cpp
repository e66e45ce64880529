#include "qcat/qca.hpp"

#include <algorithm>
#include <cmath>

namespace qcat {

namespace {

// Strides over the N*d site slots, canonical order, first slot most significant.
std::vector<Index> site_strides(const Lattice& lat) {
    const int d = lat.cell.subcell_count();
    std::vector<Index> strides(static_cast<std::size_t>(lat.n_cells) * d, 1);
    for (std::size_t t = strides.size(); t-- > 1;) {
        const int sub = static_cast<int>((t) % d);
        strides[t - 1] = strides[t] * lat.cell.subcell_dims[static_cast<std::size_t>(sub)];
    }
    return strides;
}

Index state_dim(const Lattice& lat, Index cap = -1) {
    Index dim = 1;
    const Index dW = lat.cell.cell_dim();
    for (int x = 0; x < lat.n_cells; ++x) {
        if (dim > kMaxDenseDim / dW) throw too_large_error("state dimension exceeds cap");
        dim *= dW;
    }
    if (cap > 0 && dim > cap) throw too_large_error("problem too large for dense assembly");
    return dim;
}

std::size_t slot_of(const Lattice& lat, int cell, int subcell) {
    return static_cast<std::size_t>(cell) * lat.cell.subcell_count() +
           static_cast<std::size_t>(subcell - 1);
}

}  // namespace

bool CellConstruction::is_identity() const {
    if (group != 1) return false;
    return std::all_of(shift_offsets.begin(), shift_offsets.end(),
                       [](int c) { return c == 0; });
}

void validate(const Circuit& circuit, double tol) {
    const int d = circuit.lattice.cell.subcell_count();
    const Index dW = circuit.lattice.cell.cell_dim();
    for (const Layer& layer : circuit.layers) {
        if (const auto* adv = std::get_if<AdvectionLayer>(&layer)) {
            if (static_cast<int>(adv->offsets.size()) != d)
                throw std::invalid_argument("advection offsets length != subcell count");
        } else {
            const auto& s = std::get<ScatteringLayer>(layer).s;
            if (s.rows() != dW || s.cols() != dW)
                throw std::invalid_argument("scattering matrix side != cell dimension");
            if (!is_unitary(s, tol))
                throw std::invalid_argument("scattering matrix is not unitary");
        }
    }
}

StateVector basis_state(const Lattice& lattice, const std::vector<Index>& digits) {
    const auto strides = site_strides(lattice);
    if (digits.size() != strides.size())
        throw std::invalid_argument("basis_state: one digit per site required");
    Index idx = 0;
    for (std::size_t t = 0; t < digits.size(); ++t) idx += digits[t] * strides[t];
    StateVector sv{lattice, Vector::Zero(state_dim(lattice))};
    sv.amplitudes(idx) = 1.0;
    return sv;
}

StateVector all_quiescent_state(const Lattice& lattice) {
    return basis_state(lattice,
                       std::vector<Index>(site_strides(lattice).size(), 0));
}

StateVector apply_advection(const StateVector& state, const AdvectionLayer& layer) {
    const Lattice& lat = state.lattice;
    const int d = lat.cell.subcell_count();
    if (static_cast<int>(layer.offsets.size()) != d)
        throw std::invalid_argument("apply_advection: offsets length != subcell count");
    const auto strides = site_strides(lat);
    const Index dim = state.amplitudes.size();

    // new digit at (x,j) = old digit at (x+e_j, j); equivalently the old
    // index is rebuilt from the new digits with per-subcell shifted strides.
    std::vector<Index> shifted(strides.size());
    for (int x = 0; x < lat.n_cells; ++x)
        for (int j = 1; j <= d; ++j)
            shifted[slot_of(lat, x, j)] =
                strides[slot_of(lat, lat.wrap_cell(x + layer.offsets[static_cast<std::size_t>(j - 1)]), j)];

    StateVector out{lat, Vector(dim)};
    for (Index iNew = 0; iNew < dim; ++iNew) {
        Index rem = iNew, iOld = 0;
        for (std::size_t t = 0; t < strides.size(); ++t) {
            iOld += (rem / strides[t]) * shifted[t];
            rem %= strides[t];
        }
        out.amplitudes(iNew) = state.amplitudes(iOld);
    }
    return out;
}

StateVector apply_scattering(const StateVector& state, const ScatteringLayer& layer) {
    const Lattice& lat = state.lattice;
    const Index dW = lat.cell.cell_dim();
    if (layer.s.rows() != dW || layer.s.cols() != dW)
        throw std::invalid_argument("apply_scattering: matrix side != cell dimension");
    StateVector out{lat, state.amplitudes};
    Vector block(dW);
    Index low = state.amplitudes.size() / dW;  // stride below cell 0
    for (int x = 0; x < lat.n_cells; ++x) {
        const Index high = state.amplitudes.size() / (low * dW);
        for (Index h = 0; h < high; ++h)
            for (Index l = 0; l < low; ++l) {
                for (Index c = 0; c < dW; ++c)
                    block(c) = out.amplitudes((h * dW + c) * low + l);
                block = layer.s * block;
                for (Index c = 0; c < dW; ++c)
                    out.amplitudes((h * dW + c) * low + l) = block(c);
            }
        low /= dW;
    }
    return out;
}

StateVector apply_layer(const StateVector& state, const Layer& layer) {
    if (const auto* adv = std::get_if<AdvectionLayer>(&layer))
        return apply_advection(state, *adv);
    return apply_scattering(state, std::get<ScatteringLayer>(layer));
}

StateVector simulate(StateVector state, const Circuit& circuit, int steps) {
    if (steps < 0) throw std::invalid_argument("simulate: steps must be >= 0");
    if (state.lattice != circuit.lattice)
        throw std::invalid_argument("simulate: state and circuit lattices differ");
    for (int t = 0; t < steps; ++t)
        for (const Layer& layer : circuit.layers) state = apply_layer(state, layer);
    if (std::abs(state.amplitudes.norm() - 1.0) > 1e-10)
        throw std::runtime_error("simulate: norm drifted beyond 1e-10");
    return state;
}

Matrix build_dense_evolution(const Circuit& circuit, Index cap) {
    const Index dim = state_dim(circuit.lattice, cap);
    Matrix u(dim, dim);
    StateVector sv{circuit.lattice, Vector::Zero(dim)};
    for (Index col = 0; col < dim; ++col) {
        sv.amplitudes.setZero();
        sv.amplitudes(col) = 1.0;
        StateVector r = sv;
        for (const Layer& layer : circuit.layers) r = apply_layer(r, layer);
        u.col(col) = r.amplitudes;
    }
    return u;
}

Matrix translation_matrix(const Lattice& lattice, Index cap) {
    const Index dim = state_dim(lattice, cap);
    const auto strides = site_strides(lattice);
    const int d = lattice.cell.subcell_count();
    // tau_1 maps |b^x> to |b^{x+1}>: new digit at cell x = old digit at x+1.
    std::vector<Index> shifted(strides.size());
    for (int x = 0; x < lattice.n_cells; ++x)
        for (int j = 1; j <= d; ++j)
            shifted[slot_of(lattice, x, j)] = strides[slot_of(lattice, lattice.wrap_cell(x + 1), j)];
    Matrix t = Matrix::Zero(dim, dim);
    for (Index iNew = 0; iNew < dim; ++iNew) {
        Index rem = iNew, iOld = 0;
        for (std::size_t k = 0; k < strides.size(); ++k) {
            iOld += (rem / strides[k]) * shifted[k];
            rem %= strides[k];
        }
        t(iNew, iOld) = 1.0;
    }
    return t;
}

Circuit concat(const Circuit& first, const Circuit& second) {
    if (first.lattice != second.lattice)
        throw std::invalid_argument("concat: lattice mismatch");
    Circuit out = first;
    out.layers.insert(out.layers.end(), second.layers.begin(), second.layers.end());
    return out;
}

Circuit qlga_circuit(const Lattice& lattice, std::vector<int> offsets, Matrix s) {
    Circuit c{lattice, {AdvectionLayer{std::move(offsets)}, ScatteringLayer{std::move(s)}}};
    validate(c);
    return c;
}

Circuit with_lattice(const Circuit& circuit, int n_cells) {
    Circuit out = circuit;
    out.lattice = Lattice(n_cells, circuit.lattice.cell);
    return out;
}

GroupedCircuit::GroupedCircuit(Circuit base, CellConstruction construction)
    : base_(std::move(base)), construction_(std::move(construction)) {
    const int d = base_.lattice.cell.subcell_count();
    if (static_cast<int>(construction_.shift_offsets.size()) != d)
        throw std::invalid_argument("regroup: shift offsets length != subcell count");
    const int m = construction_.group;
    if (m < 1) throw std::invalid_argument("regroup: group size must be >= 1");
    if (base_.lattice.n_cells % m != 0)
        throw std::invalid_argument("regroup: lattice size not divisible by group size");
    std::vector<Index> dims;
    dims.reserve(static_cast<std::size_t>(m) * d);
    for (int r = 0; r < m; ++r)
        for (Index dj : base_.lattice.cell.subcell_dims) dims.push_back(dj);
    grouped_ = Lattice(base_.lattice.n_cells / m, CellStructure(std::move(dims)));
}

std::vector<Site> GroupedCircuit::sites_of_cell(int y) const {
    const int d = base_.lattice.cell.subcell_count();
    const int m = construction_.group;
    std::vector<Site> sites;
    sites.reserve(static_cast<std::size_t>(m) * d);
    for (int r = 0; r < m; ++r)
        for (int j = 1; j <= d; ++j)
            sites.push_back(Site{
                base_.lattice.wrap_cell(static_cast<long long>(m) * y + r +
                                        construction_.shift_offsets[static_cast<std::size_t>(j - 1)]),
                j});
    return sites;
}

Window GroupedCircuit::cell_window(int y) const { return Window(sites_of_cell(y)); }

int GroupedCircuit::cell_of_site(const Site& s) const {
    const int m = construction_.group;
    const long long unshifted = base_.lattice.wrap_cell(
        static_cast<long long>(s.cell) - construction_.shift_offsets[static_cast<std::size_t>(s.subcell - 1)]);
    return static_cast<int>(unshifted / m);
}

std::vector<std::size_t> GroupedCircuit::canonical_order(int y) const {
    const auto sites = sites_of_cell(y);
    const Window win{sites};
    // order[t] = construction-order slot whose site sits at canonical position t.
    std::vector<std::size_t> order(sites.size());
    for (std::size_t k = 0; k < sites.size(); ++k)
        order[win.position(sites[k])] = k;
    return order;
}

std::vector<Index> GroupedCircuit::relabel_index_map(Index cap) const {
    const Index dim = state_dim(base_.lattice, cap);
    const auto oldStrides = site_strides(base_.lattice);
    const auto newStrides = site_strides(grouped_);
    // Grouped slot (y, r, j) carries original site (m*y + r + c_j, j).
    std::vector<Index> oldStrideOfNewSlot(newStrides.size());
    for (int y = 0; y < grouped_.n_cells; ++y) {
        const auto sites = sites_of_cell(y);
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const std::size_t newSlot =
                static_cast<std::size_t>(y) * sites.size() + k;
            oldStrideOfNewSlot[newSlot] =
                oldStrides[slot_of(base_.lattice, sites[k].cell, sites[k].subcell)];
        }
    }
    std::vector<Index> map(static_cast<std::size_t>(dim));
    for (Index iNew = 0; iNew < dim; ++iNew) {
        Index rem = iNew, iOld = 0;
        for (std::size_t t = 0; t < newStrides.size(); ++t) {
            iOld += (rem / newStrides[t]) * oldStrideOfNewSlot[t];
            rem %= newStrides[t];
        }
        map[static_cast<std::size_t>(iNew)] = iOld;
    }
    return map;
}

Matrix GroupedCircuit::dense_evolution(Index cap) const {
    const Matrix u = build_dense_evolution(base_, cap);
    const auto map = relabel_index_map(cap);
    Matrix out(u.rows(), u.cols());
    for (Index i = 0; i < u.rows(); ++i)
        for (Index j = 0; j < u.cols(); ++j)
            out(i, j) = u(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
    return out;
}

GroupedCircuit regroup(const Circuit& circuit, const CellConstruction& construction) {
    return GroupedCircuit(circuit, construction);
}

}  // namespace qcat
