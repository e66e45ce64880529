#include "qcat/heisenberg.hpp"

#include <algorithm>

namespace qcat {

namespace {

// Relabel every window site (x,j) -> (x + dir*e_j, j) and permute the
// matrix slots to the new canonical order.
LocalOperator relabel_advection(const LocalOperator& op, const AdvectionLayer& layer,
                                const Lattice& lat, int dir) {
    const auto& oldSites = op.window.sites();
    std::vector<Site> newSites(oldSites.size());
    for (std::size_t t = 0; t < oldSites.size(); ++t)
        newSites[t] = translate(oldSites[t],
                                dir * layer.offsets[static_cast<std::size_t>(oldSites[t].subcell - 1)],
                                lat);
    Window newWindow{newSites};
    std::vector<std::size_t> order(newSites.size());
    for (std::size_t t = 0; t < newSites.size(); ++t)
        order[newWindow.position(newSites[t])] = t;
    return LocalOperator{newWindow,
                         permute_slots(op.matrix, op.window.slot_dims(lat.cell), order)};
}

// Enlarge the window to whole cells and conjugate by s on each cell.
LocalOperator conjugate_scattering(const LocalOperator& op, const ScatteringLayer& layer,
                                   const Lattice& lat, Direction direction,
                                   const ConjugationOptions& opts) {
    if (op.window.empty()) return op;
    std::set<int> cells;
    for (const Site& s : op.window.sites()) cells.insert(s.cell);
    std::vector<Site> full;
    for (int x : cells)
        for (int j = 1; j <= lat.cell.subcell_count(); ++j) full.push_back(Site{x, j});
    if (static_cast<int>(full.size()) > opts.site_cap)
        throw support_cap_error("support cap exceeded");
    Window enlarged{full};
    Matrix m = embed_operator(op.matrix, op.window, enlarged, lat.cell);
    Matrix conj = Matrix::Identity(1, 1);
    for (std::size_t c = 0; c < cells.size(); ++c) conj = kron(conj, layer.s);
    if (direction == Direction::Forward)
        m = conj.adjoint() * m * conj;
    else
        m = conj * m * conj.adjoint();
    return LocalOperator{enlarged, std::move(m)};
}

}  // namespace

LocalOperator trim_support(const LocalOperator& op, const CellStructure& cell,
                           double tol) {
    LocalOperator cur = op;
    bool removed = true;
    while (removed && !cur.window.empty()) {
        removed = false;
        const auto dims = cur.window.slot_dims(cell);
        for (std::size_t slot = 0; slot < cur.window.size(); ++slot) {
            const Index ds = dims[slot];
            Matrix t = partial_trace_slot(cur.matrix, dims, slot) / static_cast<double>(ds);
            std::vector<Site> restSites = cur.window.sites();
            restSites.erase(restSites.begin() + static_cast<std::ptrdiff_t>(slot));
            Window rest{restSites};
            Matrix recon = embed_operator(t, rest, cur.window, cell);
            const double scale = std::max(1.0, cur.matrix.cwiseAbs().maxCoeff());
            if ((cur.matrix - recon).cwiseAbs().maxCoeff() <= tol * scale) {
                cur = LocalOperator{rest, std::move(t)};
                removed = true;
                break;
            }
        }
    }
    return cur;
}

LocalOperator conjugate_through(const LocalOperator& op, const Circuit& circuit,
                                Direction direction, const ConjugationOptions& opts) {
    const Lattice& lat = circuit.lattice;
    LocalOperator cur = op;
    // Forward (G^dag A G) peels layers from the end; backward from the start.
    auto step = [&](const Layer& layer) {
        if (const auto* adv = std::get_if<AdvectionLayer>(&layer)) {
            const int dir = direction == Direction::Forward ? +1 : -1;
            cur = relabel_advection(cur, *adv, lat, dir);
        } else {
            cur = conjugate_scattering(cur, std::get<ScatteringLayer>(layer), lat,
                                       direction, opts);
            cur = trim_support(cur, lat.cell, opts.tol);
        }
    };
    if (direction == Direction::Forward)
        for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it) step(*it);
    else
        for (const Layer& layer : circuit.layers) step(layer);
    return trim_support(cur, lat.cell, opts.tol);
}

std::vector<Index> construction_index_map(const GroupedCircuit& gc, int y) {
    const Window win = gc.cell_window(y);
    const CellStructure& cell = gc.base().lattice.cell;
    const Index dim = win.dimension(cell);
    const auto sites = gc.sites_of_cell(y);
    std::vector<Index> consStrides(sites.size(), 1), dimsCons(sites.size());
    for (std::size_t t = 0; t < sites.size(); ++t)
        dimsCons[t] = cell.subcell_dims[static_cast<std::size_t>(sites[t].subcell - 1)];
    for (std::size_t t = sites.size(); t-- > 1;)
        consStrides[t - 1] = consStrides[t] * dimsCons[t];
    const auto canDims = win.slot_dims(cell);
    std::vector<Index> canStrides(canDims.size(), 1);
    for (std::size_t t = canDims.size(); t-- > 1;)
        canStrides[t - 1] = canStrides[t] * canDims[t];
    std::vector<Index> map(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        Index rem = i, out = 0;
        for (std::size_t t = 0; t < sites.size(); ++t) {
            out += (rem / consStrides[t]) * canStrides[win.position(sites[t])];
            rem %= consStrides[t];
        }
        map[static_cast<std::size_t>(i)] = out;
    }
    return map;
}

ConjugatedCellBasis::ConjugatedCellBasis(const GroupedCircuit& gc, int z,
                                         Direction direction,
                                         const ConjugationOptions& opts) {
    const Lattice& lat = gc.base().lattice;
    cell_ = lat.cell;
    source_ = gc.cell_window(z);
    toCanonical_ = construction_index_map(gc, z);
    sourceDim_ = source_.dimension(lat.cell);

    Window w = source_;
    std::vector<Site> tracked = source_.sites();
    Matrix u = Matrix::Identity(sourceDim_, sourceDim_);

    auto peel = [&](const Layer& layer) {
        if (const auto* adv = std::get_if<AdvectionLayer>(&layer)) {
            const int dir = direction == Direction::Forward ? +1 : -1;
            const auto dims = w.slot_dims(lat.cell);
            std::vector<Site> newSites(w.size());
            for (std::size_t t = 0; t < w.size(); ++t)
                newSites[t] = translate(
                    w.sites()[t],
                    dir * adv->offsets[static_cast<std::size_t>(w.sites()[t].subcell - 1)], lat);
            Window newWindow{newSites};
            std::vector<std::size_t> order(newSites.size());
            for (std::size_t t = 0; t < newSites.size(); ++t)
                order[newWindow.position(newSites[t])] = t;
            u = permute_slots(u, dims, order);
            w = newWindow;
            for (Site& s : tracked)
                s = translate(s, dir * adv->offsets[static_cast<std::size_t>(s.subcell - 1)], lat);
        } else {
            const auto& s = std::get<ScatteringLayer>(layer).s;
            std::set<int> cells;
            for (const Site& site : w.sites()) cells.insert(site.cell);
            std::vector<Site> full;
            for (int x : cells)
                for (int j = 1; j <= lat.cell.subcell_count(); ++j)
                    full.push_back(Site{x, j});
            if (static_cast<int>(full.size()) > opts.site_cap)
                throw support_cap_error("support cap exceeded");
            Window enlarged{full};
            u = embed_operator(u, w, enlarged, lat.cell);
            Matrix conj = Matrix::Identity(1, 1);
            for (std::size_t c = 0; c < cells.size(); ++c) conj = kron(conj, s);
            u = direction == Direction::Forward ? Matrix(u * conj)
                                                : Matrix(u * conj.adjoint());
            w = enlarged;
        }
    };
    if (direction == Direction::Forward)
        for (auto it = gc.base().layers.rbegin(); it != gc.base().layers.rend(); ++it)
            peel(*it);
    else
        for (const Layer& layer : gc.base().layers) peel(layer);

    window_ = w;
    const Index dim = w.dimension(lat.cell);
    restDim_ = dim / sourceDim_;

    // Regroup rows of u by (source digits, rest digits).
    const auto dims = w.slot_dims(lat.cell);
    std::vector<Index> strides(dims.size(), 1);
    for (std::size_t t = dims.size(); t-- > 1;) strides[t - 1] = strides[t] * dims[t];
    std::vector<bool> isTracked(dims.size(), false);
    std::vector<std::size_t> pos(tracked.size());
    for (std::size_t t = 0; t < tracked.size(); ++t) {
        pos[t] = w.position(tracked[t]);
        isTracked[pos[t]] = true;
    }
    const auto srcDims = source_.slot_dims(lat.cell);
    std::vector<Index> srcStrides(srcDims.size(), 1);
    for (std::size_t t = srcDims.size(); t-- > 1;)
        srcStrides[t - 1] = srcStrides[t] * srcDims[t];
    blocks_.resize(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        Index rem = i, a = 0, r = 0;
        Index restStride = restDim_;
        std::vector<Index> digit(dims.size());
        for (std::size_t t = 0; t < dims.size(); ++t) {
            digit[t] = rem / strides[t];
            rem %= strides[t];
        }
        for (std::size_t t = 0; t < pos.size(); ++t) a += digit[pos[t]] * srcStrides[t];
        for (std::size_t t = 0; t < dims.size(); ++t) {
            if (isTracked[t]) continue;
            restStride /= dims[t];
            r += digit[t] * restStride;
        }
        blocks_.row(a * restDim_ + r) = u.row(i);
    }
}

Matrix ConjugatedCellBasis::unit(Index a, Index b) const {
    return blocks_.middleRows(a * restDim_, restDim_).adjoint() *
           blocks_.middleRows(b * restDim_, restDim_);
}

Matrix ConjugatedCellBasis::conjugate(const Matrix& a) const {
    if (a.rows() != sourceDim_ || a.cols() != sourceDim_)
        throw std::invalid_argument("ConjugatedCellBasis: operator side mismatch");
    return blocks_.adjoint() * kron(a, Matrix::Identity(restDim_, restDim_)) * blocks_;
}

std::vector<Matrix> ConjugatedCellBasis::restriction_blocks(const Window& target) const {
    const auto dims = window_.slot_dims(cell_);
    const Index dim = window_.dimension(cell_);
    std::vector<Index> strides(dims.size(), 1);
    for (std::size_t t = dims.size(); t-- > 1;) strides[t - 1] = strides[t] * dims[t];
    std::vector<bool> inTarget(dims.size(), false);
    Index targetDim = 1;
    for (std::size_t t = 0; t < dims.size(); ++t)
        if (target.contains(window_.sites()[t])) {
            inTarget[t] = true;
            targetDim *= dims[t];
        }
    if (targetDim != target.dimension(cell_))
        throw std::invalid_argument("restriction_blocks: target not inside the window");
    const Index offDim = dim / targetDim;
    // Column index -> (target digits, traced-out digits), canonical order.
    std::vector<Index> tgt(static_cast<std::size_t>(dim)), off(static_cast<std::size_t>(dim));
    for (Index c = 0; c < dim; ++c) {
        Index rem = c, i = 0, k = 0;
        for (std::size_t t = 0; t < dims.size(); ++t) {
            const Index digit = rem / strides[t];
            rem %= strides[t];
            if (inTarget[t])
                i = i * dims[t] + digit;
            else
                k = k * dims[t] + digit;
        }
        tgt[static_cast<std::size_t>(c)] = i;
        off[static_cast<std::size_t>(c)] = k;
    }
    std::vector<Matrix> out(static_cast<std::size_t>(sourceDim_));
    for (Index x = 0; x < sourceDim_; ++x) {
        Matrix q(restDim_ * offDim, targetDim);
        for (Index t = 0; t < restDim_; ++t)
            for (Index c = 0; c < dim; ++c)
                q(t * offDim + off[static_cast<std::size_t>(c)],
                  tgt[static_cast<std::size_t>(c)]) = blocks_(x * restDim_ + t, c);
        out[static_cast<std::size_t>(x)] = std::move(q);
    }
    return out;
}

bool NeighborhoodReport::structurally_reversible() const {
    std::set<int> negated;
    for (int o : forward) negated.insert(-o);
    return negated == backward;
}

std::vector<LocalOperator> cell_matrix_units(const GroupedCircuit& gc, int y) {
    const Window win = gc.cell_window(y);
    const CellStructure& cell = gc.base().lattice.cell;
    const Index dim = win.dimension(cell);
    // A matrix unit in construction order is a matrix unit at permuted
    // basis indices in canonical order.
    const auto toCanonical = construction_index_map(gc, y);
    std::vector<LocalOperator> units;
    units.reserve(static_cast<std::size_t>(dim) * dim);
    for (Index a = 0; a < dim; ++a)
        for (Index b = 0; b < dim; ++b) {
            Matrix u = Matrix::Zero(dim, dim);
            u(toCanonical[static_cast<std::size_t>(a)],
              toCanonical[static_cast<std::size_t>(b)]) = 1.0;
            units.push_back(LocalOperator{win, std::move(u)});
        }
    return units;
}

std::set<int> support_offsets(const GroupedCircuit& gc, const LocalOperator& op, int z) {
    std::set<int> offsets;
    for (const Site& s : op.window.sites())
        offsets.insert(gc.grouped_lattice().relative_offset(gc.cell_of_site(s), z));
    return offsets;
}

NeighborhoodReport minimal_neighborhood(const GroupedCircuit& gc,
                                        const ConjugationOptions& opts) {
    const int z = gc.grouped_lattice().n_cells / 2;
    const CellStructure& cell = gc.base().lattice.cell;
    NeighborhoodReport report;
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        ConjugatedCellBasis basis(gc, z, dir, opts);
        const Window& w = basis.window();
        const auto dims = w.slot_dims(cell);
        // Summed over all conjugated units, the squared residual against an
        // identity factor at one slot is
        //   n * rest_dim - sum_ab ||tr_slot unit(a,b)||^2 / d_slot,
        // and the trace-norm sum is ||K K^dag||^2 for the stacked
        // restriction blocks K. Zero residual means no unit touches the
        // slot, so the slot's cell is outside the support union.
        const double total = static_cast<double>(basis.source_dim()) *
                             static_cast<double>(basis.source_dim()) *
                             static_cast<double>(basis.rest_dim());
        const double thresh = std::max(opts.tol, 1e-10) * total;
        std::set<int>& out = dir == Direction::Forward ? report.forward : report.backward;
        for (std::size_t slot = 0; slot < w.size(); ++slot) {
            std::vector<Site> restSites = w.sites();
            restSites.erase(restSites.begin() + static_cast<std::ptrdiff_t>(slot));
            const auto q = basis.restriction_blocks(Window{restSites});
            Matrix g = Matrix::Zero(q[0].rows(), q[0].rows());
            for (const Matrix& qx : q) g += qx * qx.adjoint();
            const double deficit =
                total - g.squaredNorm() / static_cast<double>(dims[slot]);
            if (deficit > thresh)
                out.insert(gc.grouped_lattice().relative_offset(
                    gc.cell_of_site(w.sites()[slot]), z));
        }
        if (out.empty()) out.insert(0);  // identity evolution
    }
    return report;
}

NeighborhoodReport minimal_neighborhood(const Circuit& circuit,
                                        const ConjugationOptions& opts) {
    return minimal_neighborhood(
        regroup(circuit, CellConstruction::identity(circuit.lattice.cell.subcell_count())),
        opts);
}

}  // namespace qcat
