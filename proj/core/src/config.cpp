#include "qcat/config.hpp"

#include "qcat/classify.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace qcat {

using nlohmann::json;

namespace {

Matrix parse_matrix(const json& rows) {
    if (!rows.is_array() || rows.empty())
        throw config_error("scattering matrix must be a non-empty array of rows");
    const auto n = static_cast<Index>(rows.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw config_error("scattering matrix must be square");
        for (Index j = 0; j < n; ++j) {
            const auto& e = row[static_cast<std::size_t>(j)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw config_error("matrix entries must be [re, im] pairs");
            m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

CircuitConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON: ") + e.what());
    }
    CircuitConfig cfg;
    if (!doc.contains("subcell_dims") || !doc["subcell_dims"].is_array())
        throw config_error("missing field: subcell_dims");
    for (const auto& d : doc["subcell_dims"]) {
        if (!d.is_number_integer() || d.get<Index>() < 2)
            throw config_error("subcell_dims entries must be integers >= 2");
        cfg.subcell_dims.push_back(d.get<Index>());
    }
    const int d = static_cast<int>(cfg.subcell_dims.size());
    if (d < 1) throw config_error("subcell_dims must be non-empty");

    if (doc.contains("lattice_cells")) {
        if (!doc["lattice_cells"].is_number_integer() || doc["lattice_cells"].get<int>() < 2)
            throw config_error("lattice_cells must be an integer >= 2");
        cfg.lattice_cells = doc["lattice_cells"].get<int>();
    }

    if (!doc.contains("layers") || !doc["layers"].is_array())
        throw config_error("missing field: layers");
    Index cellDim = 1;
    for (Index x : cfg.subcell_dims) cellDim *= x;
    for (const auto& layer : doc["layers"]) {
        if (!layer.contains("kind")) throw config_error("layer missing kind");
        const std::string kind = layer["kind"].get<std::string>();
        if (kind == "advection") {
            if (!layer.contains("offsets") || !layer["offsets"].is_array() ||
                static_cast<int>(layer["offsets"].size()) != d)
                throw config_error("advection offsets must match subcell_dims length");
            std::vector<int> offsets;
            for (const auto& e : layer["offsets"]) {
                if (!e.is_number_integer()) throw config_error("offsets must be integers");
                offsets.push_back(e.get<int>());
            }
            cfg.layers.push_back(AdvectionLayer{std::move(offsets)});
        } else if (kind == "scattering") {
            if (!layer.contains("matrix")) throw config_error("scattering layer missing matrix");
            Matrix m = parse_matrix(layer["matrix"]);
            if (m.rows() != cellDim)
                throw config_error("scattering matrix side must equal the cell dimension");
            if (!is_unitary(m, 1e-8))
                throw config_error("scattering matrix is not unitary (tol 1e-8)");
            // Decimal literals land within machine precision of unitary;
            // anything merely within 1e-8 is snapped to the nearest unitary.
            if (!is_unitary(m, 1e-12)) m = closest_unitary(m);
            cfg.layers.push_back(ScatteringLayer{std::move(m)});
        } else {
            throw config_error("unknown layer kind: " + kind);
        }
    }

    if (doc.contains("constructions")) {
        if (!doc["constructions"].is_array())
            throw config_error("constructions must be an array");
        for (const auto& c : doc["constructions"]) {
            if (!c.contains("shift") || !c["shift"].is_array() ||
                static_cast<int>(c["shift"].size()) != d)
                throw config_error("construction shift must match subcell_dims length");
            CellConstruction cons;
            for (const auto& e : c["shift"]) cons.shift_offsets.push_back(e.get<int>());
            cons.group = c.value("m", 1);
            if (cons.group < 1) throw config_error("construction m must be >= 1");
            cfg.constructions.push_back(std::move(cons));
        }
    }
    return cfg;
}

CircuitConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const CircuitConfig& config) {
    json doc;
    doc["subcell_dims"] = config.subcell_dims;
    if (config.lattice_cells) doc["lattice_cells"] = *config.lattice_cells;
    doc["layers"] = json::array();
    for (const Layer& layer : config.layers) {
        json entry;
        if (const auto* adv = std::get_if<AdvectionLayer>(&layer)) {
            entry["kind"] = "advection";
            entry["offsets"] = adv->offsets;
        } else {
            entry["kind"] = "scattering";
            entry["matrix"] = matrix_to_json(std::get<ScatteringLayer>(layer).s);
        }
        doc["layers"].push_back(std::move(entry));
    }
    if (!config.constructions.empty()) {
        doc["constructions"] = json::array();
        for (const auto& c : config.constructions)
            doc["constructions"].push_back({{"shift", c.shift_offsets}, {"m", c.group}});
    }
    return doc.dump(2);
}

Circuit build_circuit(const CircuitConfig& config, int group) {
    const int n = config.lattice_cells
                      ? *config.lattice_cells
                      : default_lattice_cells(config.layers, group);
    Circuit circuit{Lattice(n, CellStructure(config.subcell_dims)), config.layers};
    validate(circuit, 1e-8);
    return circuit;
}

bool config_equal(const CircuitConfig& a, const CircuitConfig& b) {
    if (a.subcell_dims != b.subcell_dims || a.lattice_cells != b.lattice_cells)
        return false;
    if (a.layers.size() != b.layers.size() ||
        a.constructions.size() != b.constructions.size())
        return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        const auto* advA = std::get_if<AdvectionLayer>(&a.layers[i]);
        const auto* advB = std::get_if<AdvectionLayer>(&b.layers[i]);
        if ((advA == nullptr) != (advB == nullptr)) return false;
        if (advA) {
            if (advA->offsets != advB->offsets) return false;
        } else {
            const auto& sa = std::get<ScatteringLayer>(a.layers[i]).s;
            const auto& sb = std::get<ScatteringLayer>(b.layers[i]).s;
            if (sa.rows() != sb.rows() || (sa - sb).cwiseAbs().maxCoeff() > 0) return false;
        }
    }
    for (std::size_t i = 0; i < a.constructions.size(); ++i)
        if (a.constructions[i].shift_offsets != b.constructions[i].shift_offsets ||
            a.constructions[i].group != b.constructions[i].group)
            return false;
    return true;
}

}  // namespace qcat
