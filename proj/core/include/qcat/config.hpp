#pragma once

#include "qcat/qca.hpp"

#include <optional>
#include <string>

namespace qcat {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed circuit definition file (JSON): subcell dimensions, optional
/// lattice size, layer list, optional cell constructions.
struct CircuitConfig {
    std::vector<Index> subcell_dims;
    std::optional<int> lattice_cells;
    std::vector<Layer> layers;
    std::vector<CellConstruction> constructions;
};

CircuitConfig parse_config(const std::string& json_text);
CircuitConfig load_config(const std::string& path);
std::string serialize_config(const CircuitConfig& config);

/// Builds the circuit; lattice size comes from the config or, if absent,
/// is auto-sized to m * max(5, diameter + 3).
Circuit build_circuit(const CircuitConfig& config, int group = 1);

bool config_equal(const CircuitConfig& a, const CircuitConfig& b);

}  // namespace qcat
