#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcat/config.hpp"
#include "test_util.hpp"

#include <string>

using namespace qcat;

namespace {

std::string config_path(const char* name) {
    return std::string(QCAT_CONFIG_DIR) + "/" + name;
}

const char* kMinimal = R"({
  "subcell_dims": [2, 2],
  "layers": [{ "kind": "advection", "offsets": [1, -1] }]
})";

}  // namespace

TEST_CASE("shipped configs parse and build valid circuits") {
    for (const char* name :
         {"paper_main.cfg", "paper_s1_identity.cfg", "paper_s2_identity.cfg", "trivial.cfg"}) {
        CircuitConfig cfg = load_config(config_path(name));
        CHECK(cfg.subcell_dims == std::vector<Index>{2, 2});
        Circuit c = build_circuit(cfg);
        CHECK_NOTHROW(validate(c));
        CHECK(c.lattice.n_cells >= 5);
    }
    CircuitConfig main = load_config(config_path("paper_main.cfg"));
    CHECK(main.layers.size() == 4);
    CHECK(main.constructions.size() == 2);
    CHECK(main.constructions[0].group == 2);

    Circuit c = build_circuit(main);
    const auto& s = std::get<ScatteringLayer>(c.layers[1]).s;
    CHECK(testutil::max_diff(s, testutil::paper_scattering()) < 1e-15);
}

TEST_CASE("serialize/parse round trip is exact") {
    for (const char* name :
         {"paper_main.cfg", "paper_s1_identity.cfg", "paper_s2_identity.cfg", "trivial.cfg"}) {
        CircuitConfig cfg = load_config(config_path(name));
        CircuitConfig again = parse_config(serialize_config(cfg));
        CHECK(config_equal(cfg, again));
    }
    CircuitConfig minimal = parse_config(kMinimal);
    CHECK(config_equal(minimal, parse_config(serialize_config(minimal))));
}

TEST_CASE("lattice_cells overrides the automatic sizing") {
    CircuitConfig cfg = parse_config(R"({
      "subcell_dims": [2, 2],
      "lattice_cells": 7,
      "layers": [{ "kind": "advection", "offsets": [0, 0] }]
    })");
    CHECK(build_circuit(cfg).lattice.n_cells == 7);
    CircuitConfig noOverride = parse_config(kMinimal);
    CHECK(build_circuit(noOverride).lattice.n_cells == 5);
}

TEST_CASE("near-unitary matrices are snapped, exact ones kept verbatim") {
    CircuitConfig cfg = parse_config(R"({
      "subcell_dims": [2],
      "layers": [{ "kind": "scattering", "matrix": [
        [[1.000000001, 0], [0, 0]],
        [[0, 0], [1, 0]]
      ] }]
    })");
    const auto& s = std::get<ScatteringLayer>(cfg.layers[0]).s;
    CHECK(is_unitary(s, 1e-12));
}

TEST_CASE("malformed configs are rejected with config_error") {
    auto rejects = [](const char* text) {
        CHECK_THROWS_AS(parse_config(text), config_error);
    };
    rejects("not json at all");
    rejects(R"({"layers": []})");
    rejects(R"({"subcell_dims": [2, 1], "layers": []})");
    rejects(R"({"subcell_dims": [2, 2]})");
    rejects(R"({"subcell_dims": [2, 2], "lattice_cells": 1, "layers": []})");
    rejects(R"({"subcell_dims": [2, 2], "layers": [{"kind": "advection", "offsets": [1]}]})");
    rejects(R"({"subcell_dims": [2, 2], "layers": [{"kind": "warp", "offsets": [0, 0]}]})");
    rejects(R"({"subcell_dims": [2], "layers": [{"kind": "scattering",
              "matrix": [[[1, 0], [0, 0]]]}]})");
    rejects(R"({"subcell_dims": [2], "layers": [{"kind": "scattering",
              "matrix": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}]})");
    rejects(R"({"subcell_dims": [2], "layers": [{"kind": "scattering",
              "matrix": [[1, 0], [0, 1]]}]})");
    rejects(R"({"subcell_dims": [2, 2], "layers": [], "constructions": [{"shift": [0]}]})");
    rejects(R"({"subcell_dims": [2, 2], "layers": [],
              "constructions": [{"shift": [0, 0], "m": 0}]})");
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), config_error);
}
