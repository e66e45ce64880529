// Command-line front-end: neighborhood detection, QLGA classification,
// state-vector simulation, and the scattering product-property check.

#include "qcat/classify.hpp"
#include "qcat/config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace qcat;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;
constexpr int kExitAnomaly = 4;

std::string offsets_to_string(const std::set<int>& s) {
    std::string out = "{";
    for (int o : s) out += (out.size() > 1 ? ", " : "") + std::to_string(o);
    return out + "}";
}

std::string shift_to_string(const std::vector<int>& shift) {
    std::string out = "(";
    for (std::size_t i = 0; i < shift.size(); ++i)
        out += (i ? "," : "") + std::to_string(shift[i]);
    return out + ")";
}

int cmd_neighborhood(const std::string& path) {
    const CircuitConfig cfg = load_config(path);
    const Circuit circuit = build_circuit(cfg);
    const NeighborhoodReport report = minimal_neighborhood(circuit);
    std::cout << "forward neighborhood:  " << offsets_to_string(report.forward) << "\n";
    std::cout << "backward neighborhood: " << offsets_to_string(report.backward) << "\n";
    std::cout << "structural reversibility (backward = -forward): "
              << (report.structurally_reversible() ? "ok" : "VIOLATED") << "\n";
    if (!report.structurally_reversible())
        throw anomaly_error("structural reversibility violated");
    return kExitOk;
}

json report_to_json(const CriterionReport& r) {
    json entry;
    entry["shift"] = r.construction.shift_offsets;
    entry["m"] = r.construction.group;
    entry["neighborhood"] = r.neighborhood;
    entry["pretest_passed"] = r.pretest_passed;
    json dims = json::object();
    for (const auto& [k, dim] : r.d_dims) dims[std::to_string(k)] = dim;
    entry["d_dims"] = std::move(dims);
    entry["product_span_dim"] = r.product_span_dim;
    entry["cell_alg_dim"] = r.cell_alg_dim;
    entry["verdict"] = r.verdict == Verdict::QLGA ? "QLGA" : "NotQLGA";
    if (r.subcell_dims) entry["subcell_dims"] = *r.subcell_dims;
    return entry;
}

int cmd_classify(const std::string& path, int max_m, bool as_json) {
    const CircuitConfig cfg = load_config(path);
    const Circuit circuit = build_circuit(cfg);
    const ScanResult scan = scan_constructions(circuit, max_m);
    if (as_json) {
        json doc;
        doc["reports"] = json::array();
        for (const auto& r : scan.reports) doc["reports"].push_back(report_to_json(r));
        doc["any_qlga"] = scan.any_qlga;
        std::cout << doc.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("%-12s %-3s %-14s %-24s %-6s %-6s %s\n", "shift", "m", "neighborhood",
                "dims", "span", "cell", "verdict");
    for (const auto& r : scan.reports) {
        std::string dims;
        if (!r.pretest_passed) {
            dims = "(pretest failed)";
        } else {
            for (const auto& [k, dim] : r.d_dims)
                dims += (dims.empty() ? "" : " ") + std::to_string(k) + ":" +
                        std::to_string(dim);
        }
        std::printf("%-12s %-3d %-14s %-24s %-6lld %-6lld %s\n",
                    shift_to_string(r.construction.shift_offsets).c_str(),
                    r.construction.group, offsets_to_string(r.neighborhood).c_str(),
                    dims.c_str(), static_cast<long long>(r.product_span_dim),
                    static_cast<long long>(r.cell_alg_dim),
                    r.verdict == Verdict::QLGA ? "QLGA" : "NotQLGA");
    }
    std::cout << (scan.any_qlga
                      ? "QLGA structure found among scanned constructions\n"
                      : "no QLGA structure found among scanned constructions\n");
    return kExitOk;
}

int cmd_simulate(const std::string& path, int steps, const std::string& initial,
                 const std::string& observable) {
    if (observable != "occupancy")
        throw config_error("unsupported observable: " + observable);
    const CircuitConfig cfg = load_config(path);
    const Circuit circuit = build_circuit(cfg);
    const Lattice& lat = circuit.lattice;
    const int d = lat.cell.subcell_count();
    const std::size_t nSites = static_cast<std::size_t>(lat.n_cells) * d;

    std::vector<Index> digits(nSites, 0);
    if (initial == "single-excitation") {
        const int mid = lat.n_cells / 2;
        for (int j = 0; j < d; ++j)
            digits[static_cast<std::size_t>(mid) * d + j] =
                lat.cell.subcell_dims[static_cast<std::size_t>(j)] - 1;
    } else {
        if (initial.size() != nSites)
            throw config_error("initial state needs one digit per site (" +
                               std::to_string(nSites) + ")");
        for (std::size_t t = 0; t < nSites; ++t) {
            if (initial[t] < '0' || initial[t] > '9')
                throw config_error("initial state digits must be 0-9");
            digits[t] = initial[t] - '0';
            if (digits[t] >= lat.cell.subcell_dims[t % d])
                throw config_error("initial state digit exceeds subcell dimension");
        }
    }
    StateVector state = basis_state(lat, digits);

    auto occupancy = [&](const StateVector& sv, int x) {
        const Index dW = lat.cell.cell_dim();
        Index low = 1;
        for (int c = lat.n_cells - 1; c > x; --c) low *= dW;
        const Index high = sv.amplitudes.size() / (low * dW);
        double quiescent = 0.0;
        for (Index h = 0; h < high; ++h)
            for (Index l = 0; l < low; ++l)
                quiescent += std::norm(sv.amplitudes(h * dW * low + l));
        return 1.0 - quiescent;
    };

    for (int t = 0; t <= steps; ++t) {
        std::printf("%d", t);
        for (int x = 0; x < lat.n_cells; ++x) std::printf("\t%.12g", occupancy(state, x));
        std::printf("\n");
        if (t < steps) state = simulate(std::move(state), circuit, 1);
    }
    return kExitOk;
}

int cmd_property(const std::string& path, int trials, std::uint64_t seed) {
    const CircuitConfig cfg = load_config(path);
    int index = 0;
    bool any = false;
    for (const Layer& layer : cfg.layers) {
        ++index;
        const auto* sc = std::get_if<ScatteringLayer>(&layer);
        if (!sc) continue;
        any = true;
        if (sc->s.rows() != 4)
            throw config_error("product property check needs 4x4 scattering matrices");
        const ProductPropertyReport r = product_property_check(sc->s, trials, seed);
        std::cout << "layer " << index << " (scattering):\n";
        std::cout << "  trials:                  " << r.trials << "\n";
        std::cout << "  rank-1 hits, I (x) A:    " << r.rank1_right << "\n";
        std::cout << "  rank-1 hits, A (x) I:    " << r.rank1_left << "\n";
        std::cout << "  A = I gives rank 1:      " << (r.identity_rank1 ? "yes" : "no")
                  << "\n";
    }
    if (!any) throw config_error("config contains no scattering layer");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QCA construction, Heisenberg-picture analysis, and QLGA classification"};
    app.require_subcommand(1);

    std::string path;
    int max_m = 2;
    bool as_json = false;
    int steps = 1;
    std::string initial = "single-excitation";
    std::string observable = "occupancy";
    int trials = 200;
    std::uint64_t seed = 1;

    auto* nbh = app.add_subcommand("neighborhood", "Minimal neighborhood of the circuit");
    nbh->add_option("config", path, "circuit definition file")->required();

    auto* cls = app.add_subcommand("classify", "Scan cell constructions for QLGA structure");
    cls->add_option("config", path, "circuit definition file")->required();
    cls->add_option("--max-m", max_m, "largest cell grouping to scan");
    cls->add_flag("--json", as_json, "machine-readable output");

    auto* sim = app.add_subcommand("simulate", "State-vector evolution with occupancy profile");
    sim->add_option("config", path, "circuit definition file")->required();
    sim->add_option("--steps", steps, "number of time steps");
    sim->add_option("--initial", initial, "basis digits per site, or 'single-excitation'");
    sim->add_option("--observable", observable, "per-cell observable (occupancy)");

    auto* prop = app.add_subcommand("property", "Product-preservation check per scattering matrix");
    prop->add_option("config", path, "circuit definition file")->required();
    prop->add_option("--trials", trials, "number of random samples");
    prop->add_option("--seed", seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (nbh->parsed()) return cmd_neighborhood(path);
        if (cls->parsed()) return cmd_classify(path, max_m, as_json);
        if (sim->parsed()) return cmd_simulate(path, steps, initial, observable);
        if (prop->parsed()) return cmd_property(path, trials, seed);
    } catch (const qcat::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qcat::too_large_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const qcat::support_cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const qcat::anomaly_error& e) {
        std::cerr << "anomaly: " << e.what() << "\n";
        return kExitAnomaly;
    }
    return kExitOk;
}
