#include "gaussflow/state_io.hpp"

#include <fstream>

namespace gaussflow {

namespace {

using nlohmann::json;

json signature_to_json(const Signature& sig) {
    return json{{"kind", sig.pseudo() ? "pseudo_euclidean" : "euclidean"},
                {"m", sig.m},
                {"n", sig.n}};
}

Signature signature_from_json(const json& j) {
    Signature sig;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean")
        sig.kind = SignatureKind::Euclidean;
    else if (kind == "pseudo_euclidean")
        sig.kind = SignatureKind::PseudoEuclidean;
    else
        throw ConfigError("state signature.kind must be 'euclidean' or 'pseudo_euclidean'");
    sig.m = j.at("m").get<int>();
    sig.n = j.at("n").get<int>();
    sig.validate();
    return sig;
}

json grid_to_json(const Grid& grid) {
    return json{{"sizes", grid.sizes()}, {"periods", grid.periods()}};
}

Grid grid_from_json(const json& j) {
    return Grid(j.at("sizes").get<std::vector<int>>(), j.at("periods").get<std::vector<double>>());
}

}  // namespace

json state_to_json(const GraphState& state) {
    json j;
    j["representation"] = "graph";
    j["signature"] = signature_to_json(state.sig);
    j["grid"] = grid_to_json(state.grid);
    j["time"] = state.time;
    json slope = json::array();
    for (int a = 0; a < state.sig.n; ++a) {
        json row = json::array();
        for (int i = 0; i < state.sig.m; ++i) row.push_back(state.slope.at(a, i));
        slope.push_back(row);
    }
    j["slope"] = slope;
    j["values"] = state.values;
    return j;
}

json state_to_json(const ParametricState& state) {
    json j;
    j["representation"] = "parametric";
    j["signature"] = signature_to_json(state.sig);
    j["grid"] = grid_to_json(state.grid);
    j["time"] = state.time;
    j["lattice"] = state.lattice;
    j["displacement"] = state.displacement;
    return j;
}

StateVariant state_from_json(const json& j) {
    const std::string rep = j.at("representation").get<std::string>();
    const Signature sig = signature_from_json(j.at("signature"));
    const Grid grid = grid_from_json(j.at("grid"));
    if (rep == "graph") {
        GraphState state(sig, grid);
        state.time = j.at("time").get<double>();
        state.values = j.at("values").get<std::vector<std::vector<double>>>();
        if (j.contains("slope")) {
            const json& s = j.at("slope");
            for (int a = 0; a < sig.n; ++a)
                for (int i = 0; i < sig.m; ++i) state.slope.at(a, i) = s[a][i].get<double>();
        }
        state.validate();
        return state;
    }
    if (rep == "parametric") {
        ParametricState state(sig, grid);
        state.time = j.at("time").get<double>();
        state.lattice = j.at("lattice").get<std::vector<std::vector<double>>>();
        state.displacement = j.at("displacement").get<std::vector<std::vector<double>>>();
        state.validate();
        return state;
    }
    throw ConfigError("state representation must be 'graph' or 'parametric'");
}

void save_state(const StateVariant& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open state file for writing: " + path);
    const json j = std::visit([](const auto& s) { return state_to_json(s); }, state);
    out << j.dump(2) << "\n";
}

StateVariant load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("state JSON parse error: ") + e.what());
    }
    return state_from_json(j);
}

}  // namespace gaussflow
