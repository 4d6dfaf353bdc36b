#include "gaussflow/config.hpp"

#include <fstream>
#include <set>

namespace gaussflow {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
    if (!j[key].is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
    return j[key].get<double>();
}

Signature parse_signature(const json& j) {
    require_keys(j, "signature", {"kind", "m", "n"});
    Signature sig;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean")
        sig.kind = SignatureKind::Euclidean;
    else if (kind == "pseudo_euclidean")
        sig.kind = SignatureKind::PseudoEuclidean;
    else
        throw ConfigError("signature.kind must be 'euclidean' or 'pseudo_euclidean'");
    sig.m = j.at("m").get<int>();
    sig.n = j.at("n").get<int>();
    sig.validate();
    return sig;
}

SmallMatrix parse_matrix(const json& j, int rows, int cols, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ConfigError(where + " must be an array of " + std::to_string(rows) + " rows");
    SmallMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ConfigError(where + " rows must have " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) out.at(r, c) = row[c].get<double>();
    }
    return out;
}

}  // namespace

MonitorSuite RunConfig::make_monitor_suite() const {
    MonitorSuite suite;
    suite.sig = sig;
    suite.rescaled = flow.rescaled;
    suite.enabled = monitors;
    if (ball_radius) suite.ball = BallParams::for_radius(*ball_radius);
    suite.center = ball_center;
    suite.huisken = huisken;
    suite.identity_probe_dt = identity_probe_dt;
    suite.validate();
    return suite;
}

RunConfig parse_run_config(const nlohmann::json& j) {
    require_keys(j, "config",
                 {"signature", "grid", "initial", "flow", "ball", "monitors", "output"});
    RunConfig cfg;
    cfg.sig = parse_signature(j.at("signature"));
    const int m = cfg.sig.m;
    const int n = cfg.sig.n;

    {
        const json& g = j.at("grid");
        require_keys(g, "grid", {"sizes", "periods"});
        if (!g.contains("sizes") || !g.at("sizes").is_array())
            throw ConfigError("grid.sizes must be an array");
        cfg.grid_sizes = g.at("sizes").get<std::vector<int>>();
        if (static_cast<int>(cfg.grid_sizes.size()) != m)
            throw ConfigError("grid.sizes must have m entries");
        if (g.contains("periods")) {
            cfg.grid_periods = g.at("periods").get<std::vector<double>>();
            if (static_cast<int>(cfg.grid_periods.size()) != m)
                throw ConfigError("grid.periods must have m entries");
        } else {
            cfg.grid_periods.assign(m, 2.0 * kPi);
        }
    }

    {
        const json& ini = j.at("initial");
        require_keys(ini, "initial",
                     {"generator", "amplitude", "target_gauss_radius", "target_sigma_max",
                      "seed", "max_modes", "slope"});
        const std::string gen = ini.at("generator").get<std::string>();
        if (gen == "flat")
            cfg.initial.generator = Generator::Flat;
        else if (gen == "sine")
            cfg.initial.generator = Generator::Sine;
        else if (gen == "band_limited_random")
            cfg.initial.generator = Generator::BandLimitedRandom;
        else if (gen == "bump")
            cfg.initial.generator = Generator::Bump;
        else
            throw ConfigError("initial.generator must be one of flat|sine|band_limited_random|bump");
        int amplitude_specs = 0;
        if (ini.contains("amplitude")) {
            cfg.initial.amplitude = get_number(ini, "amplitude", "initial");
            ++amplitude_specs;
        }
        if (ini.contains("target_gauss_radius")) {
            cfg.initial.target_gauss_radius = get_number(ini, "target_gauss_radius", "initial");
            ++amplitude_specs;
        }
        if (ini.contains("target_sigma_max")) {
            cfg.initial.target_sigma_max = get_number(ini, "target_sigma_max", "initial");
            ++amplitude_specs;
        }
        if (cfg.initial.generator != Generator::Flat && amplitude_specs != 1)
            throw ConfigError(
                "initial requires exactly one of amplitude | target_gauss_radius | "
                "target_sigma_max");
        if (ini.contains("seed")) cfg.initial.seed = ini.at("seed").get<std::uint64_t>();
        if (ini.contains("max_modes")) cfg.initial.max_modes = ini.at("max_modes").get<int>();
        if (cfg.initial.max_modes < 1 || cfg.initial.max_modes > 8)
            throw ConfigError("initial.max_modes must lie in [1, 8]");
        if (ini.contains("slope")) cfg.initial.slope = parse_matrix(ini.at("slope"), n, m, "initial.slope");
    }

    {
        const json& f = j.at("flow");
        require_keys(f, "flow",
                     {"representation", "stepper", "cfl_factor", "t_end", "monitor_every",
                      "rescaled", "identity_probe_dt"});
        const std::string rep = f.at("representation").get<std::string>();
        if (rep == "graph")
            cfg.flow.representation = Representation::Graph;
        else if (rep == "parametric")
            cfg.flow.representation = Representation::Parametric;
        else
            throw ConfigError("flow.representation must be 'graph' or 'parametric'");
        if (f.contains("stepper")) {
            const std::string st = f.at("stepper").get<std::string>();
            if (st == "euler")
                cfg.flow.stepper = Stepper::ExplicitEuler;
            else if (st == "rk4")
                cfg.flow.stepper = Stepper::RK4;
            else
                throw ConfigError("flow.stepper must be 'euler' or 'rk4'");
        }
        if (f.contains("cfl_factor")) cfg.flow.cfl_factor = get_number(f, "cfl_factor", "flow");
        cfg.flow.t_end = get_number(f, "t_end", "flow");
        if (f.contains("monitor_every"))
            cfg.flow.monitor_every = f.at("monitor_every").get<long>();
        if (f.contains("rescaled")) cfg.flow.rescaled = f.at("rescaled").get<bool>();
        if (f.contains("identity_probe_dt"))
            cfg.identity_probe_dt = get_number(f, "identity_probe_dt", "flow");
        cfg.flow.seed = cfg.initial.seed;
        cfg.flow.validate();
    }

    if (j.contains("ball")) {
        const json& b = j.at("ball");
        require_keys(b, "ball", {"radius", "center"});
        cfg.ball_radius = get_number(b, "radius", "ball");
        if (b.contains("center") && !b.at("center").is_string())
            cfg.ball_center = parse_matrix(b.at("center"), m, m + n, "ball.center");
        else if (b.contains("center") && b.at("center").get<std::string>() != "default")
            throw ConfigError("ball.center must be 'default' or an m x (m+n) frame");
    }

    if (j.contains("monitors")) {
        const json& mo = j.at("monitors");
        require_keys(mo, "monitors", {"enabled", "slack", "huisken", "growth"});
        if (mo.contains("enabled")) {
            for (const auto& name : mo.at("enabled").get<std::vector<std::string>>()) {
                if (name == "gauss_radius")
                    cfg.monitors.gauss_radius = true;
                else if (name == "weighted")
                    cfg.monitors.weighted = true;
                else if (name == "height")
                    cfg.monitors.height = true;
                else if (name == "normal_position")
                    cfg.monitors.normal_position = true;
                else if (name == "huisken")
                    cfg.monitors.huisken = true;
                else if (name == "self_similar")
                    cfg.monitors.self_similar = true;
                else if (name == "identity_residuals")
                    cfg.monitors.identity_residuals = true;
                else
                    throw ConfigError("unknown monitor '" + name + "'");
            }
        }
        if (mo.contains("slack")) {
            const json& s = mo.at("slack");
            require_keys(s, "monitors.slack",
                         {"gauss_radius", "weighted", "decay", "height", "sup_B2_rel",
                          "sup_B2_abs", "huisken", "self_similar", "c_over_t"});
            if (s.contains("gauss_radius")) cfg.slacks.gauss_radius = s.at("gauss_radius").get<double>();
            if (s.contains("weighted")) cfg.slacks.weighted = s.at("weighted").get<double>();
            if (s.contains("decay")) cfg.slacks.decay = s.at("decay").get<double>();
            if (s.contains("height")) cfg.slacks.height = s.at("height").get<double>();
            if (s.contains("sup_B2_rel")) cfg.slacks.sup_B2_rel = s.at("sup_B2_rel").get<double>();
            if (s.contains("sup_B2_abs")) cfg.slacks.sup_B2_abs = s.at("sup_B2_abs").get<double>();
            if (s.contains("huisken")) cfg.slacks.huisken = s.at("huisken").get<double>();
            if (s.contains("self_similar")) cfg.slacks.self_similar = s.at("self_similar").get<double>();
            if (s.contains("c_over_t")) cfg.slacks.c_over_t = s.at("c_over_t").get<double>();
        }
        if (mo.contains("huisken")) {
            const json& h = mo.at("huisken");
            require_keys(h, "monitors.huisken", {"x0", "t0", "exponent"});
            HuiskenSpec spec;
            spec.x0 = h.at("x0").get<std::vector<double>>();
            if (static_cast<int>(spec.x0.size()) != m + n)
                throw ConfigError("monitors.huisken.x0 must have m+n entries");
            spec.t0 = get_number(h, "t0", "monitors.huisken");
            if (h.contains("exponent")) spec.exponent = h.at("exponent").get<double>();
            cfg.huisken = spec;
        }
        if (mo.contains("growth")) {
            const json& g = mo.at("growth");
            require_keys(g, "monitors.growth", {"c_prime", "delta"});
            cfg.growth = {get_number(g, "c_prime", "monitors.growth"),
                          get_number(g, "delta", "monitors.growth")};
        }
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        require_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) cfg.output_directory = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            for (const auto& f : o.at("formats").get<std::vector<std::string>>()) {
                if (f == "csv" || f == "summary") continue;  // always written
                if (f == "state")
                    cfg.output_state = true;
                else if (f == "fields")
                    cfg.output_fields = true;
                else
                    throw ConfigError("unknown output format '" + f + "'");
            }
        }
    }

    if (cfg.monitors.huisken && cfg.huisken && cfg.huisken->t0 <= cfg.flow.t_end)
        throw ConfigError("monitors.huisken.t0 must exceed flow.t_end");

    // Cross-field checks mirrored from the monitor suite; surface them as
    // config errors at this boundary.
    try {
        cfg.make_monitor_suite();
    } catch (const ConfigError&) {
        throw;
    } catch (const FlowError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    return parse_run_config(j);
}

}  // namespace gaussflow
