#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gaussflow/config.hpp"
#include "gaussflow/identities.hpp"
#include "gaussflow/monitors.hpp"
#include "gaussflow/report.hpp"
#include "gaussflow/state_io.hpp"

namespace gf = gaussflow;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantViolation = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalStop = 3;

int cmd_run(const std::string& config_path) {
    gf::RunConfig cfg = gf::load_run_config(config_path);
    const gf::Grid grid = cfg.make_grid();
    gf::GraphState initial = gf::make_initial_graph(cfg.sig, grid, cfg.initial);
    const gf::MonitorSuite suite = cfg.make_monitor_suite();

    gf::RunResult result;
    if (cfg.flow.representation == gf::Representation::Graph) {
        result = gf::run(cfg.flow, initial,
                         [&](const gf::GraphState& s, double t, long step) {
                             return suite.evaluate(s, t, step);
                         });
    } else {
        gf::ParametricState pinit = gf::ParametricState::from_graph(initial);
        result = gf::run(cfg.flow, std::move(pinit),
                         [&](const gf::ParametricState& s, double t, long step) {
                             return suite.evaluate(s, t, step);
                         });
    }

    fs::create_directories(cfg.output_directory);
    {
        std::ofstream csv(fs::path(cfg.output_directory) / "monitors.csv");
        gf::write_monitors_csv(csv, result.records);
    }

    const gf::RunVerdicts verdicts = gf::compute_verdicts(result.records, cfg.slacks);
    const std::vector<std::string> enforced =
        gf::enforced_verdicts(cfg.sig, cfg.flow.rescaled);
    std::vector<std::string> violations;
    for (const std::string& name : enforced) {
        const auto it = verdicts.monotone.find(name);
        if (it != verdicts.monotone.end() && it->second.applicable && !it->second.ok)
            violations.push_back(name);
    }
    if (verdicts.c_fit_applicable && !verdicts.c_ok) violations.push_back("c_over_t");

    nlohmann::json summary;
    summary["termination"] = gf::termination_name(result.termination);
    summary["message"] = result.message;
    summary["final_time"] = result.final_time;
    summary["steps"] = result.steps;
    summary["records"] = result.records.size();
    summary["verdicts"] = gf::verdicts_to_json(verdicts);
    summary["enforced"] = enforced;
    summary["violations"] = violations;

    if (cfg.growth && cfg.monitors.normal_position &&
        result.termination == gf::Termination::ReachedTEnd) {
        gf::SnapshotOptions opt;
        opt.with_frames = true;
        const gf::GeometrySnapshot snap = std::visit(
            [&](const auto& s) { return gf::build_geometry(s, opt); }, result.final_state);
        summary["growth_condition_ok"] =
            gf::normal_growth_check(snap, cfg.growth->first, cfg.growth->second);
    }

    {
        std::ofstream js(fs::path(cfg.output_directory) / "summary.json");
        js << summary.dump(2) << "\n";
    }
    if (cfg.output_state) {
        const gf::StateVariant out_state = std::visit(
            [](const auto& s) { return gf::StateVariant(s); }, result.final_state);
        gf::save_state(out_state, (fs::path(cfg.output_directory) / "final_state.json").string());
    }
    if (cfg.output_fields && result.termination == gf::Termination::ReachedTEnd) {
        gf::SnapshotOptions opt;
        opt.with_frames = false;
        const gf::GeometrySnapshot snap = std::visit(
            [&](const auto& s) { return gf::build_geometry(s, opt); }, result.final_state);
        const gf::GaussField gauss = gf::gauss_data(snap, cfg.ball_center);
        const auto dump = [&](const std::string& name, std::span<const double> field) {
            std::ofstream os(fs::path(cfg.output_directory) / (name + ".csv"));
            gf::dump_field_csv(snap.grid, field, name, os);
        };
        dump("sqrt_g", snap.sqrt_g);
        dump("norm_B2", snap.norm_B2);
        dump("norm_H2", snap.norm_H2);
        dump("gauss_rho", gauss.rho);
        dump("gauss_w", gauss.w);
    }

    std::cout << "termination: " << gf::termination_name(result.termination);
    if (!result.message.empty()) std::cout << " (" << result.message << ")";
    std::cout << "\nrecords: " << result.records.size() << "\n";
    for (const std::string& name : enforced) {
        const auto it = verdicts.monotone.find(name);
        if (it == verdicts.monotone.end() || !it->second.applicable) continue;
        std::cout << (it->second.ok ? "[PASS] " : "[FAIL] ") << name
                  << " (worst excess " << it->second.worst_excess << ")\n";
    }
    if (verdicts.c_fit_applicable)
        std::cout << (verdicts.c_ok ? "[PASS] " : "[FAIL] ") << "c_over_t (c_fit "
                  << verdicts.c_fit << " vs bound " << verdicts.c_bound << ")\n";

    if (result.termination != gf::Termination::ReachedTEnd) return kExitNumericalStop;
    if (!violations.empty()) return kExitInvariantViolation;
    return kExitOk;
}

int cmd_identities(long samples, std::uint64_t seed) {
    const gf::IdentitySuiteReport report = gf::run_identity_suite(samples, seed);
    for (const auto& entry : report.entries)
        std::cout << (entry.pass ? "[PASS] " : "[FAIL] ") << entry.name
                  << " (worst relative margin " << entry.worst << ")\n";
    return report.all_pass() ? kExitOk : kExitInvariantViolation;
}

int cmd_gauss(const std::string& state_path) {
    const gf::StateVariant state = gf::load_state(state_path);
    gf::SnapshotOptions opt;
    opt.with_frames = false;
    const gf::GeometrySnapshot snap =
        std::visit([&](const auto& s) { return gf::build_geometry(s, opt); }, state);
    const gf::GaussField gauss = gf::gauss_data(snap);

    std::cout << "node";
    for (int i = 0; i < snap.grid.dim(); ++i) std::cout << " x" << i + 1;
    for (int i = 0; i < gauss.m; ++i) std::cout << " theta" << i + 1;
    std::cout << " rho w\n";
    char buf[40];
    for (long node = 0; node < snap.nodes(); ++node) {
        std::cout << node;
        for (int i = 0; i < snap.grid.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", snap.grid.coordinate(node, i));
            std::cout << " " << buf;
        }
        for (int i = 0; i < gauss.m; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", gauss.angles[node * gauss.m + i]);
            std::cout << " " << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", gauss.rho[node]);
        std::cout << " " << buf;
        std::snprintf(buf, sizeof buf, "%.17g", gauss.w[node]);
        std::cout << " " << buf << "\n";
    }
    return kExitOk;
}

int cmd_report(const std::string& input, const std::string& outdir) {
    std::ifstream in(input);
    if (!in) throw gf::ConfigError("cannot open " + input);
    const std::vector<gf::MonitorRecord> records = gf::read_monitors_csv(in);

    fs::create_directories(outdir);
    const auto write_series = [&](const std::string& name, auto getter) {
        std::ofstream os(fs::path(outdir) / (name + ".dat"));
        char buf[64];
        for (const gf::MonitorRecord& r : records) {
            const auto v = getter(r);
            if (!v) continue;
            std::snprintf(buf, sizeof buf, "%.17g %.17g", r.t, *v);
            os << buf << "\n";
        }
    };
    write_series("sup_B2", [](const gf::MonitorRecord& r) { return std::optional(r.sup_B2); });
    write_series("sup_H2", [](const gf::MonitorRecord& r) { return std::optional(r.sup_H2); });
    write_series("gauss_radius_sup", [](const gf::MonitorRecord& r) { return r.gauss_radius_sup; });
    write_series("height_sup", [](const gf::MonitorRecord& r) { return r.height_sup; });
    write_series("weighted_sup", [](const gf::MonitorRecord& r) { return r.weighted_sup; });
    write_series("decay_monitor", [](const gf::MonitorRecord& r) { return r.decay_monitor; });
    write_series("normal_position_sup",
                 [](const gf::MonitorRecord& r) { return r.normal_position_sup; });
    write_series("huisken_density", [](const gf::MonitorRecord& r) { return r.huisken_density; });
    write_series("self_similar_residual",
                 [](const gf::MonitorRecord& r) { return r.self_similar_residual; });
    write_series("res_g", [](const gf::MonitorRecord& r) { return r.res_g; });
    write_series("res_gamma", [](const gf::MonitorRecord& r) { return r.res_gamma; });
    write_series("res_B2", [](const gf::MonitorRecord& r) { return r.res_B2; });

    const gf::RunVerdicts verdicts = gf::compute_verdicts(records, gf::SlackConfig{});
    std::cout << gf::verdicts_to_json(verdicts).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean curvature flow simulator with Gauss-image verification"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "integrate a flow from a JSON config");
    run_cmd->add_option("--config", config_path, "run configuration file")->required();

    long samples = 10000;
    std::uint64_t seed = 12345;
    CLI::App* id_cmd = app.add_subcommand("identities", "random-instance identity checks");
    id_cmd->add_option("--samples", samples, "samples per (m, n) shape");
    id_cmd->add_option("--seed", seed, "random seed");

    std::string state_path;
    CLI::App* gauss_cmd = app.add_subcommand("gauss", "print per-node Gauss data of a state");
    gauss_cmd->add_option("--state", state_path, "state JSON file")->required();

    std::string report_input = "monitors.csv";
    std::string report_outdir = "report";
    CLI::App* report_cmd = app.add_subcommand("report", "plot data and verdicts from monitors.csv");
    report_cmd->add_option("--input", report_input, "monitors.csv path")->required();
    report_cmd->add_option("--outdir", report_outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(config_path);
        if (id_cmd->parsed()) return cmd_identities(samples, seed);
        if (gauss_cmd->parsed()) return cmd_gauss(state_path);
        if (report_cmd->parsed()) return cmd_report(report_input, report_outdir);
    } catch (const gf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const gf::FlowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalStop;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalStop;
    }
    return kExitConfigError;
}
