#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussflow/flow.hpp"
#include "gaussflow/monitors.hpp"

namespace gaussflow {

/// Per-monitor slack used by the monotonicity verdicts. Values are the spec
/// defaults; a run config may override any of them.
struct SlackConfig {
    double gauss_radius = 5e-3;   // absolute, against the initial record
    double weighted = 1e-3;       // relative, stepwise
    double decay = 1e-3;          // relative, stepwise
    double height = 1e-6;         // absolute, stepwise
    double sup_B2_rel = 1e-6;     // relative, stepwise
    double sup_B2_abs = 1e-10;    // absolute, stepwise
    double huisken = 1e-2;        // absolute, stepwise (covers cell truncation)
    double self_similar = 1e-12;  // absolute, stepwise after t >= 1
    double c_over_t = 1e-2;       // relative, for the c/t fit comparison
};

/// Fully validated run configuration (strict JSON schema, unknown keys
/// rejected).
struct RunConfig {
    Signature sig;
    std::vector<int> grid_sizes;
    std::vector<double> grid_periods;
    InitialSpec initial;
    FlowConfig flow;
    std::optional<double> ball_radius;
    std::optional<SmallMatrix> ball_center;  // m x (m+n) orthonormal rows
    MonitorOptions monitors;
    SlackConfig slacks;
    std::optional<HuiskenSpec> huisken;
    std::optional<std::pair<double, double>> growth;  // C', delta
    double identity_probe_dt = 0.0;
    std::string output_directory = "out";
    bool output_state = false;
    bool output_fields = false;

    Grid make_grid() const { return Grid(grid_sizes, grid_periods); }
    MonitorSuite make_monitor_suite() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace gaussflow
