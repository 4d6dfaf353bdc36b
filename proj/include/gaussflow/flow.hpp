#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "gaussflow/monitor_record.hpp"
#include "gaussflow/surface.hpp"

namespace gaussflow {

enum class Representation { Graph, Parametric };
enum class Stepper { ExplicitEuler, RK4 };
enum class Termination { ReachedTEnd, Nan, NotSpaceLikeStop, CflCollapseStop };

std::string termination_name(Termination t);

struct FlowConfig {
    Representation representation = Representation::Graph;
    Stepper stepper = Stepper::ExplicitEuler;
    double cfl_factor = 0.9;
    double t_end = 1.0;
    long monitor_every = 10;
    bool rescaled = false;
    std::uint64_t seed = 1;
    double dt_floor = 1e-14;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

struct RhsEval {
    std::vector<std::vector<double>> velocity;  // component-major like the state dofs
    double max_inv_metric_eig = 0.0;            // max over nodes of lambda_max(g^{ij})
};

/// Nonparametric flow df^a/dt = g^{ij} d_i d_j f^a (order-2 stencils).
RhsEval graph_rhs(const GraphState& state);
/// Parametric flow dF/dt = H.
RhsEval parametric_rhs(const ParametricState& state);

/// dt = cfl * min_i h_i^2 / (2 m * max_inv_metric_eig).
double cfl_dt(const Grid& grid, double cfl_factor, double max_inv_metric_eig);
double cfl_dt(const GraphState& state, double cfl_factor);
double cfl_dt(const ParametricState& state, double cfl_factor);

/// One explicit step; returns false if the updated state contains NaN/Inf.
bool step(GraphState& state, double dt, Stepper stepper);
bool step(ParametricState& state, double dt, Stepper stepper);

// ---------------------------------------------------------------------------
// Rescaled flow
// ---------------------------------------------------------------------------

double rescaled_time(double t);  // log(2t + 1)

GraphState rescale(const GraphState& state);
ParametricState rescale(const ParametricState& state);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct RunResult {
    Termination termination = Termination::ReachedTEnd;
    std::string message;
    double final_time = 0.0;
    long steps = 0;
    std::vector<MonitorRecord> records;
    std::variant<GraphState, ParametricState> final_state;
};

template <class StateT>
using MonitorCallback = std::function<MonitorRecord(const StateT&, double t, long step)>;

RunResult run(const FlowConfig& config, GraphState initial,
              const MonitorCallback<GraphState>& monitor = {});
RunResult run(const FlowConfig& config, ParametricState initial,
              const MonitorCallback<ParametricState>& monitor = {});

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

enum class Generator { Flat, Sine, BandLimitedRandom, Bump };

struct InitialSpec {
    Generator generator = Generator::Flat;
    double amplitude = 0.0;
    std::optional<double> target_gauss_radius;  // rescale amplitude by bisection
    std::optional<double> target_sigma_max;     // sup-node largest gradient singular value
    std::uint64_t seed = 1;
    int max_modes = 3;                          // per-axis frequency cutoff
    std::optional<SmallMatrix> slope;           // linear part, n x m
};

GraphState make_initial_graph(const Signature& sig, const Grid& grid, const InitialSpec& spec);

/// sup-node Gauss distance to the coordinate plane (used for targeting).
double initial_gauss_radius(const GraphState& state);
/// sup-node largest singular value of the graph gradient.
double initial_sigma_max(const GraphState& state);

}  // namespace gaussflow
