#pragma once

#include <optional>
#include <vector>

#include "gaussflow/flow.hpp"
#include "gaussflow/monitor_record.hpp"
#include "gaussflow/surface.hpp"

namespace gaussflow {

// ---------------------------------------------------------------------------
// Individual monitors
// ---------------------------------------------------------------------------

struct GaussRadiusResult {
    double rho_max = 0.0;
    GaussField gauss;
    std::vector<double> h1;  // per node, present when the ball carries epsilon
};

GaussRadiusResult gauss_radius(const GeometrySnapshot& snapshot, const BallParams& ball,
                               const std::optional<SmallMatrix>& center = std::nullopt);

struct WeightedMonitorResult {
    double weighted_sup = 0.0;   // sup ||B||^2 h1^q
    double decay_monitor = 0.0;  // sup (t ||B||^2 h1^q + h1^q)
};

WeightedMonitorResult weighted_monitor(const GeometrySnapshot& snapshot, const BallParams& ball,
                                       const GaussRadiusResult& radius, double t);

/// sup-node height sqrt(sum_alpha (F^{m+alpha})^2); works for both
/// representations through the snapshot positions.
double height_monitor(const GeometrySnapshot& snapshot);

/// sup-node squared ambient-normal position sum_alpha <F, e_alpha>^2.
double normal_position_monitor(const GeometrySnapshot& snapshot);
/// Growth condition sum_alpha <F,e_alpha>^2 <= C' (1 + |F|^2)^{1-delta}.
bool normal_growth_check(const GeometrySnapshot& snapshot, double c_prime, double delta);

struct HuiskenResult {
    double density = 0.0;
    double truncation_bound = 0.0;  // Gaussian mass outside the period cell
};

/// Backward-heat-kernel density over one period cell (midpoint quadrature).
/// `exponent` defaults to m/2 (the flat plane then has density one).
HuiskenResult huisken_density(const GeometrySnapshot& snapshot, std::span<const double> x0,
                              double t0, std::optional<double> exponent = std::nullopt);

/// sup-node signature norm of F_perp - H; meaningful on rescaled snapshots.
double self_similar_residual(const GeometrySnapshot& snapshot);

struct IdentityResiduals {
    double res_g = 0.0;      // metric evolution against -2 <H, B_ij>
    double res_gamma = 0.0;  // Gauss-map velocity against the tension field
    double res_B2 = 0.0;     // evolution of ||B||^2 against the Bochner terms
    double res_vol = 0.0;    // volume density evolution against -|H|^2 sqrt(g)
};

/// Finite-difference residuals of the parametric evolution identities,
/// centered at t + dt_probe after two RK4 probe steps.
IdentityResiduals identity_residuals(const ParametricState& state, double dt_probe);

/// sup over nodes and entries of |grad B| contraction; exposed for tests.
std::vector<double> covariant_sff_gradient_sq(const GeometrySnapshot& snapshot, int order);

// ---------------------------------------------------------------------------
// Suite assembly used by runs
// ---------------------------------------------------------------------------

struct MonitorOptions {
    bool gauss_radius = false;
    bool weighted = false;
    bool height = false;
    bool normal_position = false;
    bool huisken = false;
    bool self_similar = false;
    bool identity_residuals = false;
};

struct HuiskenSpec {
    std::vector<double> x0;
    double t0 = 1.0;
    std::optional<double> exponent;
};

class MonitorSuite {
public:
    Signature sig;
    bool rescaled = false;
    MonitorOptions enabled;
    std::optional<BallParams> ball;
    std::optional<SmallMatrix> center;
    std::optional<HuiskenSpec> huisken;
    double identity_probe_dt = 0.0;  // <= 0: half the CFL step

    void validate() const;
    MonitorRecord evaluate(const GraphState& state, double t, long step) const;
    MonitorRecord evaluate(const ParametricState& state, double t, long step) const;

private:
    template <class StateT>
    MonitorRecord evaluate_impl(const StateT& state, double t) const;
};

}  // namespace gaussflow
