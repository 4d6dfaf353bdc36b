#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussflow/monitors.hpp"

using namespace gaussflow;

namespace {

GraphState band_limited(const Signature& sig, int n, double target_radius, std::uint64_t seed) {
    Grid grid(std::vector<int>(sig.m, n), std::vector<double>(sig.m, 2.0 * kPi));
    InitialSpec spec;
    spec.generator = Generator::BandLimitedRandom;
    spec.target_gauss_radius = target_radius;
    spec.seed = seed;
    return make_initial_graph(sig, grid, spec);
}

GraphState bump_graph(const Signature& sig, int n, double amplitude) {
    Grid grid(std::vector<int>(sig.m, n), std::vector<double>(sig.m, 2.0 * kPi));
    InitialSpec spec;
    spec.generator = Generator::Bump;
    spec.amplitude = amplitude;
    return make_initial_graph(sig, grid, spec);
}

ParametricState circle_state(int n_nodes, double radius) {
    Signature sig{1, 1, SignatureKind::Euclidean};
    Grid grid({n_nodes}, {2.0 * kPi});
    ParametricState state(sig, grid);
    state.lattice[0] = {0.0, 0.0};
    for (long node = 0; node < grid.node_count(); ++node) {
        const double theta = grid.coordinate(node, 0);
        state.displacement[0][node] = radius * std::cos(theta);
        state.displacement[1][node] = radius * std::sin(theta);
    }
    return state;
}

ParametricState sine_parametric(int n, double amplitude) {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, n), std::vector<double>(2, 2.0 * kPi));
    GraphState g(sig, grid);
    for (long node = 0; node < grid.node_count(); ++node) {
        const double x = grid.coordinate(node, 0);
        const double y = grid.coordinate(node, 1);
        g.values[0][node] = amplitude * (std::sin(x) * std::cos(y) + 0.5 * std::cos(x));
        g.values[1][node] = amplitude * (0.8 * std::cos(x + y) + 0.4 * std::sin(y));
    }
    return ParametricState::from_graph(g);
}

}  // namespace

TEST_CASE("gauss radius monitor: flat and slope-one states") {
    Signature sig{1, 1, SignatureKind::Euclidean};
    Grid grid({16}, {2.0 * kPi});
    GraphState flat(sig, grid);
    const BallParams ball = BallParams::for_radius(0.3);
    const GaussRadiusResult r0 = gauss_radius(build_geometry(flat), ball);
    CHECK(r0.rho_max == 0.0);
    REQUIRE(!r0.h1.empty());
    CHECK(r0.h1[0] == doctest::Approx(*ball.epsilon).epsilon(1e-12));

    GraphState tilted(sig, grid);
    tilted.slope.at(0, 0) = 1.0;
    const GaussRadiusResult r1 = gauss_radius(build_geometry(tilted), BallParams::for_radius(1.0));
    CHECK(r1.rho_max == doctest::Approx(kPi / 4.0).epsilon(1e-13));
}

TEST_CASE("weighted monitor needs the small-radius regime") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    const GraphState state = band_limited(sig, 24, 0.3, 3);
    const GeometrySnapshot snap = build_geometry(state);

    const BallParams good = BallParams::for_radius(0.3);
    const GaussRadiusResult rr = gauss_radius(snap, good);
    const WeightedMonitorResult wm = weighted_monitor(snap, good, rr, 0.0);
    CHECK(wm.weighted_sup > 0.0);
    CHECK(wm.decay_monitor > 0.0);

    const BallParams bad = BallParams::for_radius(0.5);
    const GaussRadiusResult rb = gauss_radius(snap, bad);
    CHECK_THROWS_AS(weighted_monitor(snap, bad, rb, 0.0), InfeasibleRadius);
}

TEST_CASE("flat weighted monitor vanishes") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 12), std::vector<double>(2, 2.0 * kPi));
    GraphState flat(sig, grid);
    const GeometrySnapshot snap = build_geometry(flat);
    const BallParams ball = BallParams::for_radius(0.2);
    const GaussRadiusResult rr = gauss_radius(snap, ball);
    const WeightedMonitorResult wm = weighted_monitor(snap, ball, rr, 0.0);
    CHECK(wm.weighted_sup <= 1e-20);
}

TEST_CASE("height monitor: zero plane, decay along a run, shift invariance") {
    Signature sig{1, 1, SignatureKind::Euclidean};
    Grid grid({32}, {2.0 * kPi});
    GraphState flat(sig, grid);
    CHECK(height_monitor(build_geometry(flat)) == 0.0);

    GraphState sine(sig, grid);
    for (long node = 0; node < grid.node_count(); ++node)
        sine.values[0][node] = 0.3 * std::sin(grid.coordinate(node, 0));
    FlowConfig config;
    config.t_end = 0.3;
    config.monitor_every = 5;
    const RunResult result = run(config, sine, [](const GraphState& s, double t, long) {
        MonitorRecord rec;
        rec.t = t;
        rec.height_sup = height_monitor(build_geometry(s));
        return rec;
    });
    REQUIRE(result.records.size() >= 3);
    for (size_t i = 1; i < result.records.size(); ++i)
        CHECK(*result.records[i].height_sup < *result.records[i - 1].height_sup + 1e-12);

    // shifting the sampled coordinates tangentially does not change sup |f|
    GraphState shifted = sine;
    for (long node = 0; node < grid.node_count(); ++node)
        shifted.values[0][node] = sine.values[0][grid.shift(static_cast<int>(node), 0, 5)];
    CHECK(height_monitor(build_geometry(shifted)) ==
          doctest::Approx(height_monitor(build_geometry(sine))).epsilon(1e-14));
}

TEST_CASE("normal position monitor on planes and circles") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 12), std::vector<double>(2, 2.0 * kPi));
    SnapshotOptions opt;
    opt.with_frames = true;

    GraphState through_origin(sig, grid);
    through_origin.slope.at(0, 0) = 0.4;
    CHECK(normal_position_monitor(build_geometry(through_origin, opt)) <= 1e-20);

    GraphState offset(sig, grid);
    const double d = 0.75;
    for (long node = 0; node < grid.node_count(); ++node) offset.values[0][node] = d;
    CHECK(normal_position_monitor(build_geometry(offset, opt)) ==
          doctest::Approx(d * d).epsilon(1e-12));

    const double radius = 1.3;
    const GeometrySnapshot circ = build_geometry(circle_state(64, radius), opt);
    double sup = normal_position_monitor(circ);
    CHECK(sup == doctest::Approx(radius * radius).epsilon(1e-10));
    CHECK(normal_growth_check(circ, 2.0 * radius * radius, 0.5));
}

TEST_CASE("huisken density of a flat plane through the center is one") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 48), std::vector<double>(2, 2.0 * kPi));
    GraphState flat(sig, grid);
    const GeometrySnapshot snap = build_geometry(flat);
    const std::vector<double> x0 = {kPi, kPi, 0.0, 0.0};
    const HuiskenResult h = huisken_density(snap, x0, 0.5);
    CHECK(std::abs(h.density - 1.0) <= h.truncation_bound + 1e-6);
    CHECK(h.truncation_bound < 0.1);
    CHECK_THROWS_AS(huisken_density(snap, x0, -1.0), InvalidTime);
}

TEST_CASE("huisken density is non-increasing along a localized bump run") {
    Signature sig{1, 1, SignatureKind::Euclidean};
    GraphState state = bump_graph(sig, 96, 0.5);
    const double t0 = 0.6;
    const std::vector<double> x0 = {kPi, 0.0};
    FlowConfig config;
    config.t_end = 0.3;
    config.monitor_every = 50;
    double worst_trunc = 0.0;
    const RunResult result = run(config, state, [&](const GraphState& s, double t, long) {
        MonitorRecord rec;
        rec.t = t;
        const HuiskenResult h = huisken_density(build_geometry(s), x0, t0);
        rec.huisken_density = h.density;
        worst_trunc = std::max(worst_trunc, h.truncation_bound);
        return rec;
    });
    REQUIRE(result.records.size() >= 3);
    for (size_t i = 1; i < result.records.size(); ++i)
        CHECK(*result.records[i].huisken_density <=
              *result.records[i - 1].huisken_density + worst_trunc + 1e-4);
}

TEST_CASE("self-similar residual vanishes on a plane through the origin") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 12), std::vector<double>(2, 2.0 * kPi));
    GraphState flat(sig, grid);
    flat.slope.at(0, 1) = 0.5;
    // F = (x, slope x): the position is tangential, so F_perp = 0 and H = 0.
    CHECK(self_similar_residual(build_geometry(flat)) <= 1e-12);
}

TEST_CASE("self-similar residual matches the unrescaled recomputation") {
    Signature sig{1, 1, SignatureKind::Euclidean};
    Grid grid({48}, {2.0 * kPi});
    GraphState state(sig, grid);
    for (long node = 0; node < grid.node_count(); ++node)
        state.values[0][node] = 0.4 * std::sin(grid.coordinate(node, 0));
    state.time = 0.8;

    const double rescaled_value = self_similar_residual(build_geometry(rescale(state)));

    // algebraic recomputation from the unrescaled snapshot:
    // |F~perp - H~| = s |Fperp/(2t+1) - H| with s = sqrt(2t+1)
    const GeometrySnapshot snap = build_geometry(state);
    const double s = std::sqrt(2.0 * state.time + 1.0);
    double sup = 0.0;
    const int ad = 2, m = 1;
    std::vector<double> v(ad);
    for (long node = 0; node < snap.nodes(); ++node) {
        const double* pos = &snap.position[snap.pos_idx(node)];
        const double* tan = &snap.tangent[snap.tan_idx(node, 0)];
        const double* ginv = &snap.metric_inv[snap.met_idx(node)];
        for (int c = 0; c < ad; ++c) v[c] = pos[c];
        for (int l = 0; l < m; ++l) {
            double coeff = 0.0;
            for (int k = 0; k < m; ++k)
                coeff += ginv[k * m + l] * snap.sig.inner(std::span(pos, static_cast<size_t>(ad)),
                                                          std::span(tan + k * ad,
                                                                    static_cast<size_t>(ad)));
            for (int c = 0; c < ad; ++c) v[c] -= coeff * tan[l * ad + c];
        }
        double norm2 = 0.0;
        for (int c = 0; c < ad; ++c) {
            const double r = v[c] / (s * s) - snap.mean_curv[snap.pos_idx(node) + c];
            norm2 += r * r;
        }
        sup = std::max(sup, s * std::sqrt(norm2));
    }
    CHECK(rescaled_value == doctest::Approx(sup).epsilon(1e-10));
}

TEST_CASE("identity residuals vanish on a minimal state") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 12), std::vector<double>(2, 2.0 * kPi));
    GraphState flat(sig, grid);
    flat.slope.at(0, 0) = 0.25;
    const ParametricState par = ParametricState::from_graph(flat);
    const IdentityResiduals res = identity_residuals(par, 1e-3);
    CHECK(res.res_g <= 1e-12);
    CHECK(res.res_gamma <= 1e-12);
    CHECK(res.res_B2 <= 1e-12);
    CHECK(res.res_vol <= 1e-12);
}

TEST_CASE("identity residuals shrink by roughly four per refinement (both signatures)") {
    for (bool pseudo : {false, true}) {
        double res_g[2], res_gamma[2], res_b2[2], res_vol[2];
        for (int level = 0; level < 2; ++level) {
            const int n = 32 << level;
            const double dt = 5e-4 / (1 << level);
            ParametricState state = sine_parametric(n, pseudo ? 0.12 : 0.2);
            if (pseudo) state.sig.kind = SignatureKind::PseudoEuclidean;
            const IdentityResiduals res = identity_residuals(state, dt);
            res_g[level] = res.res_g;
            res_gamma[level] = res.res_gamma;
            res_b2[level] = res.res_B2;
            res_vol[level] = res.res_vol;
        }
        for (const auto* arr : {&res_g, &res_gamma, &res_b2, &res_vol}) {
            const double ratio = (*arr)[0] / (*arr)[1];
            CHECK(ratio >= 2.5);
            CHECK(ratio <= 6.0);
        }
    }
}

TEST_CASE("pseudo curvature decay rate satisfies the discrete (2/n) bound") {
    // At the running maximum, d/dt sup||B||^2 <= -(2/n) (sup||B||^2)^2 up to
    // discretization slack, and the slack shrinks under refinement.
    Signature sig{2, 2, SignatureKind::PseudoEuclidean};
    double slack[2];
    for (int level = 0; level < 2; ++level) {
        const int n = 24 << level;
        Grid grid(std::vector<int>(2, n), std::vector<double>(2, 2.0 * kPi));
        InitialSpec spec;
        spec.generator = Generator::BandLimitedRandom;
        spec.target_sigma_max = 0.45;
        spec.seed = 4;
        GraphState state = make_initial_graph(sig, grid, spec);
        FlowConfig config;
        config.t_end = 0.05;
        config.monitor_every = 4;
        const RunResult result = run(config, state, [](const GraphState& s, double t, long) {
            MonitorRecord rec;
            rec.t = t;
            const GeometrySnapshot snap = build_geometry(s);
            for (long node = 0; node < snap.nodes(); ++node)
                rec.sup_B2 = std::max(rec.sup_B2, snap.norm_B2[node]);
            return rec;
        });
        REQUIRE(result.termination == Termination::ReachedTEnd);
        double needed = 0.0;
        for (size_t i = 1; i < result.records.size(); ++i) {
            const double b_prev = result.records[i - 1].sup_B2;
            const double b_cur = result.records[i].sup_B2;
            const double dt = result.records[i].t - result.records[i - 1].t;
            const double rate = (b_cur - b_prev) / dt;
            needed = std::max(needed, rate + (2.0 / sig.n) * b_prev * b_prev);
        }
        slack[level] = needed;
    }
    CHECK(slack[1] <= slack[0] + 1e-12);
}

TEST_CASE("monitor suite wiring and validation") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    const GraphState state = band_limited(sig, 24, 0.25, 8);

    MonitorSuite suite;
    suite.sig = sig;
    suite.enabled.gauss_radius = true;
    suite.enabled.weighted = true;
    suite.enabled.height = true;
    suite.ball = BallParams::for_radius(0.25);
    suite.validate();
    const MonitorRecord rec = suite.evaluate(state, 0.0, 0);
    CHECK(rec.gauss_radius_sup.has_value());
    CHECK(*rec.gauss_radius_sup == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(rec.weighted_sup.has_value());
    CHECK(rec.height_sup.has_value());
    CHECK(!rec.huisken_density.has_value());
    CHECK(rec.sup_B2 > 0.0);

    MonitorSuite bad;
    bad.sig = sig;
    bad.enabled.weighted = true;
    bad.ball = BallParams::for_radius(0.6);
    CHECK_THROWS_AS(bad.validate(), InfeasibleRadius);

    MonitorSuite self_sim;
    self_sim.sig = sig;
    self_sim.enabled.self_similar = true;
    self_sim.rescaled = false;
    CHECK_THROWS_AS(self_sim.validate(), ConfigError);
}

TEST_CASE("identity residuals flow through the parametric monitor suite") {
    MonitorSuite suite;
    suite.sig = Signature{2, 2, SignatureKind::Euclidean};
    suite.enabled.identity_residuals = true;
    suite.identity_probe_dt = 1e-3;
    const ParametricState state = sine_parametric(16, 0.15);
    const MonitorRecord rec = suite.evaluate(state, 0.0, 0);
    REQUIRE(rec.res_g.has_value());
    REQUIRE(rec.res_gamma.has_value());
    REQUIRE(rec.res_B2.has_value());
    CHECK(*rec.res_g > 0.0);
    CHECK(std::isfinite(*rec.res_B2));
}

TEST_CASE("normal position on a pseudo plane offset in a time-like direction") {
    Signature sig{2, 2, SignatureKind::PseudoEuclidean};
    Grid grid(std::vector<int>(2, 12), std::vector<double>(2, 2.0 * kPi));
    GraphState state(sig, grid);
    const double d = 0.4;
    for (long node = 0; node < grid.node_count(); ++node) state.values[1][node] = d;
    SnapshotOptions opt;
    opt.with_frames = true;
    CHECK(normal_position_monitor(build_geometry(state, opt)) ==
          doctest::Approx(d * d).epsilon(1e-12));
}

TEST_CASE("huisken exponent override changes the density") {
    Signature sig{2, 2, SignatureKind::Euclidean};
    Grid grid(std::vector<int>(2, 32), std::vector<double>(2, 2.0 * kPi));
    GraphState flat(sig, grid);
    const GeometrySnapshot snap = build_geometry(flat);
    const std::vector<double> x0 = {kPi, kPi, 0.0, 0.0};
    const HuiskenResult def = huisken_density(snap, x0, 0.5);                 // m/2
    const HuiskenResult printed = huisken_density(snap, x0, 0.5, 1.5);  // explicit override
    CHECK(std::abs(def.density - 1.0) <= def.truncation_bound + 1e-6);
    CHECK(printed.density != doctest::Approx(def.density).epsilon(1e-6));
}

TEST_CASE("gauss-map gradient chain bounds hold per node") {
    // Euclidean: |grad h1|^2 <= 2 sin^2(sqrt2 rho) ||B||^2;
    // pseudo:    |grad rho^2|^2 <= 4 rho^2 ||B||^2.
    for (bool pseudo : {false, true}) {
        Signature sig{2, 2, pseudo ? SignatureKind::PseudoEuclidean : SignatureKind::Euclidean};
        Grid grid(std::vector<int>(2, 48), std::vector<double>(2, 2.0 * kPi));
        InitialSpec spec;
        spec.generator = Generator::BandLimitedRandom;
        if (pseudo)
            spec.target_sigma_max = 0.5;
        else
            spec.target_gauss_radius = 0.35;
        spec.seed = 5;
        const GraphState state = make_initial_graph(sig, grid, spec);
        const GeometrySnapshot snap = build_geometry(state);
        const GaussField gauss = gauss_data(snap);

        const double eps = 0.5;
        std::vector<double> field(snap.nodes());
        for (long i = 0; i < snap.nodes(); ++i)
            field[i] = pseudo ? gauss.rho[i] * gauss.rho[i]
                              : confinement_potential(gauss.rho[i], eps).h1;
        const StencilSpec st = grid.stencil(2);
        std::vector<std::vector<double>> df(2);
        for (int a = 0; a < 2; ++a) df[a] = periodic_derivative(grid, field, a, 1, st);

        for (long i = 0; i < snap.nodes(); ++i) {
            const double* gi = &snap.metric_inv[snap.met_idx(i)];
            double lhs = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) lhs += gi[a * 2 + b] * df[a][i] * df[b][i];
            double rhs;
            if (pseudo) {
                rhs = 4.0 * gauss.rho[i] * gauss.rho[i] * snap.norm_B2[i];
            } else {
                const double s = std::sin(std::sqrt(2.0) * gauss.rho[i]);
                rhs = 2.0 * s * s * snap.norm_B2[i];
            }
            CHECK(lhs <= rhs * 1.05 + 1e-12);
        }
    }
}
