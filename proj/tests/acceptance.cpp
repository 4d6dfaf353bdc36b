// Acceptance suite: drives full flows and prints one pass/fail line per
// criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "gaussflow/identities.hpp"
#include "gaussflow/monitors.hpp"

using namespace gaussflow;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", num, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared flow-run machinery
// ---------------------------------------------------------------------------

struct RunData {
    std::vector<MonitorRecord> records;
    Termination termination = Termination::ReachedTEnd;
    double min_lambda_min = std::numeric_limits<double>::infinity();
    double max_lambda_max = 0.0;
    double max_sqrt_g = 0.0;
    double max_pairing_defect = 0.0;
};

RunData flow_case(const Signature& sig, int n, double t_end, const InitialSpec& init,
                  const BallParams& ball) {
    Grid grid(std::vector<int>(sig.m, n), std::vector<double>(sig.m, 2.0 * kPi));
    GraphState state = make_initial_graph(sig, grid, init);

    RunData data;
    FlowConfig config;
    config.t_end = t_end;
    config.monitor_every = 10;
    const RunResult result =
        run(config, std::move(state), [&](const GraphState& s, double t, long) {
            MonitorRecord rec;
            rec.t = t;
            const GeometrySnapshot snap = build_geometry(s);
            const GaussField gauss = gauss_data(snap);
            rec.gauss_radius_sup = gauss.rho_max;
            double height2 = 0.0;
            for (long node = 0; node < snap.nodes(); ++node) {
                rec.sup_B2 = std::max(rec.sup_B2, snap.norm_B2[node]);
                rec.sup_H2 = std::max(rec.sup_H2, snap.norm_H2[node]);
                data.min_lambda_min = std::min(data.min_lambda_min, snap.lambda_min_g[node]);
                data.max_lambda_max = std::max(data.max_lambda_max, snap.lambda_max_g[node]);
                data.max_sqrt_g = std::max(data.max_sqrt_g, snap.sqrt_g[node]);
                if (std::isfinite(gauss.pairing_defect[node]))
                    data.max_pairing_defect =
                        std::max(data.max_pairing_defect, gauss.pairing_defect[node]);
                double acc = 0.0;
                for (int c = snap.m(); c < snap.ad(); ++c) {
                    const double y = snap.position[snap.pos_idx(node) + c];
                    acc += y * y;
                }
                height2 = std::max(height2, acc);
            }
            rec.height_sup = std::sqrt(height2);
            if (ball.epsilon) {
                double wsup = 0.0, decay = 0.0;
                for (long node = 0; node < snap.nodes(); ++node) {
                    const double h1 = confinement_potential(gauss.rho[node], *ball.epsilon).h1;
                    const double hq = std::pow(h1, *ball.q);
                    wsup = std::max(wsup, snap.norm_B2[node] * hq);
                    decay = std::max(decay, t * snap.norm_B2[node] * hq + hq);
                }
                rec.weighted_sup = wsup;
                rec.decay_monitor = decay;
            }
            return rec;
        });
    data.records = result.records;
    data.termination = result.termination;
    return data;
}

double radius_violation(const RunData& data) {
    double viol = 0.0;
    const double rho0 = *data.records.front().gauss_radius_sup;
    for (const MonitorRecord& r : data.records)
        viol = std::max(viol, *r.gauss_radius_sup - rho0);
    return viol;
}

double height_violation(const RunData& data) {
    double viol = 0.0;
    for (size_t i = 1; i < data.records.size(); ++i)
        viol = std::max(viol, *data.records[i].height_sup - *data.records[i - 1].height_sup);
    return viol;
}

ParametricState sine_parametric(int n, double amplitude, bool pseudo) {
    Signature sig{2, 2, pseudo ? SignatureKind::PseudoEuclidean : SignatureKind::Euclidean};
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

double circle_radius_error(int n_nodes, double r0, double t_end) {
    ParametricState state = circle_state(n_nodes, r0);
    double worst = 0.0;
    while (state.time < t_end - 1e-15) {
        const RhsEval ev = parametric_rhs(state);
        double dt = cfl_dt(state.grid, 0.9, ev.max_inv_metric_eig);
        dt = std::min(dt, t_end - state.time);
        if (!step(state, dt, Stepper::ExplicitEuler)) return 1e300;
        const double exact = std::sqrt(r0 * r0 - 2.0 * state.time);
        for (long node = 0; node < state.grid.node_count(); ++node) {
            const std::vector<double> pos = state.position(node);
            worst = std::max(worst, std::abs(std::hypot(pos[0], pos[1]) - exact) / exact);
        }
    }
    return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// Criteria 1, 2, 9, 11 (Euclidean runs) and 3 (pseudo runs)
// ---------------------------------------------------------------------------

int main() {
    const auto t_start = std::chrono::steady_clock::now();
    const int kSeeds = 10;

    // --- Euclidean confinable-property runs -------------------------------
    std::vector<RunData> euclid_runs;       // all radii, 64^2
    std::vector<RunData> euclid_weighted;   // radii inside the weighted regime
    double viol64 = 0.0, viol128 = 0.0;
    bool euclid_completed = true;
    {
        const Signature sig{2, 2, SignatureKind::Euclidean};
        for (double radius : {0.20, 0.30, 0.35}) {
            const BallParams ball = BallParams::for_radius(radius);
            for (int seed = 1; seed <= kSeeds; ++seed) {
                InitialSpec init;
                init.generator = Generator::BandLimitedRandom;
                init.target_gauss_radius = radius;
                init.seed = static_cast<std::uint64_t>(seed);
                RunData data = flow_case(sig, 64, 0.5, init, ball);
                euclid_completed &= (data.termination == Termination::ReachedTEnd);
                viol64 = std::max(viol64, radius_violation(data));
                if (radius < 0.31) euclid_weighted.push_back(data);
                euclid_runs.push_back(std::move(data));

                RunData fine = flow_case(sig, 128, 0.5, init, ball);
                euclid_completed &= (fine.termination == Termination::ReachedTEnd);
                viol128 = std::max(viol128, radius_violation(fine));
                euclid_runs.push_back(std::move(fine));
            }
        }
        const bool ok = euclid_completed && viol64 <= 5e-3 &&
                        viol128 <= viol64 / 1.8 + 1e-12;
        criterion(1, "confinable property, Euclidean", ok,
                  "max radius increase 64^2 " + fmt(viol64) + ", 128^2 " + fmt(viol128) +
                      ", slack ratio >= 1.8 required");
    }

    // --- criterion 2: weighted estimate and c/t decay ----------------------
    {
        bool weighted_ok = true, decay_ok = true, ct_ok = true;
        double worst_w = 0.0, worst_d = 0.0, worst_ct = 0.0;
        for (const RunData& data : euclid_weighted) {
            const double bound = *data.records.front().decay_monitor * (1.0 + 1e-2);
            for (size_t i = 0; i < data.records.size(); ++i) {
                const MonitorRecord& r = data.records[i];
                if (i > 0) {
                    const MonitorRecord& p = data.records[i - 1];
                    const double wex = *r.weighted_sup - *p.weighted_sup * (1.0 + 1e-3);
                    const double dex = *r.decay_monitor - *p.decay_monitor * (1.0 + 1e-3);
                    worst_w = std::max(worst_w, wex);
                    worst_d = std::max(worst_d, dex);
                    if (wex > 0.0) weighted_ok = false;
                    if (dex > 0.0) decay_ok = false;
                }
                if (r.t >= 0.1) {
                    const double ct = r.t * r.sup_B2;
                    worst_ct = std::max(worst_ct, ct - bound);
                    if (ct > bound) ct_ok = false;
                }
            }
        }
        criterion(2, "weighted estimate + c/t decay, Euclidean",
                  weighted_ok && decay_ok && ct_ok,
                  "worst weighted excess " + fmt(worst_w) + ", decay excess " + fmt(worst_d) +
                      ", c/t excess " + fmt(worst_ct));
    }

    // --- criterion 3: space-like curvature estimate ------------------------
    std::vector<RunData> pseudo_runs;
    {
        const Signature sig{2, 2, SignatureKind::PseudoEuclidean};
        const BallParams ball{};  // no weighted monitors on pseudo runs
        bool completed = true, monotone = true;
        double worst = 0.0;
        for (int seed = 1; seed <= kSeeds; ++seed) {
            InitialSpec init;
            init.generator = Generator::BandLimitedRandom;
            init.target_sigma_max = 0.5;
            init.seed = static_cast<std::uint64_t>(seed);
            RunData data = flow_case(sig, 64, 0.5, init, ball);
            completed &= (data.termination == Termination::ReachedTEnd);
            for (size_t i = 1; i < data.records.size(); ++i) {
                const double excess = data.records[i].sup_B2 -
                                      data.records[i - 1].sup_B2 * (1.0 + 1e-6) - 1e-10;
                worst = std::max(worst, excess);
                if (excess > 0.0) monotone = false;
            }
            pseudo_runs.push_back(std::move(data));
        }
        criterion(3, "space-like curvature estimate", completed && monotone,
                  std::string("termination clean: ") + (completed ? "yes" : "no") +
                      ", worst sup||B||^2 excess " + fmt(worst));
    }

    // --- criterion 4: evolution-identity residual convergence --------------
    {
        bool ok = true;
        std::string detail;
        for (bool pseudo : {false, true}) {
            double res[3][4];
            for (int level = 0; level < 3; ++level) {
                const int n = 32 << level;
                const double dt = 1e-3 / (1 << level);
                const ParametricState state = sine_parametric(n, pseudo ? 0.12 : 0.2, pseudo);
                const IdentityResiduals r = identity_residuals(state, dt);
                res[level][0] = r.res_g;
                res[level][1] = r.res_gamma;
                res[level][2] = r.res_B2;
                res[level][3] = r.res_vol;
            }
            for (int k = 0; k < 4; ++k)
                for (int level = 0; level < 2; ++level) {
                    const double ratio = res[level][k] / res[level + 1][k];
                    if (!(ratio >= 2.5 && ratio <= 6.0)) ok = false;
                }
            detail += std::string(pseudo ? "pseudo" : "euclid") + " ratios g " +
                      fmt(res[0][0] / res[1][0]) + "/" + fmt(res[1][0] / res[2][0]) + " gamma " +
                      fmt(res[0][1] / res[1][1]) + "/" + fmt(res[1][1] / res[2][1]) + " B2 " +
                      fmt(res[0][2] / res[1][2]) + "/" + fmt(res[1][2] / res[2][2]) + " vol " +
                      fmt(res[0][3] / res[1][3]) + "/" + fmt(res[1][3] / res[2][3]) + "; ";
        }
        criterion(4, "evolution-identity residual convergence", ok, detail);
    }

    // --- criterion 5: identity suite ---------------------------------------
    {
        const IdentitySuiteReport report = run_identity_suite(10000, 20240811);
        double worst = 0.0;
        for (const auto& e : report.entries) worst = std::max(worst, e.worst);

        SffSample sharp;
        sharp.m = 2;
        sharp.n = 2;
        sharp.shape_ops.assign(2, SmallMatrix(2, 2));
        sharp.shape_ops[0].at(0, 0) = 1.0;
        sharp.shape_ops[0].at(1, 1) = -1.0;
        sharp.shape_ops[1].at(0, 1) = 1.0;
        sharp.shape_ops[1].at(1, 0) = 1.0;
        const CommutatorBoundResult cb = check_commutator_bound(sharp);
        const bool sharp_ok = std::abs(cb.lhs - 24.0) <= 1e-12 &&
                              std::abs(cb.bound_refined - 24.0) <= 1e-12;
        criterion(5, "algebraic identity suite (10^4 random samples/shape)",
                  report.all_pass() && sharp_ok,
                  "worst relative margin " + fmt(worst) + ", sharp case lhs " + fmt(cb.lhs));
    }

    // --- criterion 6: shrinking-circle oracle -------------------------------
    {
        const double r0 = 1.0;
        const double t_end = 0.4 * r0 * r0 / 2.0;
        const double coarse = circle_radius_error(256, r0, t_end);
        const double fine = circle_radius_error(512, r0, t_end);
        criterion(6, "exact shrinking-circle oracle", coarse <= 1e-3 && coarse >= 3.0 * fine,
                  "relative radius error N=256 " + fmt(coarse) + ", N=512 " + fmt(fine));
    }

    // --- criterion 7: flat-plane fixed point --------------------------------
    {
        double worst = 0.0;
        for (bool pseudo : {false, true}) {
            Signature sig{2, 2, pseudo ? SignatureKind::PseudoEuclidean : SignatureKind::Euclidean};
            Grid grid(std::vector<int>(2, 16), std::vector<double>(2, 2.0 * kPi));
            GraphState state(sig, grid);
            state.slope.at(0, 0) = 0.3;
            state.slope.at(1, 1) = pseudo ? -0.25 : -0.45;
            state.slope.at(0, 1) = 0.1;
            const RhsEval gr = graph_rhs(state);
            for (const auto& comp : gr.velocity)
                for (double v : comp) worst = std::max(worst, std::abs(v));
            const ParametricState par = ParametricState::from_graph(state);
            const RhsEval pr = parametric_rhs(par);
            for (const auto& comp : pr.velocity)
                for (double v : comp) worst = std::max(worst, std::abs(v));
        }
        criterion(7, "flat planes are fixed points (both signatures/representations)",
                  worst <= 1e-12, "max node speed " + fmt(worst));
    }

    // --- criterion 8: rescaled flow -----------------------------------------
    RunData rescaled_data;
    {
        Signature sig{1, 1, SignatureKind::Euclidean};
        Grid grid({64}, {2.0 * kPi});
        InitialSpec init;
        init.generator = Generator::Bump;
        init.amplitude = 0.5;
        GraphState state = make_initial_graph(sig, grid, init);

        // Jordan-angle invariance under rescaling.
        GraphState probe = state;
        probe.time = 2.5;
        const GaussField ga = gauss_data(build_geometry(probe));
        const GaussField gb = gauss_data(build_geometry(rescale(probe)));
        double angle_diff = 0.0;
        for (size_t i = 0; i < ga.angles.size(); ++i)
            angle_diff = std::max(angle_diff, std::abs(ga.angles[i] - gb.angles[i]));

        FlowConfig config;
        config.t_end = (std::exp(3.0) - 1.0) / 2.0;  // t~ = 3
        config.monitor_every = 40;
        const RunResult result =
            run(config, std::move(state), [&](const GraphState& s, double t, long) {
                MonitorRecord rec;
                const GraphState scaled = rescale(s);
                rec.t = scaled.time;  // records carry t~
                const GeometrySnapshot snap = build_geometry(scaled);
                for (long node = 0; node < snap.nodes(); ++node) {
                    rec.sup_B2 = std::max(rec.sup_B2, snap.norm_B2[node]);
                    rec.sup_H2 = std::max(rec.sup_H2, snap.norm_H2[node]);
                }
                double height2 = 0.0;
                for (long node = 0; node < snap.nodes(); ++node) {
                    const double y = snap.position[snap.pos_idx(node) + 1];
                    height2 = std::max(height2, y * y);
                }
                rec.height_sup = std::sqrt(height2);
                rec.self_similar_residual = self_similar_residual(snap);
                (void)t;
                return rec;
            });
        rescaled_data.records = result.records;
        rescaled_data.termination = result.termination;

        bool decreasing = true;
        double prev = 0.0;
        bool have_prev = false;
        for (const MonitorRecord& r : result.records) {
            if (r.t < 1.0) continue;
            if (have_prev && *r.self_similar_residual >= prev) decreasing = false;
            prev = *r.self_similar_residual;
            have_prev = true;
        }
        const double first = *result.records.front().self_similar_residual;
        const double last = *result.records.back().self_similar_residual;
        const bool ok = result.termination == Termination::ReachedTEnd && decreasing &&
                        last <= 0.1 * first && angle_diff <= 1e-14;
        criterion(8, "rescaled flow approaches the self-expander equation", ok,
                  "residual " + fmt(first) + " -> " + fmt(last) + ", angle drift " +
                      fmt(angle_diff));
    }

    // --- criterion 9: height monotonicity everywhere ------------------------
    {
        double worst = 0.0;
        for (const RunData* set : {&rescaled_data}) worst = std::max(worst, height_violation(*set));
        for (const RunData& d : euclid_runs) worst = std::max(worst, height_violation(d));
        for (const RunData& d : pseudo_runs) worst = std::max(worst, height_violation(d));
        criterion(9, "height function non-increasing on all runs", worst <= 1e-6,
                  "worst stepwise increase " + fmt(worst));
    }

    // --- criterion 10: Grassmann oracle --------------------------------------
    {
        Rng rng(31415);
        double worst_dist = 0.0, worst_pair = 0.0, worst_cosh = 0.0;
        for (int it = 0; it < 1000; ++it) {
            const bool pseudo = (it % 2 == 1);
            const Signature sig{2, 2,
                                pseudo ? SignatureKind::PseudoEuclidean : SignatureKind::Euclidean};
            SmallMatrix df(2, 2);
            for (int a = 0; a < 2; ++a)
                for (int i = 0; i < 2; ++i)
                    df.at(a, i) = rng.uniform(-1.0, 1.0) * (pseudo ? 0.4 : 2.0);
            const JordanAngles ja = jordan_angles(df, sig);

            if (!pseudo) {
                // principal-angle brute force via orthonormal frames
                SmallMatrix q(2, 4);
                for (int i = 0; i < 2; ++i) {
                    double v[4] = {0.0, 0.0, 0.0, 0.0};
                    v[i] = 1.0;
                    v[2] = df.at(0, i);
                    v[3] = df.at(1, i);
                    for (int t = 0; t < i; ++t) {
                        double dot = 0.0;
                        for (int c = 0; c < 4; ++c) dot += v[c] * q.at(t, c);
                        for (int c = 0; c < 4; ++c) v[c] -= dot * q.at(t, c);
                    }
                    double nrm = 0.0;
                    for (int c = 0; c < 4; ++c) nrm += v[c] * v[c];
                    nrm = std::sqrt(nrm);
                    for (int c = 0; c < 4; ++c) q.at(i, c) = v[c] / nrm;
                }
                SmallMatrix p0(2, 4);
                p0.at(0, 0) = 1.0;
                p0.at(1, 1) = 1.0;
                const SvdResult svd = svd_small(p0 * q.transposed());
                double d2 = 0.0;
                for (double s : svd.sigma) {
                    const double th = std::acos(std::clamp(s, -1.0, 1.0));
                    d2 += th * th;
                }
                worst_dist = std::max(worst_dist, std::abs(distance(ja) - std::sqrt(d2)));
            }

            const double sgn = pseudo ? -1.0 : 1.0;
            SmallMatrix g(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double acc = (i == j) ? 1.0 : 0.0;
                    for (int a = 0; a < 2; ++a) acc += sgn * df.at(a, i) * df.at(a, j);
                    g.at(i, j) = acc;
                }
            SmallMatrix ginv;
            double det = 0.0;
            invert_spd(g, ginv, det);
            worst_pair = std::max(worst_pair,
                                  std::abs(plucker_pairing(ja) - 1.0 / std::sqrt(det)));

        }
        {
            // per-node cosh comparison on a space-like state, R = sup-node rho
            Signature psig{2, 2, SignatureKind::PseudoEuclidean};
            Grid pgrid(std::vector<int>(2, 24), std::vector<double>(2, 2.0 * kPi));
            InitialSpec init;
            init.generator = Generator::BandLimitedRandom;
            init.target_sigma_max = 0.5;
            init.seed = 99;
            const GraphState state = make_initial_graph(psig, pgrid, init);
            const GeometrySnapshot snap = build_geometry(state);
            const GaussField gauss = gauss_data(snap);
            for (long node = 0; node < snap.nodes(); ++node) {
                const double rho = gauss.rho[node];
                double prod = 1.0;
                if (rho > 1e-14)
                    for (int i = 0; i < 2; ++i)
                        prod *= std::cosh(gauss.angles[node * 2 + i] / rho * gauss.rho_max);
                worst_cosh = std::max(worst_cosh, 1.0 / prod - snap.sqrt_g[node]);
            }
        }
        criterion(10, "Grassmann distance/pairing oracle",
                  worst_dist <= 1e-10 && worst_pair <= 1e-10 && worst_cosh <= 1e-12,
                  "distance defect " + fmt(worst_dist) + ", pairing defect " + fmt(worst_pair));
    }

    // --- criterion 11: metric eigenvalue bounds ------------------------------
    {
        double euclid_min = std::numeric_limits<double>::infinity();
        double euclid_sqrtg = 0.0;
        for (const RunData& d : euclid_runs) {
            euclid_min = std::min(euclid_min, d.min_lambda_min);
            euclid_sqrtg = std::max(euclid_sqrtg, d.max_sqrt_g);
        }
        double pseudo_max = 0.0;
        for (const RunData& d : pseudo_runs) pseudo_max = std::max(pseudo_max, d.max_lambda_max);
        const double cap = 1.0 / w_floor(2);
        const bool ok = euclid_min >= 1.0 - 1e-12 && euclid_sqrtg <= cap + 1e-10 &&
                        pseudo_max <= 1.0 + 1e-12;
        criterion(11, "metric eigenvalue bounds on every run node", ok,
                  "euclid min eig " + fmt(euclid_min) + ", max sqrt(g) " + fmt(euclid_sqrtg) +
                      " vs cap " + fmt(cap) + ", pseudo max eig " + fmt(pseudo_max));
    }

    // --- criterion 12: Huisken density ---------------------------------------
    {
        Signature sig{2, 2, SignatureKind::Euclidean};
        Grid grid(std::vector<int>(2, 48), std::vector<double>(2, 2.0 * kPi));
        GraphState flat(sig, grid);
        const HuiskenResult flat_density =
            huisken_density(build_geometry(flat), std::vector<double>{kPi, kPi, 0.0, 0.0}, 0.5);
        const bool flat_ok = std::abs(flat_density.density - 1.0) <=
                             flat_density.truncation_bound + 1e-6;

        Signature sig1{1, 1, SignatureKind::Euclidean};
        Grid grid1({96}, {2.0 * kPi});
        InitialSpec init;
        init.generator = Generator::Bump;
        init.amplitude = 0.5;
        GraphState bump = make_initial_graph(sig1, grid1, init);
        const double t0 = 0.6;
        const std::vector<double> x0 = {kPi, 0.0};
        double trunc_max = 0.0;
        FlowConfig config;
        config.t_end = 0.3;
        config.monitor_every = 25;
        const RunResult result =
            run(config, std::move(bump), [&](const GraphState& s, double t, long) {
                MonitorRecord rec;
                rec.t = t;
                const HuiskenResult h = huisken_density(build_geometry(s), x0, t0);
                rec.huisken_density = h.density;
                trunc_max = std::max(trunc_max, h.truncation_bound);
                return rec;
            });
        bool monotone = true;
        double worst = 0.0;
        for (size_t i = 1; i < result.records.size(); ++i) {
            const double excess = *result.records[i].huisken_density -
                                  *result.records[i - 1].huisken_density - trunc_max - 1e-4;
            worst = std::max(worst, excess);
            if (excess > 0.0) monotone = false;
        }
        criterion(12, "Huisken density: flat normalization and monotonicity",
                  flat_ok && monotone,
                  "flat |density-1| " + fmt(std::abs(flat_density.density - 1.0)) +
                      " vs bound " + fmt(flat_density.truncation_bound) + ", worst excess " +
                      fmt(worst));
    }

    const auto t_stop = std::chrono::steady_clock::now();
    std::printf("acceptance total: %d/%d criteria passed in %.1fs\n", 12 - g_failures, 12,
                std::chrono::duration<double>(t_stop - t_start).count());
    return g_failures == 0 ? 0 : 1;
}
