#include "gaussflow/monitors.hpp"

#include <algorithm>
#include <cmath>

#include "gaussflow/identities.hpp"

namespace gaussflow {

// ---------------------------------------------------------------------------
// Gauss radius / weighted estimate
// ---------------------------------------------------------------------------

GaussRadiusResult gauss_radius(const GeometrySnapshot& snapshot, const BallParams& ball,
                               const std::optional<SmallMatrix>& center) {
    GaussRadiusResult out;
    out.gauss = gauss_data(snapshot, center);
    out.rho_max = out.gauss.rho_max;
    if (ball.epsilon) {
        out.h1.resize(snapshot.nodes());
        for (long node = 0; node < snapshot.nodes(); ++node)
            out.h1[node] = confinement_potential(out.gauss.rho[node], *ball.epsilon).h1;
    }
    return out;
}

WeightedMonitorResult weighted_monitor(const GeometrySnapshot& snapshot, const BallParams& ball,
                                       const GaussRadiusResult& radius, double t) {
    if (!ball.epsilon || !ball.q)
        throw InfeasibleRadius(
            "weighted monitor requested for a ball radius >= sqrt(2)pi/12");
    WeightedMonitorResult out;
    for (long node = 0; node < snapshot.nodes(); ++node) {
        const double hq = std::pow(radius.h1[node], *ball.q);
        const double wb = snapshot.norm_B2[node] * hq;
        out.weighted_sup = std::max(out.weighted_sup, wb);
        out.decay_monitor = std::max(out.decay_monitor, t * wb + hq);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Height / normal position
// ---------------------------------------------------------------------------

double height_monitor(const GeometrySnapshot& snapshot) {
    double sup = 0.0;
    for (long node = 0; node < snapshot.nodes(); ++node) {
        double acc = 0.0;
        for (int c = snapshot.m(); c < snapshot.ad(); ++c) {
            const double y = snapshot.position[snapshot.pos_idx(node) + c];
            acc += y * y;
        }
        sup = std::max(sup, acc);
    }
    return std::sqrt(sup);
}

double normal_position_monitor(const GeometrySnapshot& snapshot) {
    if (!snapshot.options.with_frames)
        throw InvalidInput("normal_position_monitor requires frames");
    double sup = 0.0;
    const int ad = snapshot.ad();
    for (long node = 0; node < snapshot.nodes(); ++node) {
        const double* pos = &snapshot.position[snapshot.pos_idx(node)];
        double acc = 0.0;
        for (int a = 0; a < snapshot.n(); ++a) {
            const double* e = &snapshot.frame[snapshot.frame_idx(node, a)];
            const double d = snapshot.sig.inner(std::span(pos, static_cast<size_t>(ad)),
                                                std::span(e, static_cast<size_t>(ad)));
            acc += d * d;
        }
        sup = std::max(sup, acc);
    }
    return sup;
}

bool normal_growth_check(const GeometrySnapshot& snapshot, double c_prime, double delta) {
    if (!snapshot.options.with_frames)
        throw InvalidInput("normal_growth_check requires frames");
    const int ad = snapshot.ad();
    for (long node = 0; node < snapshot.nodes(); ++node) {
        const double* pos = &snapshot.position[snapshot.pos_idx(node)];
        double acc = 0.0;
        for (int a = 0; a < snapshot.n(); ++a) {
            const double* e = &snapshot.frame[snapshot.frame_idx(node, a)];
            const double d = snapshot.sig.inner(std::span(pos, static_cast<size_t>(ad)),
                                                std::span(e, static_cast<size_t>(ad)));
            acc += d * d;
        }
        const double f2 = std::max(0.0, snapshot.sig.inner(std::span(pos, static_cast<size_t>(ad)),
                                                           std::span(pos, static_cast<size_t>(ad))));
        if (acc > c_prime * std::pow(1.0 + f2, 1.0 - delta)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Huisken density
// ---------------------------------------------------------------------------

HuiskenResult huisken_density(const GeometrySnapshot& snapshot, std::span<const double> x0,
                              double t0, std::optional<double> exponent) {
    if (snapshot.sig.pseudo())
        throw InvalidInput("huisken_density is defined for the Euclidean signature");
    if (!(t0 > snapshot.time)) throw InvalidTime("huisken_density requires t < t0");
    if (static_cast<int>(x0.size()) != snapshot.ad())
        throw InvalidInput("huisken_density: x0 must have ambient dimension");

    const double tau = t0 - snapshot.time;
    const double expo = exponent.value_or(0.5 * snapshot.m());
    const double prefactor = std::pow(4.0 * kPi * tau, -expo);

    double cell = 1.0;
    for (int i = 0; i < snapshot.grid.dim(); ++i) cell *= snapshot.grid.spacing(i);

    HuiskenResult out;
    for (long node = 0; node < snapshot.nodes(); ++node) {
        const double* pos = &snapshot.position[snapshot.pos_idx(node)];
        double r2 = 0.0;
        for (int c = 0; c < snapshot.ad(); ++c) {
            const double d = pos[c] - x0[c];
            r2 += d * d;
        }
        out.density += prefactor * std::exp(-r2 / (4.0 * tau)) * snapshot.sqrt_g[node] * cell;
    }
    // Gaussian mass of the base cell footprint, measured by the same
    // midpoint rule so the flat-plane density deficit is covered exactly.
    double mass = 1.0;
    for (int i = 0; i < snapshot.grid.dim(); ++i) {
        const Grid& grid = snapshot.grid;
        const double h = grid.spacing(i);
        double axis_mass = 0.0;
        for (int j = 0; j < grid.sizes()[i]; ++j) {
            const double d = j * h - x0[i];
            axis_mass += std::exp(-d * d / (4.0 * tau));
        }
        mass *= axis_mass * h / std::sqrt(4.0 * kPi * tau);
    }
    out.truncation_bound = std::abs(1.0 - mass);
    return out;
}

// ---------------------------------------------------------------------------
// Self-similar residual
// ---------------------------------------------------------------------------

double self_similar_residual(const GeometrySnapshot& snapshot) {
    const int m = snapshot.m();
    const int ad = snapshot.ad();
    double sup = 0.0;
    std::vector<double> v(ad);
    for (long node = 0; node < snapshot.nodes(); ++node) {
        const double* pos = &snapshot.position[snapshot.pos_idx(node)];
        const double* tan = &snapshot.tangent[snapshot.tan_idx(node, 0)];
        const double* ginv = &snapshot.metric_inv[snapshot.met_idx(node)];
        for (int c = 0; c < ad; ++c) v[c] = pos[c];
        for (int l = 0; l < m; ++l) {
            double coeff = 0.0;
            for (int k = 0; k < m; ++k)
                coeff += ginv[k * m + l] *
                         snapshot.sig.inner(std::span(pos, static_cast<size_t>(ad)),
                                            std::span(tan + k * ad, static_cast<size_t>(ad)));
            for (int c = 0; c < ad; ++c) v[c] -= coeff * tan[l * ad + c];
        }
        for (int c = 0; c < ad; ++c) v[c] -= snapshot.mean_curv[snapshot.pos_idx(node) + c];
        const double r2 = std::abs(snapshot.sig.inner(std::span(v), std::span(v)));
        sup = std::max(sup, std::sqrt(r2));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// Evolution-identity residuals
// ---------------------------------------------------------------------------

std::vector<double> covariant_sff_gradient_sq(const GeometrySnapshot& snapshot, int order) {
    if (!snapshot.options.with_christoffels || !snapshot.options.with_frames)
        throw InvalidInput("covariant_sff_gradient_sq needs christoffels and frames");
    const Grid& grid = snapshot.grid;
    const int m = snapshot.m();
    const int ad = snapshot.ad();
    const long nodes = snapshot.nodes();
    const StencilSpec spec = grid.stencil(order);

    // Ambient derivatives of every B_ij component.
    // layout: db[((k*m + i)*m + j)*ad + c][node]
    std::vector<std::vector<double>> db(static_cast<size_t>(m) * m * m * ad);
    std::vector<double> comp(nodes);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int c = 0; c < ad; ++c) {
                for (long node = 0; node < nodes; ++node)
                    comp[node] = snapshot.second_ff[snapshot.sd_idx(node, i, j) + c];
                for (int k = 0; k < m; ++k)
                    db[((static_cast<size_t>(k) * m + i) * m + j) * ad + c] =
                        periodic_derivative(grid, comp, k, 1, spec);
            }

    std::vector<double> out(nodes, 0.0);
    std::vector<double> nabla(static_cast<size_t>(m) * m * m * ad);
    std::vector<double> v(ad);
    for (long node = 0; node < nodes; ++node) {
        const double* tan = &snapshot.tangent[snapshot.tan_idx(node, 0)];
        const double* ginv = &snapshot.metric_inv[snapshot.met_idx(node)];
        const double* gam = &snapshot.christoffel[snapshot.chr_idx(node, 0)];

        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    for (int c = 0; c < ad; ++c)
                        v[c] = db[((static_cast<size_t>(k) * m + i) * m + j) * ad + c][node];
                    // subtract B(Gamma^l_{ki} d_l, d_j) + B(d_i, Gamma^l_{kj} d_l)
                    for (int l = 0; l < m; ++l) {
                        const double gki = gam[(static_cast<size_t>(l) * m + k) * m + i];
                        const double gkj = gam[(static_cast<size_t>(l) * m + k) * m + j];
                        const double* blj = &snapshot.second_ff[snapshot.sd_idx(node, l, j)];
                        const double* bil = &snapshot.second_ff[snapshot.sd_idx(node, i, l)];
                        for (int c = 0; c < ad; ++c) v[c] -= gki * blj[c] + gkj * bil[c];
                    }
                    // normal projection
                    for (int l = 0; l < m; ++l) {
                        double coeff = 0.0;
                        for (int a = 0; a < m; ++a)
                            coeff += ginv[a * m + l] *
                                     snapshot.sig.inner(std::span(v),
                                                        std::span(tan + a * ad, static_cast<size_t>(ad)));
                        for (int c = 0; c < ad; ++c) v[c] -= coeff * tan[l * ad + c];
                    }
                    double* dst = &nabla[((static_cast<size_t>(k) * m + i) * m + j) * ad];
                    std::copy(v.begin(), v.end(), dst);
                }

        double acc = 0.0;
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int kp = 0; kp < m; ++kp)
                        for (int ip = 0; ip < m; ++ip)
                            for (int jp = 0; jp < m; ++jp) {
                                const double* a =
                                    &nabla[((static_cast<size_t>(k) * m + i) * m + j) * ad];
                                const double* b =
                                    &nabla[((static_cast<size_t>(kp) * m + ip) * m + jp) * ad];
                                acc += ginv[k * m + kp] * ginv[i * m + ip] * ginv[j * m + jp] *
                                       snapshot.sig.inner(std::span(a, static_cast<size_t>(ad)),
                                                          std::span(b, static_cast<size_t>(ad)));
                            }
        out[node] = std::abs(acc);
    }
    return out;
}

namespace {

// Commutator sum over ordered pairs of the orthonormal-frame shape operators.
double node_commutator_sum(const GeometrySnapshot& snap, long node) {
    const int m = snap.m();
    const int n = snap.n();
    std::vector<SmallMatrix> ops(n, SmallMatrix(m, m));
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                ops[a].at(i, j) = snap.h_frame[snap.hf_idx(node, a) + i * m + j];
    return commutator_sum_ordered(ops);
}

double node_gram_sq(const GeometrySnapshot& snap, long node) {
    const int n = snap.n();
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double s = snap.shape_gram[snap.gram_idx(node) + a * n + b];
            acc += s * s;
        }
    return acc;
}

}  // namespace

IdentityResiduals identity_residuals(const ParametricState& state, double dt_probe) {
    if (!(dt_probe > 0.0)) throw InvalidInput("identity_residuals: dt_probe must be positive");
    const int m = state.sig.m;
    const int n = state.sig.n;
    const int ad = state.sig.ambient_dim();

    // Two RK4 probe steps; residuals are centered at the middle state.
    ParametricState s1 = state;
    if (!step(s1, dt_probe, Stepper::RK4))
        throw InvalidInput("identity_residuals: probe step produced non-finite values");
    ParametricState s2 = s1;
    if (!step(s2, dt_probe, Stepper::RK4))
        throw InvalidInput("identity_residuals: probe step produced non-finite values");

    SnapshotOptions lean;
    lean.stencil_order = 2;
    lean.with_frames = false;
    SnapshotOptions full;
    full.stencil_order = 2;
    full.with_frames = true;
    full.with_christoffels = true;

    const GeometrySnapshot snap0 = build_geometry(state, lean);
    const GeometrySnapshot snap1 = build_geometry(s1, full);
    const GeometrySnapshot snap2 = build_geometry(s2, lean);

    const long nodes = snap1.nodes();
    const double inv2dt = 1.0 / (2.0 * dt_probe);
    IdentityResiduals out;

    // res_g: d g_ij / dt + 2 <H, B_ij>
    for (long node = 0; node < nodes; ++node) {
        const double* h = &snap1.mean_curv[snap1.pos_idx(node)];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double fd = (snap2.metric[snap2.met_idx(node) + i * m + j] -
                                   snap0.metric[snap0.met_idx(node) + i * m + j]) *
                                  inv2dt;
                const double* b = &snap1.second_ff[snap1.sd_idx(node, i, j)];
                const double hb = snap1.sig.inner(std::span(h, static_cast<size_t>(ad)),
                                                  std::span(b, static_cast<size_t>(ad)));
                out.res_g = std::max(out.res_g, std::abs(fd + 2.0 * hb));
            }
    }

    // res_vol: d sqrt(g)/dt + <H,H> sqrt(g)  (signed inner product)
    const double sg_sign = state.sig.pseudo() ? -1.0 : 1.0;
    for (long node = 0; node < nodes; ++node) {
        const double fd = (snap2.sqrt_g[node] - snap0.sqrt_g[node]) * inv2dt;
        const double h2 = sg_sign * snap1.norm_H2[node];
        out.res_vol = std::max(out.res_vol, std::abs(fd + h2 * snap1.sqrt_g[node]));
    }

    // res_gamma: finite-difference Gauss-map velocity vs tension field,
    // both expressed in the middle state's adapted frames. Order-4 stencils
    // for the spatial derivative of H.
    {
        GeometrySnapshot snap1_o4 = snap1;
        snap1_o4.options.stencil_order = 4;
        const std::vector<double> tau = tension_field(snap1_o4);
        std::vector<double> dvec(ad);
        for (long node = 0; node < nodes; ++node) {
            const double* e = &snap1.metric_inv_sqrt[snap1.met_idx(node)];
            for (int i = 0; i < m; ++i)
                for (int al = 0; al < n; ++al) {
                    double v = 0.0;
                    for (int a = 0; a < m; ++a) {
                        for (int c = 0; c < ad; ++c)
                            dvec[c] = (snap2.tangent[snap2.tan_idx(node, a) + c] -
                                       snap0.tangent[snap0.tan_idx(node, a) + c]) *
                                      inv2dt;
                        const double* ef = &snap1.frame[snap1.frame_idx(node, al)];
                        const double chi = snap1.frame_sign[static_cast<size_t>(node) * n + al];
                        v += e[i * m + a] * chi *
                             snap1.sig.inner(std::span(dvec), std::span(ef, static_cast<size_t>(ad)));
                    }
                    const double diff = v - tau[tension_idx(snap1, node, i, al)];
                    out.res_gamma = std::max(out.res_gamma, std::abs(diff));
                }
        }
    }

    // res_B2: d ||B||^2/dt - Lap ||B||^2 - 2 * (algebraic terms), order-4
    // stencils for the outer operators.
    {
        const std::vector<double> lap = laplace_beltrami(snap1, snap1.norm_B2, 4);
        const std::vector<double> grad_b2 = covariant_sff_gradient_sq(snap1, 4);
        for (long node = 0; node < nodes; ++node) {
            const double fd = (snap2.norm_B2[node] - snap0.norm_B2[node]) * inv2dt;
            const double comm = node_commutator_sum(snap1, node);
            const double s2 = node_gram_sq(snap1, node);
            double alg;
            if (state.sig.pseudo())
                alg = -grad_b2[node] - comm - s2;
            else
                alg = -grad_b2[node] + comm + s2;
            out.res_B2 = std::max(out.res_B2, std::abs(fd - lap[node] - 2.0 * alg));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

void MonitorSuite::validate() const {
    if (enabled.weighted && (!ball || !ball->epsilon))
        throw InfeasibleRadius("weighted monitor requires a ball radius below sqrt(2)pi/12");
    if (enabled.gauss_radius && !ball)
        throw ConfigError("gauss_radius monitor requires ball parameters");
    if (enabled.self_similar && !rescaled)
        throw ConfigError("self_similar monitor requires a rescaled run");
    if (enabled.huisken) {
        if (!huisken) throw ConfigError("huisken monitor requires huisken parameters");
        if (rescaled) throw ConfigError("huisken monitor is not defined on rescaled records");
        if (sig.pseudo()) throw ConfigError("huisken monitor requires the Euclidean signature");
    }
    if (center) {
        if (sig.pseudo())
            throw ConfigError("custom ball centers are supported for Euclidean targets only");
        if (center->rows() != sig.m || center->cols() != sig.ambient_dim())
            throw ConfigError("ball center must be an m x (m+n) row frame");
        for (int a = 0; a < sig.m; ++a)
            for (int b = 0; b < sig.m; ++b) {
                double dot = 0.0;
                for (int c = 0; c < sig.ambient_dim(); ++c)
                    dot += center->at(a, c) * center->at(b, c);
                if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-10)
                    throw ConfigError("ball center rows must be orthonormal");
            }
    }
}

template <class StateT>
MonitorRecord MonitorSuite::evaluate_impl(const StateT& state, double t) const {
    MonitorRecord rec;
    const bool needs_frames = enabled.normal_position;

    StateT work = rescaled ? rescale(state) : state;
    SnapshotOptions opt;
    opt.stencil_order = 2;
    opt.with_frames = needs_frames;
    const GeometrySnapshot snap = build_geometry(work, opt);

    rec.t = work.time;
    rec.sup_B2 = 0.0;
    rec.sup_H2 = 0.0;
    for (long node = 0; node < snap.nodes(); ++node) {
        rec.sup_B2 = std::max(rec.sup_B2, snap.norm_B2[node]);
        rec.sup_H2 = std::max(rec.sup_H2, snap.norm_H2[node]);
    }

    if (enabled.gauss_radius || enabled.weighted) {
        const GaussRadiusResult rr = gauss_radius(snap, *ball, center);
        rec.gauss_radius_sup = rr.rho_max;
        if (enabled.weighted) {
            const WeightedMonitorResult wm = weighted_monitor(snap, *ball, rr, work.time);
            rec.weighted_sup = wm.weighted_sup;
            rec.decay_monitor = wm.decay_monitor;
        }
    }
    if (enabled.height) rec.height_sup = height_monitor(snap);
    if (enabled.normal_position) rec.normal_position_sup = normal_position_monitor(snap);
    if (enabled.huisken) {
        const HuiskenResult h = huisken_density(snap, huisken->x0, huisken->t0, huisken->exponent);
        rec.huisken_density = h.density;
    }
    if (enabled.self_similar) rec.self_similar_residual = self_similar_residual(snap);

    (void)t;
    return rec;
}

MonitorRecord MonitorSuite::evaluate(const GraphState& state, double t, long step) const {
    (void)step;
    return evaluate_impl(state, t);
}

MonitorRecord MonitorSuite::evaluate(const ParametricState& state, double t, long step) const {
    (void)step;
    MonitorRecord rec = evaluate_impl(state, t);
    if (enabled.identity_residuals) {
        double dt = identity_probe_dt;
        if (!(dt > 0.0)) dt = 0.5 * cfl_dt(state, 0.9);
        const IdentityResiduals res = identity_residuals(state, dt);
        rec.res_g = res.res_g;
        rec.res_gamma = res.res_gamma;
        rec.res_B2 = res.res_B2;
    }
    return rec;
}

}  // namespace gaussflow
