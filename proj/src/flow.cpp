#include "gaussflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaussflow {

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::ReachedTEnd: return "reached-t-end";
        case Termination::Nan: return "nan";
        case Termination::NotSpaceLikeStop: return "not-space-like";
        case Termination::CflCollapseStop: return "cfl-collapse";
    }
    return "unknown";
}

void FlowConfig::validate() const {
    if (!(cfl_factor > 0.0 && cfl_factor <= 1.0))
        throw ConfigError("flow.cfl_factor must lie in (0, 1]");
    if (!(t_end > 0.0)) throw ConfigError("flow.t_end must be positive");
    if (monitor_every < 1) throw ConfigError("flow.monitor_every must be >= 1");
}

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

RhsEval graph_rhs(const GraphState& state) {
    const Signature& sig = state.sig;
    const int m = sig.m;
    const int n = sig.n;
    const Grid& grid = state.grid;
    const long nodes = grid.node_count();
    const StencilSpec spec = grid.stencil(2);
    const double pseudo_sign = sig.pseudo() ? -1.0 : 1.0;

    std::vector<std::vector<double>> d1(static_cast<size_t>(n) * m);
    std::vector<std::vector<double>> d2(static_cast<size_t>(n) * m * m);
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < m; ++i)
            d1[static_cast<size_t>(a) * m + i] = periodic_derivative(grid, state.values[a], i, 1, spec);
        for (int i = 0; i < m; ++i) {
            d2[(static_cast<size_t>(a) * m + i) * m + i] =
                periodic_derivative(grid, state.values[a], i, 2, spec);
            for (int j = i + 1; j < m; ++j) {
                d2[(static_cast<size_t>(a) * m + i) * m + j] = periodic_derivative(
                    grid, d1[static_cast<size_t>(a) * m + j], i, 1, spec);
            }
        }
    }

    RhsEval out;
    out.velocity.assign(n, std::vector<double>(nodes, 0.0));
    out.max_inv_metric_eig = 0.0;

    double g[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    double ginv[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    for (long node = 0; node < nodes; ++node) {
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double acc = (i == j) ? 1.0 : 0.0;
                for (int a = 0; a < n; ++a) {
                    const double di = state.slope.at(a, i) + d1[static_cast<size_t>(a) * m + i][node];
                    const double dj = state.slope.at(a, j) + d1[static_cast<size_t>(a) * m + j][node];
                    acc += pseudo_sign * di * dj;
                }
                g[i * m + j] = acc;
                g[j * m + i] = acc;
            }
        double det = 0.0;
        if (!spd_invert_raw(m, g, ginv, det)) {
            if (sig.pseudo())
                throw NotSpaceLike("graph metric lost positivity at node " + std::to_string(node));
            throw InvalidInput("graph metric degenerate at node " + std::to_string(node));
        }
        double lmin = 0.0, lmax = 0.0;
        sym_range_raw(m, g, lmin, lmax);
        if (lmin > 0.0) out.max_inv_metric_eig = std::max(out.max_inv_metric_eig, 1.0 / lmin);

        for (int a = 0; a < n; ++a) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                acc += ginv[i * m + i] * d2[(static_cast<size_t>(a) * m + i) * m + i][node];
                for (int j = i + 1; j < m; ++j)
                    acc += 2.0 * ginv[i * m + j] * d2[(static_cast<size_t>(a) * m + i) * m + j][node];
            }
            out.velocity[a][node] = acc;
        }
    }
    return out;
}

RhsEval parametric_rhs(const ParametricState& state) {
    const Signature& sig = state.sig;
    const int m = sig.m;
    const int ad = sig.ambient_dim();
    const Grid& grid = state.grid;
    const long nodes = grid.node_count();
    const StencilSpec spec = grid.stencil(2);

    std::vector<std::vector<double>> d1(static_cast<size_t>(ad) * m);
    std::vector<std::vector<double>> d2(static_cast<size_t>(ad) * m * m);
    for (int c = 0; c < ad; ++c) {
        for (int i = 0; i < m; ++i)
            d1[static_cast<size_t>(c) * m + i] =
                periodic_derivative(grid, state.displacement[c], i, 1, spec);
        for (int i = 0; i < m; ++i) {
            d2[(static_cast<size_t>(c) * m + i) * m + i] =
                periodic_derivative(grid, state.displacement[c], i, 2, spec);
            for (int j = i + 1; j < m; ++j)
                d2[(static_cast<size_t>(c) * m + i) * m + j] = periodic_derivative(
                    grid, d1[static_cast<size_t>(c) * m + j], i, 1, spec);
        }
    }

    RhsEval out;
    out.velocity.assign(ad, std::vector<double>(nodes, 0.0));
    out.max_inv_metric_eig = 0.0;

    double g[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    double ginv[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    std::vector<double> tan(static_cast<size_t>(m) * ad), w(ad);
    for (long node = 0; node < nodes; ++node) {
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < ad; ++c)
                tan[static_cast<size_t>(i) * ad + c] =
                    state.lattice[i][c] / grid.periods()[i] + d1[static_cast<size_t>(c) * m + i][node];
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double v = sig.inner(std::span(tan).subspan(static_cast<size_t>(i) * ad, ad),
                                           std::span(tan).subspan(static_cast<size_t>(j) * ad, ad));
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        double det = 0.0;
        if (!spd_invert_raw(m, g, ginv, det)) {
            if (sig.pseudo())
                throw NotSpaceLike("induced metric lost positivity at node " + std::to_string(node));
            throw InvalidInput("induced metric degenerate at node " + std::to_string(node));
        }
        double lmin = 0.0, lmax = 0.0;
        sym_range_raw(m, g, lmin, lmax);
        if (lmin > 0.0) out.max_inv_metric_eig = std::max(out.max_inv_metric_eig, 1.0 / lmin);

        // W = g^{ij} d2F_ij, then project out the tangential part to get H.
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            for (int c = 0; c < ad; ++c)
                w[c] += ginv[i * m + i] * d2[(static_cast<size_t>(c) * m + i) * m + i][node];
            for (int j = i + 1; j < m; ++j)
                for (int c = 0; c < ad; ++c)
                    w[c] += 2.0 * ginv[i * m + j] * d2[(static_cast<size_t>(c) * m + i) * m + j][node];
        }
        for (int l = 0; l < m; ++l) {
            double coeff = 0.0;
            for (int k = 0; k < m; ++k)
                coeff += ginv[k * m + l] *
                         sig.inner(std::span(w), std::span(tan).subspan(static_cast<size_t>(k) * ad, ad));
            for (int c = 0; c < ad; ++c) w[c] -= coeff * tan[static_cast<size_t>(l) * ad + c];
        }
        for (int c = 0; c < ad; ++c) out.velocity[c][node] = w[c];
    }
    return out;
}

// ---------------------------------------------------------------------------
// CFL and stepping
// ---------------------------------------------------------------------------

double cfl_dt(const Grid& grid, double cfl_factor, double max_inv_metric_eig) {
    if (!(max_inv_metric_eig > 0.0) || max_inv_metric_eig > 1e12)
        throw CflCollapse("inverse metric eigenvalue exploded (near space-like breakdown)");
    double hmin2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.dim(); ++i) hmin2 = std::min(hmin2, grid.spacing(i) * grid.spacing(i));
    const double dt = cfl_factor * hmin2 / (2.0 * grid.dim() * max_inv_metric_eig);
    if (!(dt > 1e-14)) throw CflCollapse("stable time step collapsed below 1e-14");
    return dt;
}

double cfl_dt(const GraphState& state, double cfl_factor) {
    return cfl_dt(state.grid, cfl_factor, graph_rhs(state).max_inv_metric_eig);
}

double cfl_dt(const ParametricState& state, double cfl_factor) {
    return cfl_dt(state.grid, cfl_factor, parametric_rhs(state).max_inv_metric_eig);
}

namespace {

template <class StateT>
std::vector<std::vector<double>>& dofs(StateT& s);
template <>
std::vector<std::vector<double>>& dofs(GraphState& s) { return s.values; }
template <>
std::vector<std::vector<double>>& dofs(ParametricState& s) { return s.displacement; }

void axpy(std::vector<std::vector<double>>& y, double a,
          const std::vector<std::vector<double>>& x) {
    for (size_t c = 0; c < y.size(); ++c)
        for (size_t i = 0; i < y[c].size(); ++i) y[c][i] += a * x[c][i];
}

bool all_finite(const std::vector<std::vector<double>>& v) {
    for (const auto& f : v)
        for (double x : f)
            if (!std::isfinite(x)) return false;
    return true;
}

template <class StateT, class RhsFn>
bool step_impl(StateT& state, double dt, Stepper stepper, const RhsFn& rhs,
               const RhsEval* k1_opt) {
    if (stepper == Stepper::ExplicitEuler) {
        RhsEval k1_local;
        const RhsEval& k1 = k1_opt ? *k1_opt : (k1_local = rhs(state), k1_local);
        axpy(dofs(state), dt, k1.velocity);
    } else {
        RhsEval k1_local;
        const RhsEval& k1 = k1_opt ? *k1_opt : (k1_local = rhs(state), k1_local);
        StateT tmp = state;
        axpy(dofs(tmp), 0.5 * dt, k1.velocity);
        tmp.time = state.time + 0.5 * dt;
        RhsEval k2 = rhs(tmp);

        tmp = state;
        axpy(dofs(tmp), 0.5 * dt, k2.velocity);
        tmp.time = state.time + 0.5 * dt;
        RhsEval k3 = rhs(tmp);

        tmp = state;
        axpy(dofs(tmp), dt, k3.velocity);
        tmp.time = state.time + dt;
        RhsEval k4 = rhs(tmp);

        axpy(dofs(state), dt / 6.0, k1.velocity);
        axpy(dofs(state), dt / 3.0, k2.velocity);
        axpy(dofs(state), dt / 3.0, k3.velocity);
        axpy(dofs(state), dt / 6.0, k4.velocity);
    }
    state.time += dt;
    return all_finite(dofs(state));
}

}  // namespace

bool step(GraphState& state, double dt, Stepper stepper) {
    return step_impl(state, dt, stepper, [](const GraphState& s) { return graph_rhs(s); }, nullptr);
}

bool step(ParametricState& state, double dt, Stepper stepper) {
    return step_impl(state, dt, stepper,
                     [](const ParametricState& s) { return parametric_rhs(s); }, nullptr);
}

// ---------------------------------------------------------------------------
// Rescaling
// ---------------------------------------------------------------------------

double rescaled_time(double t) {
    if (t < 0.0) throw InvalidTime("rescaled_time requires t >= 0");
    return std::log(2.0 * t + 1.0);
}

GraphState rescale(const GraphState& state) {
    const double s = std::sqrt(2.0 * state.time + 1.0);
    std::vector<double> periods = state.grid.periods();
    for (double& p : periods) p /= s;
    GraphState out(state.sig, Grid(state.grid.sizes(), periods));
    out.slope = state.slope;  // gradients are scale invariant
    out.time = rescaled_time(state.time);
    for (int a = 0; a < state.sig.n; ++a)
        for (long node = 0; node < state.grid.node_count(); ++node)
            out.values[a][node] = state.values[a][node] / s;
    return out;
}

ParametricState rescale(const ParametricState& state) {
    const double s = std::sqrt(2.0 * state.time + 1.0);
    std::vector<double> periods = state.grid.periods();
    for (double& p : periods) p /= s;
    ParametricState out(state.sig, Grid(state.grid.sizes(), periods));
    out.time = rescaled_time(state.time);
    for (int i = 0; i < state.sig.m; ++i)
        for (int c = 0; c < state.sig.ambient_dim(); ++c)
            out.lattice[i][c] = state.lattice[i][c] / s;
    for (int c = 0; c < state.sig.ambient_dim(); ++c)
        for (long node = 0; node < state.grid.node_count(); ++node)
            out.displacement[c][node] = state.displacement[c][node] / s;
    return out;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

namespace {

template <class StateT, class RhsFn>
RunResult run_impl(const FlowConfig& config, StateT state, const RhsFn& rhs,
                   const MonitorCallback<StateT>& monitor) {
    config.validate();
    RunResult result;
    long step_count = 0;

    auto record = [&](const StateT& s, long k) {
        if (monitor) result.records.push_back(monitor(s, s.time, k));
    };

    try {
        record(state, 0);
        while (state.time < config.t_end - 1e-15) {
            RhsEval ev = rhs(state);
            double dt = cfl_dt(state.grid, config.cfl_factor, ev.max_inv_metric_eig);
            dt = std::min(dt, config.t_end - state.time);
            const bool ok = step_impl(state, dt, config.stepper, rhs, &ev);
            ++step_count;
            if (!ok) {
                result.termination = Termination::Nan;
                result.message = "non-finite state after step " + std::to_string(step_count);
                break;
            }
            if (state.time >= config.t_end - 1e-15 || step_count % config.monitor_every == 0)
                record(state, step_count);
        }
        if (result.message.empty()) result.termination = Termination::ReachedTEnd;
    } catch (const NotSpaceLike& e) {
        result.termination = Termination::NotSpaceLikeStop;
        result.message = e.what();
    } catch (const CflCollapse& e) {
        result.termination = Termination::CflCollapseStop;
        result.message = e.what();
    }
    result.final_time = state.time;
    result.steps = step_count;
    result.final_state = std::move(state);
    return result;
}

}  // namespace

RunResult run(const FlowConfig& config, GraphState initial,
              const MonitorCallback<GraphState>& monitor) {
    return run_impl(config, std::move(initial),
                    [](const GraphState& s) { return graph_rhs(s); }, monitor);
}

RunResult run(const FlowConfig& config, ParametricState initial,
              const MonitorCallback<ParametricState>& monitor) {
    return run_impl(config, std::move(initial),
                    [](const ParametricState& s) { return parametric_rhs(s); }, monitor);
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

namespace {

void fill_generator(GraphState& state, const InitialSpec& spec, double amplitude) {
    const Grid& grid = state.grid;
    const Signature& sig = state.sig;
    const int m = sig.m;
    const long nodes = grid.node_count();

    switch (spec.generator) {
        case Generator::Flat:
            for (auto& f : state.values) std::fill(f.begin(), f.end(), 0.0);
            break;
        case Generator::Sine:
            for (int a = 0; a < sig.n; ++a)
                for (long node = 0; node < nodes; ++node) {
                    double v = amplitude;
                    for (int i = 0; i < m; ++i)
                        v *= std::sin(2.0 * kPi * grid.coordinate(node, i) / grid.periods()[i]);
                    state.values[a][node] = v;
                }
            break;
        case Generator::Bump:
            for (int a = 0; a < sig.n; ++a)
                for (long node = 0; node < nodes; ++node) {
                    double v = amplitude;
                    for (int i = 0; i < m; ++i) {
                        const double L = grid.periods()[i];
                        const double c =
                            0.5 * (1.0 + std::cos(2.0 * kPi * (grid.coordinate(node, i) - 0.5 * L) / L));
                        v *= c * c;
                    }
                    state.values[a][node] = v;
                }
            break;
        case Generator::BandLimitedRandom: {
            Rng rng(spec.seed);
            const int kmax = spec.max_modes;
            for (int a = 0; a < sig.n; ++a) {
                std::fill(state.values[a].begin(), state.values[a].end(), 0.0);
                // Lexicographically positive half of the mode lattice.
                std::vector<std::vector<int>> modes;
                std::vector<int> k(m, -kmax);
                while (true) {
                    bool nonzero = false, positive = false;
                    for (int i = 0; i < m; ++i) {
                        if (k[i] != 0 && !nonzero) {
                            nonzero = true;
                            positive = k[i] > 0;
                        }
                    }
                    if (nonzero && positive) modes.push_back(k);
                    int axis = m - 1;
                    while (axis >= 0 && ++k[axis] > kmax) k[axis--] = -kmax;
                    if (axis < 0) break;
                }
                for (const auto& mode : modes) {
                    double k2 = 0.0;
                    for (int i = 0; i < m; ++i) k2 += mode[i] * mode[i];
                    const double coeff = amplitude * rng.uniform(-1.0, 1.0) / (1.0 + k2);
                    const double phase = rng.uniform(0.0, 2.0 * kPi);
                    for (long node = 0; node < nodes; ++node) {
                        double arg = phase;
                        for (int i = 0; i < m; ++i)
                            arg += 2.0 * kPi * mode[i] * grid.coordinate(node, i) / grid.periods()[i];
                        state.values[a][node] += coeff * std::cos(arg);
                    }
                }
            }
            break;
        }
    }
}

// Per-node singular values of the unit-amplitude gradient.
std::vector<double> gradient_singular_values(const GraphState& state) {
    const Grid& grid = state.grid;
    const Signature& sig = state.sig;
    const int m = sig.m;
    const int n = sig.n;
    const StencilSpec spec = grid.stencil(2);
    std::vector<std::vector<double>> d1(static_cast<size_t>(n) * m);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < m; ++i)
            d1[static_cast<size_t>(a) * m + i] = periodic_derivative(grid, state.values[a], i, 1, spec);

    const int k = std::min(m, n);
    std::vector<double> out(static_cast<size_t>(grid.node_count()) * k);
    SmallMatrix df(n, m);
    for (long node = 0; node < grid.node_count(); ++node) {
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < m; ++i)
                df.at(a, i) = state.slope.at(a, i) + d1[static_cast<size_t>(a) * m + i][node];
        SvdResult svd = svd_small(df);
        for (int j = 0; j < k; ++j) out[static_cast<size_t>(node) * k + j] = svd.sigma[j];
    }
    return out;
}

double radius_for_scale(const std::vector<double>& sigmas, int k, double scale, bool pseudo) {
    double sup = 0.0;
    for (size_t node = 0; node * k < sigmas.size(); ++node) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
            const double s = scale * sigmas[node * k + j];
            const double theta = pseudo ? std::atanh(std::min(s, 1.0 - 1e-12)) : std::atan(s);
            acc += theta * theta;
        }
        sup = std::max(sup, std::sqrt(acc));
    }
    return sup;
}

}  // namespace

GraphState make_initial_graph(const Signature& sig, const Grid& grid, const InitialSpec& spec) {
    sig.validate();
    GraphState state(sig, grid);
    if (spec.slope) {
        if (spec.slope->rows() != sig.n || spec.slope->cols() != sig.m)
            throw InvalidInput("initial slope must be n x m");
        state.slope = *spec.slope;
    }

    const bool targeted = spec.target_gauss_radius || spec.target_sigma_max;
    fill_generator(state, spec, targeted ? 1.0 : spec.amplitude);
    if (!targeted) return state;
    if (spec.generator == Generator::Flat)
        throw InvalidInput("cannot target a Gauss radius with flat initial data");
    if (spec.slope)
        throw InvalidInput("radius targeting assumes zero linear slope");

    const int k = std::min(sig.m, sig.n);
    const std::vector<double> sigmas = gradient_singular_values(state);
    double sigma_unit = 0.0;
    for (double s : sigmas) sigma_unit = std::max(sigma_unit, s);
    if (!(sigma_unit > 0.0)) throw InvalidInput("generated field has zero gradient; cannot target");

    double scale = 0.0;
    if (spec.target_sigma_max) {
        if (!(*spec.target_sigma_max > 0.0)) throw InvalidInput("target_sigma_max must be > 0");
        if (sig.pseudo() && *spec.target_sigma_max >= 1.0)
            throw NotSpaceLike("target_sigma_max must be < 1 for space-like data");
        scale = *spec.target_sigma_max / sigma_unit;
    } else {
        const double target = *spec.target_gauss_radius;
        if (!(target > 0.0)) throw InvalidInput("target_gauss_radius must be > 0");
        double lo = 0.0;
        double hi = sig.pseudo() ? (1.0 - 1e-9) / sigma_unit : 1.0 / sigma_unit;
        if (!sig.pseudo()) {
            int grow = 0;
            while (radius_for_scale(sigmas, k, hi, false) < target && grow++ < 200) hi *= 2.0;
        }
        if (radius_for_scale(sigmas, k, hi, sig.pseudo()) < target)
            throw InvalidInput("target Gauss radius unreachable for this mode set");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (radius_for_scale(sigmas, k, mid, sig.pseudo()) < target)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
        }
        scale = 0.5 * (lo + hi);
    }
    for (auto& f : state.values)
        for (double& v : f) v *= scale;
    return state;
}

double initial_gauss_radius(const GraphState& state) {
    const int k = std::min(state.sig.m, state.sig.n);
    return radius_for_scale(gradient_singular_values(state), k, 1.0, state.sig.pseudo());
}

double initial_sigma_max(const GraphState& state) {
    double sup = 0.0;
    for (double s : gradient_singular_values(state)) sup = std::max(sup, s);
    return sup;
}

}  // namespace gaussflow
