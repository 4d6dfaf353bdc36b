#include "gaussflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace gaussflow {

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

GraphState::GraphState(Signature sig_, Grid grid_) : sig(sig_), grid(std::move(grid_)) {
    sig.validate();
    if (grid.dim() != sig.m) throw InvalidInput("graph state: grid dimension must equal m");
    values.assign(sig.n, std::vector<double>(grid.node_count(), 0.0));
    slope = SmallMatrix(sig.n, sig.m);
}

double GraphState::value_total(int alpha, int node) const {
    double v = values[alpha][node];
    for (int i = 0; i < sig.m; ++i) v += slope.at(alpha, i) * grid.coordinate(node, i);
    return v;
}

void GraphState::validate() const {
    sig.validate();
    if (grid.dim() != sig.m) throw InvalidInput("graph state: grid dimension must equal m");
    if (static_cast<int>(values.size()) != sig.n)
        throw InvalidInput("graph state: expected n value fields");
    for (const auto& f : values) {
        if (static_cast<long>(f.size()) != grid.node_count())
            throw InvalidInput("graph state: field size mismatch");
        for (double v : f)
            if (!std::isfinite(v)) throw InvalidInput("graph state: non-finite value");
    }
    if (slope.rows() != sig.n || slope.cols() != sig.m)
        throw InvalidInput("graph state: slope must be n x m");
}

ParametricState::ParametricState(Signature sig_, Grid grid_) : sig(sig_), grid(std::move(grid_)) {
    sig.validate();
    if (grid.dim() != sig.m) throw InvalidInput("parametric state: grid dimension must equal m");
    displacement.assign(sig.ambient_dim(), std::vector<double>(grid.node_count(), 0.0));
    lattice.assign(sig.m, std::vector<double>(sig.ambient_dim(), 0.0));
    for (int i = 0; i < sig.m; ++i) lattice[i][i] = grid.periods()[i];
}

ParametricState ParametricState::from_graph(const GraphState& graph) {
    ParametricState out(graph.sig, graph.grid);
    out.time = graph.time;
    const int m = graph.sig.m;
    const int n = graph.sig.n;
    for (int i = 0; i < m; ++i) {
        out.lattice[i].assign(graph.sig.ambient_dim(), 0.0);
        out.lattice[i][i] = graph.grid.periods()[i];
        for (int a = 0; a < n; ++a)
            out.lattice[i][m + a] = graph.slope.at(a, i) * graph.grid.periods()[i];
    }
    for (int a = 0; a < n; ++a) out.displacement[m + a] = graph.values[a];
    return out;
}

std::vector<double> ParametricState::position(int node) const {
    const int ad = sig.ambient_dim();
    std::vector<double> f(ad);
    for (int c = 0; c < ad; ++c) f[c] = displacement[c][node];
    for (int i = 0; i < sig.m; ++i) {
        const double frac = grid.coordinate(node, i) / grid.periods()[i];
        for (int c = 0; c < ad; ++c) f[c] += frac * lattice[i][c];
    }
    return f;
}

void ParametricState::validate() const {
    sig.validate();
    if (grid.dim() != sig.m) throw InvalidInput("parametric state: grid dimension must equal m");
    if (static_cast<int>(displacement.size()) != sig.ambient_dim())
        throw InvalidInput("parametric state: expected m+n displacement fields");
    for (const auto& f : displacement) {
        if (static_cast<long>(f.size()) != grid.node_count())
            throw InvalidInput("parametric state: field size mismatch");
        for (double v : f)
            if (!std::isfinite(v)) throw InvalidInput("parametric state: non-finite value");
    }
    if (static_cast<int>(lattice.size()) != sig.m)
        throw InvalidInput("parametric state: expected m lattice vectors");
    for (const auto& l : lattice)
        if (static_cast<int>(l.size()) != sig.ambient_dim())
            throw InvalidInput("parametric state: lattice vector dimension mismatch");
}

// ---------------------------------------------------------------------------
// Snapshot assembly
// ---------------------------------------------------------------------------

namespace {

// First and second derivative fields of one scalar grid field.
struct DerivFields {
    std::vector<std::vector<double>> d1;              // [m][nodes]
    std::vector<std::vector<std::vector<double>>> d2; // [m][m][nodes]
};

DerivFields differentiate(const Grid& grid, std::span<const double> field,
                          const StencilSpec& spec) {
    const int m = grid.dim();
    DerivFields out;
    out.d1.resize(m);
    out.d2.assign(m, std::vector<std::vector<double>>(m));
    for (int i = 0; i < m; ++i) out.d1[i] = periodic_derivative(grid, field, i, 1, spec);
    for (int i = 0; i < m; ++i) {
        out.d2[i][i] = periodic_derivative(grid, field, i, 2, spec);
        for (int j = i + 1; j < m; ++j) {
            out.d2[i][j] = periodic_derivative(grid, out.d1[j], i, 1, spec);
            out.d2[j][i] = out.d2[i][j];
        }
    }
    return out;
}

void fill_scalar_eigen(GeometrySnapshot& snap) {
    const int m = snap.m();
    for (long node = 0; node < snap.nodes(); ++node) {
        double lmin = 0.0, lmax = 0.0;
        sym_range_raw(m, &snap.metric[snap.met_idx(node)], lmin, lmax);
        snap.lambda_min_g[node] = lmin;
        snap.lambda_max_g[node] = lmax;
    }
}

void build_frames(GeometrySnapshot& snap) {
    const int m = snap.m();
    const int n = snap.n();
    const int ad = snap.ad();
    const Signature& sig = snap.sig;
    snap.metric_inv_sqrt.assign(static_cast<size_t>(snap.nodes()) * m * m, 0.0);
    snap.frame.assign(static_cast<size_t>(snap.nodes()) * n * ad, 0.0);
    snap.frame_sign.assign(static_cast<size_t>(snap.nodes()) * n, 0.0);
    snap.h_frame.assign(static_cast<size_t>(snap.nodes()) * n * m * m, 0.0);
    snap.shape_gram.assign(static_cast<size_t>(snap.nodes()) * n * n, 0.0);

    std::vector<double> cand(ad), work(ad);
    for (long node = 0; node < snap.nodes(); ++node) {
        const double* tan = &snap.tangent[snap.tan_idx(node, 0)];
        const double* ginv = &snap.metric_inv[snap.met_idx(node)];

        SmallMatrix g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g.at(i, j) = snap.metric[snap.met_idx(node) + i * m + j];
        SmallMatrix e = inv_sqrt_spd(g);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                snap.metric_inv_sqrt[snap.met_idx(node) + i * m + j] = e.at(i, j);

        // Gram-Schmidt over ambient coordinate directions projected into the
        // normal space; co-directions e_{m+1}..e_{m+n} first, then e_1..e_m
        // so non-graph planes (e.g. closed curves) still get a frame.
        int accepted = 0;
        for (int candi = 0; candi < ad && accepted < n; ++candi) {
            const int c = (candi < n) ? m + candi : candi - n;
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[c] = 1.0;
            // remove tangential part: v - <v, T_k> g^{kl} T_l
            for (int l = 0; l < m; ++l) {
                double coeff = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double dk = sig.inner(std::span(cand), std::span(tan + k * ad, ad));
                    coeff += dk * ginv[k * m + l];
                }
                for (int cc = 0; cc < ad; ++cc) cand[cc] -= coeff * tan[l * ad + cc];
            }
            // orthogonalize against accepted frame vectors (twice for stability)
            for (int pass = 0; pass < 2; ++pass) {
                for (int t = 0; t < accepted; ++t) {
                    const double* et = &snap.frame[snap.frame_idx(node, t)];
                    const double chi = snap.frame_sign[node * n + t];
                    const double dot = sig.inner(std::span(cand), std::span(et, ad)) / chi;
                    for (int cc = 0; cc < ad; ++cc) cand[cc] -= dot * et[cc];
                }
            }
            const double q = sig.inner(std::span(cand), std::span(cand));
            if (std::abs(q) < 1e-10) continue;
            const double chi = (q > 0.0) ? 1.0 : -1.0;
            const double nrm = std::sqrt(std::abs(q));
            double* ea = &snap.frame[snap.frame_idx(node, accepted)];
            for (int cc = 0; cc < ad; ++cc) ea[cc] = cand[cc] / nrm;
            snap.frame_sign[node * n + accepted] = chi;
            ++accepted;
        }
        if (accepted < n)
            throw DegenerateFrame("normal frame pivot below 1e-10 at node " + std::to_string(node));

        // h components in the coordinate frame, then push to the orthonormal
        // tangent frame with g^{-1/2}.
        SmallMatrix h(m, m), tmp(m, m);
        for (int a = 0; a < n; ++a) {
            const double* ea = &snap.frame[snap.frame_idx(node, a)];
            const double chi = snap.frame_sign[node * n + a];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double* b = &snap.second_ff[snap.sd_idx(node, i, j)];
                    h.at(i, j) = chi * sig.inner(std::span(b, ad), std::span(ea, ad));
                }
            tmp = e * h * e;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    snap.h_frame[snap.hf_idx(node, a) + i * m + j] = tmp.at(i, j);
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                const double* ha = &snap.h_frame[snap.hf_idx(node, a)];
                const double* hb = &snap.h_frame[snap.hf_idx(node, b)];
                for (int k = 0; k < m * m; ++k) s += ha[k] * hb[k];
                snap.shape_gram[snap.gram_idx(node) + a * n + b] = s;
            }
    }
}

GeometrySnapshot assemble(GeometrySnapshot&& snap) {
    const Signature sig = snap.sig;
    const SnapshotOptions& options = snap.options;
    const int m = sig.m;
    const int ad = sig.ambient_dim();
    const long nodes = snap.grid.node_count();

    snap.metric.assign(static_cast<size_t>(nodes) * m * m, 0.0);
    snap.metric_inv.assign(static_cast<size_t>(nodes) * m * m, 0.0);
    snap.sqrt_g.assign(nodes, 0.0);
    snap.lambda_min_g.assign(nodes, 0.0);
    snap.lambda_max_g.assign(nodes, 0.0);
    snap.second_ff.assign(static_cast<size_t>(nodes) * m * m * ad, 0.0);
    snap.mean_curv.assign(static_cast<size_t>(nodes) * ad, 0.0);
    snap.norm_B2.assign(nodes, 0.0);
    snap.norm_H2.assign(nodes, 0.0);
    if (options.with_christoffels)
        snap.christoffel.assign(static_cast<size_t>(nodes) * m * m * m, 0.0);

    double g[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    double ginv[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    std::vector<double> gamma(static_cast<size_t>(m) * m * m);
    for (long node = 0; node < nodes; ++node) {
        const double* tan = &snap.tangent[snap.tan_idx(node, 0)];
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double v = sig.inner(std::span(tan + i * ad, static_cast<size_t>(ad)),
                                           std::span(tan + j * ad, static_cast<size_t>(ad)));
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        double det = 0.0;
        if (!spd_invert_raw(m, g, ginv, det)) {
            if (sig.pseudo())
                throw NotSpaceLike("induced metric not positive definite at node " +
                                   std::to_string(node));
            throw InvalidInput("degenerate induced metric at node " + std::to_string(node));
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                snap.metric[snap.met_idx(node) + i * m + j] = g[i * m + j];
                snap.metric_inv[snap.met_idx(node) + i * m + j] = ginv[i * m + j];
            }
        snap.sqrt_g[node] = std::sqrt(det);

        // Gamma^k_{ij} = g^{kl} <d2F_ij, T_l>
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double* sd = &snap.second_deriv[snap.sd_idx(node, i, j)];
                for (int k = 0; k < m; ++k) {
                    double acc = 0.0;
                    for (int l = 0; l < m; ++l)
                        acc += ginv[k * m + l] *
                               sig.inner(std::span(sd, static_cast<size_t>(ad)),
                                         std::span(tan + l * ad, static_cast<size_t>(ad)));
                    gamma[(static_cast<size_t>(k) * m + i) * m + j] = acc;
                    gamma[(static_cast<size_t>(k) * m + j) * m + i] = acc;
                }
            }
        if (options.with_christoffels)
            std::copy(gamma.begin(), gamma.end(), snap.christoffel.begin() + snap.chr_idx(node, 0));

        // B_ij = d2F_ij - Gamma^k_ij T_k ;  H = g^{ij} B_ij
        double* mean = &snap.mean_curv[snap.pos_idx(node)];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double* sd = &snap.second_deriv[snap.sd_idx(node, i, j)];
                double* b = &snap.second_ff[snap.sd_idx(node, i, j)];
                for (int c = 0; c < ad; ++c) {
                    double acc = sd[c];
                    for (int k = 0; k < m; ++k)
                        acc -= gamma[(static_cast<size_t>(k) * m + i) * m + j] * tan[k * ad + c];
                    b[c] = acc;
                }
                for (int c = 0; c < ad; ++c) mean[c] += ginv[i * m + j] * b[c];
            }

        // ||B||^2 = |g^{ik} g^{jl} <B_ij, B_kl>| ;  ||H||^2 = |<H, H>|
        double nb2 = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) {
                        const double* bij = &snap.second_ff[snap.sd_idx(node, i, j)];
                        const double* bkl = &snap.second_ff[snap.sd_idx(node, k, l)];
                        nb2 += ginv[i * m + k] * ginv[j * m + l] *
                               sig.inner(std::span(bij, static_cast<size_t>(ad)),
                                         std::span(bkl, static_cast<size_t>(ad)));
                    }
        snap.norm_B2[node] = std::abs(nb2);
        snap.norm_H2[node] = std::abs(sig.inner(std::span(mean, static_cast<size_t>(ad)),
                                                std::span(mean, static_cast<size_t>(ad))));
    }

    fill_scalar_eigen(snap);
    if (options.with_frames) build_frames(snap);
    return std::move(snap);
}

}  // namespace

GeometrySnapshot build_geometry(const GraphState& state, const SnapshotOptions& options) {
    const int m = state.sig.m;
    const int n = state.sig.n;
    const int ad = state.sig.ambient_dim();
    const Grid& grid = state.grid;
    const long nodes = grid.node_count();
    const StencilSpec spec = grid.stencil(options.stencil_order);

    GeometrySnapshot snap;
    snap.sig = state.sig;
    snap.grid = grid;
    snap.time = state.time;
    snap.options = options;

    snap.position.assign(static_cast<size_t>(nodes) * ad, 0.0);
    snap.tangent.assign(static_cast<size_t>(nodes) * m * ad, 0.0);
    snap.second_deriv.assign(static_cast<size_t>(nodes) * m * m * ad, 0.0);

    std::vector<DerivFields> df(n);
    for (int a = 0; a < n; ++a) df[a] = differentiate(grid, state.values[a], spec);

    for (long node = 0; node < nodes; ++node) {
        double* pos = &snap.position[snap.pos_idx(node)];
        for (int i = 0; i < m; ++i) pos[i] = grid.coordinate(node, i);
        for (int a = 0; a < n; ++a) pos[m + a] = state.value_total(a, node);

        for (int i = 0; i < m; ++i) {
            double* t = &snap.tangent[snap.tan_idx(node, i)];
            t[i] = 1.0;
            for (int a = 0; a < n; ++a) t[m + a] = state.slope.at(a, i) + df[a].d1[i][node];
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double* sd = &snap.second_deriv[snap.sd_idx(node, i, j)];
                for (int a = 0; a < n; ++a) sd[m + a] = df[a].d2[i][j][node];
            }
    }
    return assemble(std::move(snap));
}

GeometrySnapshot build_geometry(const ParametricState& state, const SnapshotOptions& options) {
    const int m = state.sig.m;
    const int ad = state.sig.ambient_dim();
    const Grid& grid = state.grid;
    const long nodes = grid.node_count();
    const StencilSpec spec = grid.stencil(options.stencil_order);

    GeometrySnapshot snap;
    snap.sig = state.sig;
    snap.grid = grid;
    snap.time = state.time;
    snap.options = options;

    snap.position.assign(static_cast<size_t>(nodes) * ad, 0.0);
    snap.tangent.assign(static_cast<size_t>(nodes) * m * ad, 0.0);
    snap.second_deriv.assign(static_cast<size_t>(nodes) * m * m * ad, 0.0);

    std::vector<DerivFields> du(ad);
    for (int c = 0; c < ad; ++c) du[c] = differentiate(grid, state.displacement[c], spec);

    for (long node = 0; node < nodes; ++node) {
        double* pos = &snap.position[snap.pos_idx(node)];
        for (int c = 0; c < ad; ++c) pos[c] = state.displacement[c][node];
        for (int i = 0; i < m; ++i) {
            const double frac = grid.coordinate(node, i) / grid.periods()[i];
            for (int c = 0; c < ad; ++c) pos[c] += frac * state.lattice[i][c];
        }
        for (int i = 0; i < m; ++i) {
            double* t = &snap.tangent[snap.tan_idx(node, i)];
            for (int c = 0; c < ad; ++c)
                t[c] = state.lattice[i][c] / grid.periods()[i] + du[c].d1[i][node];
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double* sd = &snap.second_deriv[snap.sd_idx(node, i, j)];
                for (int c = 0; c < ad; ++c) sd[c] = du[c].d2[i][j][node];
            }
    }
    return assemble(std::move(snap));
}

// ---------------------------------------------------------------------------
// Gauss data
// ---------------------------------------------------------------------------

bool GeometrySnapshot::graph_gradient(long node, SmallMatrix& df) const {
    const int mm = m();
    const int nn = n();
    // Solve X^T Df^T = Y for the graph gradient, X_ai = (T_a)_i, Y_ab = (T_a)_{m+b}.
    SmallMatrix x(mm, mm);
    for (int a = 0; a < mm; ++a)
        for (int i = 0; i < mm; ++i) x.at(a, i) = tangent[tan_idx(node, a) + i];
    // Gaussian elimination with partial pivoting on [X | Y].
    SmallMatrix y(mm, nn);
    for (int a = 0; a < mm; ++a)
        for (int b = 0; b < nn; ++b) y.at(a, b) = tangent[tan_idx(node, a) + mm + b];
    for (int col = 0; col < mm; ++col) {
        int piv = col;
        for (int r = col + 1; r < mm; ++r)
            if (std::abs(x.at(r, col)) > std::abs(x.at(piv, col))) piv = r;
        if (std::abs(x.at(piv, col)) < 1e-10) return false;
        if (piv != col) {
            for (int c = col; c < mm; ++c) std::swap(x.at(piv, c), x.at(col, c));
            for (int c = 0; c < nn; ++c) std::swap(y.at(piv, c), y.at(col, c));
        }
        for (int r = col + 1; r < mm; ++r) {
            const double f = x.at(r, col) / x.at(col, col);
            for (int c = col; c < mm; ++c) x.at(r, c) -= f * x.at(col, c);
            for (int c = 0; c < nn; ++c) y.at(r, c) -= f * y.at(col, c);
        }
    }
    SmallMatrix sol(mm, nn);  // sol_{i b} = df_{b i}
    for (int b = 0; b < nn; ++b)
        for (int i = mm - 1; i >= 0; --i) {
            double acc = y.at(i, b);
            for (int k = i + 1; k < mm; ++k) acc -= x.at(i, k) * sol.at(k, b);
            sol.at(i, b) = acc / x.at(i, i);
        }
    df = SmallMatrix(nn, mm);
    for (int b = 0; b < nn; ++b)
        for (int i = 0; i < mm; ++i) df.at(b, i) = sol.at(i, b);
    return true;
}

double GeometrySnapshot::max_speed() const {
    double sup = 0.0;
    for (long node = 0; node < nodes(); ++node) {
        double s2 = 0.0;
        for (int c = 0; c < ad(); ++c) {
            const double v = mean_curv[pos_idx(node) + c];
            s2 += v * v;
        }
        sup = std::max(sup, std::sqrt(s2));
    }
    return sup;
}

namespace {

// Orthonormal (Euclidean) row frame of the tangent plane by Gram-Schmidt.
SmallMatrix tangent_frame_euclidean(const GeometrySnapshot& snap, long node) {
    const int m = snap.m();
    const int ad = snap.ad();
    SmallMatrix q(m, ad);
    for (int i = 0; i < m; ++i) {
        std::vector<double> v(ad);
        for (int c = 0; c < ad; ++c) v[c] = snap.tangent[snap.tan_idx(node, i) + c];
        for (int t = 0; t < i; ++t) {
            double dot = 0.0;
            for (int c = 0; c < ad; ++c) dot += v[c] * q.at(t, c);
            for (int c = 0; c < ad; ++c) v[c] -= dot * q.at(t, c);
        }
        double nrm = 0.0;
        for (int c = 0; c < ad; ++c) nrm += v[c] * v[c];
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) throw DegenerateFrame("tangent frame degenerate at node " +
                                               std::to_string(node));
        for (int c = 0; c < ad; ++c) q.at(i, c) = v[c] / nrm;
    }
    return q;
}

}  // namespace

GaussField gauss_data(const GeometrySnapshot& snapshot,
                      const std::optional<SmallMatrix>& center_frame) {
    const int m = snapshot.m();
    const long nodes = snapshot.nodes();
    GaussField out;
    out.m = m;
    out.kind = snapshot.sig.pseudo() ? AngleKind::Hyperbolic : AngleKind::Circular;
    out.angles.assign(static_cast<size_t>(nodes) * m, 0.0);
    out.rho.assign(nodes, 0.0);
    out.w.assign(nodes, 0.0);
    out.pairing_defect.assign(nodes, 0.0);

    if (center_frame && snapshot.sig.pseudo())
        throw InvalidInput("custom Gauss-ball centers are supported for Euclidean targets only");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    SmallMatrix df;
    for (long node = 0; node < nodes; ++node) {
        JordanAngles ja;
        bool have_defect = false;
        double defect = nan;
        if (center_frame) {
            ja = jordan_angles_frames(*center_frame, tangent_frame_euclidean(snapshot, node));
        } else if (snapshot.graph_gradient(node, df)) {
            ja = jordan_angles(df, snapshot.sig);
            // Independent determinant route for the pairing identity.
            const double sgn = snapshot.sig.pseudo() ? -1.0 : 1.0;
            SmallMatrix g(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    double acc = (i == j) ? 1.0 : 0.0;
                    for (int a = 0; a < snapshot.n(); ++a) acc += sgn * df.at(a, i) * df.at(a, j);
                    g.at(i, j) = acc;
                }
            SmallMatrix ginv;
            double det = 0.0;
            if (invert_spd(g, ginv, det)) {
                defect = std::abs(plucker_pairing(ja) - 1.0 / std::sqrt(det));
                have_defect = true;
            }
        } else if (snapshot.sig.pseudo()) {
            // A space-like plane always projects onto the coordinate m-plane.
            throw NotSpaceLike("tangent plane at node " + std::to_string(node) +
                               " is not a graph over the base plane");
        } else {
            // Plane is not a graph over the coordinate m-plane (Euclidean only).
            SmallMatrix p0(m, snapshot.ad());
            for (int i = 0; i < m; ++i) p0.at(i, i) = 1.0;
            ja = jordan_angles_frames(p0, tangent_frame_euclidean(snapshot, node));
        }
        for (int i = 0; i < m; ++i) out.angles[static_cast<size_t>(node) * m + i] = ja.angles[i];
        out.rho[node] = distance(ja);
        out.w[node] = plucker_pairing(ja);
        out.pairing_defect[node] = have_defect ? defect : nan;
        out.rho_max = std::max(out.rho_max, out.rho[node]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

std::vector<double> laplace_beltrami(const GeometrySnapshot& snapshot,
                                     std::span<const double> field, int order) {
    const Grid& grid = snapshot.grid;
    const int m = snapshot.m();
    const long nodes = snapshot.nodes();
    const StencilSpec spec = grid.stencil(order);

    std::vector<std::vector<double>> du(m);
    for (int j = 0; j < m; ++j) du[j] = periodic_derivative(grid, field, j, 1, spec);

    std::vector<double> flux(nodes), out(nodes, 0.0), dflux(nodes);
    for (int i = 0; i < m; ++i) {
        for (long node = 0; node < nodes; ++node) {
            const double* ginv = &snapshot.metric_inv[snapshot.met_idx(node)];
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += ginv[i * m + j] * du[j][node];
            flux[node] = snapshot.sqrt_g[node] * acc;
        }
        periodic_derivative_into(grid, flux, i, 1, spec, dflux);
        for (long node = 0; node < nodes; ++node) out[node] += dflux[node];
    }
    for (long node = 0; node < nodes; ++node) out[node] /= snapshot.sqrt_g[node];
    return out;
}

std::vector<double> tension_field(const GeometrySnapshot& snapshot) {
    if (!snapshot.options.with_frames)
        throw InvalidInput("tension_field requires a snapshot built with frames");
    const Grid& grid = snapshot.grid;
    const int m = snapshot.m();
    const int n = snapshot.n();
    const int ad = snapshot.ad();
    const long nodes = snapshot.nodes();
    const StencilSpec spec = grid.stencil(snapshot.options.stencil_order);

    // Ambient derivative of the mean curvature field along each axis.
    std::vector<std::vector<double>> dh(static_cast<size_t>(m) * ad);
    std::vector<double> comp(nodes);
    for (int c = 0; c < ad; ++c) {
        for (long node = 0; node < nodes; ++node) comp[node] = snapshot.mean_curv[snapshot.pos_idx(node) + c];
        for (int a = 0; a < m; ++a)
            dh[static_cast<size_t>(a) * ad + c] = periodic_derivative(grid, comp, a, 1, spec);
    }

    std::vector<double> tau(static_cast<size_t>(nodes) * m * n, 0.0);
    std::vector<double> dvec(ad);
    for (long node = 0; node < nodes; ++node) {
        const double* e = &snapshot.metric_inv_sqrt[snapshot.met_idx(node)];
        for (int a = 0; a < m; ++a) {
            for (int c = 0; c < ad; ++c) dvec[c] = dh[static_cast<size_t>(a) * ad + c][node];
            for (int al = 0; al < n; ++al) {
                const double* ef = &snapshot.frame[snapshot.frame_idx(node, al)];
                const double chi = snapshot.frame_sign[static_cast<size_t>(node) * n + al];
                const double comp_a =
                    chi * snapshot.sig.inner(std::span(dvec), std::span(ef, static_cast<size_t>(ad)));
                for (int i = 0; i < m; ++i)
                    tau[tension_idx(snapshot, node, i, al)] += e[i * m + a] * comp_a;
            }
        }
    }
    return tau;
}

void dump_field_csv(const Grid& grid, std::span<const double> field, const std::string& name,
                    std::ostream& os) {
    os << "node";
    for (int i = 0; i < grid.dim(); ++i) os << ",x" << i + 1;
    os << "," << name << "\n";
    char buf[32];
    for (long node = 0; node < grid.node_count(); ++node) {
        os << node;
        for (int i = 0; i < grid.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", grid.coordinate(node, i));
            os << "," << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", field[node]);
        os << "," << buf << "\n";
    }
}

}  // namespace gaussflow
