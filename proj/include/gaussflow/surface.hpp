#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussflow/grassmann.hpp"
#include "gaussflow/numerics.hpp"

namespace gaussflow {

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Periodic graph (x, f(x)) with f = slope * x + periodic part. The linear
/// slope keeps tilted planes exactly representable on the periodic grid.
struct GraphState {
    Signature sig;
    Grid grid;
    std::vector<std::vector<double>> values;  // [n][nodes], periodic part of f^alpha
    SmallMatrix slope;                        // n x m, defaults to zero
    double time = 0.0;

    GraphState() = default;
    GraphState(Signature sig_, Grid grid_);

    double value_total(int alpha, int node) const;
    void validate() const;
};

/// Periodic immersion F = sum_i (x_i / L_i) lattice_i + u(x) with periodic
/// displacement u. lattice_i is the position jump across one period along
/// axis i (L_i e_i for graphs, zero for closed immersions like circles).
struct ParametricState {
    Signature sig;
    Grid grid;
    std::vector<std::vector<double>> displacement;  // [m+n][nodes]
    std::vector<std::vector<double>> lattice;       // [m][m+n]
    double time = 0.0;

    ParametricState() = default;
    ParametricState(Signature sig_, Grid grid_);

    static ParametricState from_graph(const GraphState& graph);
    std::vector<double> position(int node) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Geometry snapshot
// ---------------------------------------------------------------------------

struct SnapshotOptions {
    int stencil_order = 2;
    bool with_frames = true;
    bool with_christoffels = false;
};

/// Immutable per-node geometry of a state: metric, second fundamental form,
/// mean curvature, norms, and (optionally) an orthonormal normal frame with
/// the shape-operator Gram matrix.
class GeometrySnapshot {
public:
    Signature sig;
    Grid grid;
    double time = 0.0;
    SnapshotOptions options;

    // Flattened per-node data; see the index helpers below.
    std::vector<double> position;        // [nodes][ad]
    std::vector<double> tangent;         // [nodes][m][ad]      dF/dx_i
    std::vector<double> second_deriv;    // [nodes][m][m][ad]   d2F/dx_i dx_j
    std::vector<double> metric;          // [nodes][m][m]
    std::vector<double> metric_inv;      // [nodes][m][m]
    std::vector<double> metric_inv_sqrt; // [nodes][m][m]       g^{-1/2} (frames only)
    std::vector<double> sqrt_g;          // [nodes]
    std::vector<double> lambda_min_g;    // [nodes]
    std::vector<double> lambda_max_g;    // [nodes]
    std::vector<double> christoffel;     // [nodes][m][m][m]    Gamma^k_{ij}, index (k,i,j)
    std::vector<double> second_ff;       // [nodes][m][m][ad]   B_ij ambient vectors
    std::vector<double> mean_curv;       // [nodes][ad]
    std::vector<double> norm_B2;         // [nodes]             ||B||^2
    std::vector<double> norm_H2;         // [nodes]             ||H||^2
    std::vector<double> frame;           // [nodes][n][ad]      normal frame e_alpha
    std::vector<double> frame_sign;      // [nodes][n]          <e_a, e_a> (+1 or -1)
    std::vector<double> h_frame;         // [nodes][n][m][m]    h_{alpha ij}, orthonormal tangent frame
    std::vector<double> shape_gram;      // [nodes][n][n]       S_{alpha beta}

    int m() const { return sig.m; }
    int n() const { return sig.n; }
    int ad() const { return sig.ambient_dim(); }
    long nodes() const { return grid.node_count(); }

    size_t pos_idx(long node) const { return static_cast<size_t>(node) * ad(); }
    size_t tan_idx(long node, int i) const { return (static_cast<size_t>(node) * m() + i) * ad(); }
    size_t sd_idx(long node, int i, int j) const {
        return ((static_cast<size_t>(node) * m() + i) * m() + j) * ad();
    }
    size_t met_idx(long node) const { return static_cast<size_t>(node) * m() * m(); }
    size_t chr_idx(long node, int k) const {
        return (static_cast<size_t>(node) * m() + k) * m() * m();
    }
    size_t frame_idx(long node, int a) const { return (static_cast<size_t>(node) * n() + a) * ad(); }
    size_t hf_idx(long node, int a) const {
        return (static_cast<size_t>(node) * n() + a) * m() * m();
    }
    size_t gram_idx(long node) const { return static_cast<size_t>(node) * n() * n(); }

    /// Graph gradient (n x m) reconstructed from the tangent frame; false if
    /// the plane at `node` is not a graph over the coordinate m-plane.
    bool graph_gradient(long node, SmallMatrix& df) const;

    double max_speed() const;  // sup-node ambient norm of H
};

GeometrySnapshot build_geometry(const GraphState& state, const SnapshotOptions& options = {});
GeometrySnapshot build_geometry(const ParametricState& state, const SnapshotOptions& options = {});

// ---------------------------------------------------------------------------
// Gauss data
// ---------------------------------------------------------------------------

/// Per-node Gauss-map data relative to a reference plane (the coordinate
/// m-plane by default).
struct GaussField {
    AngleKind kind = AngleKind::Circular;
    int m = 0;
    std::vector<double> angles;          // [nodes][m], descending
    std::vector<double> rho;             // [nodes]
    std::vector<double> w;               // [nodes]
    std::vector<double> pairing_defect;  // [nodes], |w - g^{-1/2}| (NaN when not graph-checkable)
    double rho_max = 0.0;
};

GaussField gauss_data(const GeometrySnapshot& snapshot,
                      const std::optional<SmallMatrix>& center_frame = std::nullopt);

// ---------------------------------------------------------------------------
// Operators on snapshots
// ---------------------------------------------------------------------------

/// Divergence-form Laplace-Beltrami of a scalar grid field.
std::vector<double> laplace_beltrami(const GeometrySnapshot& snapshot,
                                     std::span<const double> field, int order = 2);

/// Tension-field components of the Gauss map: tau[node][i][a] =
/// <normal derivative of H along the i-th orthonormal tangent direction,
/// e_a>, an m x n array per node. Requires frames.
std::vector<double> tension_field(const GeometrySnapshot& snapshot);
inline size_t tension_idx(const GeometrySnapshot& s, long node, int i, int a) {
    return (static_cast<size_t>(node) * s.m() + i) * s.n() + a;
}

/// One CSV row per node: node index, coordinates, value.
void dump_field_csv(const Grid& grid, std::span<const double> field, const std::string& name,
                    std::ostream& os);

}  // namespace gaussflow
