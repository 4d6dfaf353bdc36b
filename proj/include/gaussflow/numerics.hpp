#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "gaussflow/errors.hpp"

namespace gaussflow {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Ambient signature
// ---------------------------------------------------------------------------

enum class SignatureKind { Euclidean, PseudoEuclidean };

/// Ambient space R^{m+n} (Euclidean) or R^{m+n}_n with inner product
/// diag(+1 x m, -1 x n).
struct Signature {
    int m = 1;
    int n = 1;
    SignatureKind kind = SignatureKind::Euclidean;

    int ambient_dim() const { return m + n; }
    bool pseudo() const { return kind == SignatureKind::PseudoEuclidean; }
    // Sign of <e_c, e_c> for ambient coordinate direction c.
    double comp_sign(int c) const { return (pseudo() && c >= m) ? -1.0 : 1.0; }

    double inner(std::span<const double> u, std::span<const double> v) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Small dense matrices (node-local objects, rows/cols <= 16)
// ---------------------------------------------------------------------------

class SmallMatrix {
public:
    static constexpr int kMaxDim = 16;

    SmallMatrix() = default;
    SmallMatrix(int rows, int cols);

    static SmallMatrix identity(int dim);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double& operator()(int i, int j) { return at(i, j); }
    double operator()(int i, int j) const { return at(i, j); }

    SmallMatrix transposed() const;
    SmallMatrix operator*(const SmallMatrix& rhs) const;
    SmallMatrix operator+(const SmallMatrix& rhs) const;
    SmallMatrix operator-(const SmallMatrix& rhs) const;
    SmallMatrix scaled(double s) const;

    double max_abs() const;
    double frobenius() const;
    double trace() const;
    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_{};
};

struct SvdResult {
    SmallMatrix u;               // rows x k, orthonormal columns
    std::vector<double> sigma;   // k = min(rows, cols), descending, >= 0
    SmallMatrix v;               // cols x k, orthonormal columns
};

/// Thin SVD by one-sided Jacobi; M = U diag(sigma) V^T.
SvdResult svd_small(const SmallMatrix& m);

struct SymEigenResult {
    std::vector<double> values;  // ascending
    SmallMatrix vectors;         // columns are eigenvectors
};

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
SymEigenResult sym_eigen(const SmallMatrix& s);

/// Extremal eigenvalues only; allocation-free path for per-node sweeps.
void sym_eigen_range(SmallMatrix s, double& lambda_min, double& lambda_max);

/// Raw-buffer helpers for the per-node hot loops (row-major dim x dim,
/// dim <= 16). No allocation, no zero-initialization of unused capacity.
bool spd_invert_raw(int dim, const double* a, double* inv, double& det);
void sym_range_raw(int dim, const double* a, double& lambda_min, double& lambda_max);

/// Cholesky-based utilities for symmetric positive definite matrices.
/// Returns false when the matrix is not positive definite.
bool cholesky(const SmallMatrix& s, SmallMatrix& lower);
bool invert_spd(const SmallMatrix& s, SmallMatrix& inverse, double& det);
/// S^{-1/2} through the spectral decomposition.
SmallMatrix inv_sqrt_spd(const SmallMatrix& s);

// ---------------------------------------------------------------------------
// Periodic grids and finite-difference stencils
// ---------------------------------------------------------------------------

/// Centered-difference stencil selection.
struct StencilSpec {
    int order = 2;                 // accuracy order, 2 or 4
    std::vector<double> spacing;   // per-axis grid spacing, > 0

    void validate() const;
    int width() const { return order == 2 ? 3 : 5; }
};

/// Uniform periodic lattice in m dimensions. Nodes are indexed row-major
/// with axis 0 slowest; node coordinates are x_i = j_i * h_i in [0, L_i).
class Grid {
public:
    Grid() = default;
    Grid(std::vector<int> sizes, std::vector<double> periods);

    int dim() const { return static_cast<int>(sizes_.size()); }
    long node_count() const { return nodes_; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& periods() const { return periods_; }
    double spacing(int axis) const { return periods_[axis] / sizes_[axis]; }
    std::vector<double> spacings() const;

    StencilSpec stencil(int order) const;

    /// Flat index of the periodic neighbor `offset` steps along `axis`
    /// (|offset| <= 2 uses the precomputed tables).
    int shift(int node, int axis, int offset) const;

    double coordinate(int node, int axis) const;
    std::vector<double> coordinates(int node) const;
    int node_index(std::span<const int> multi) const;

    bool same_layout(const Grid& other) const;

private:
    std::vector<int> sizes_;
    std::vector<double> periods_;
    std::vector<long> strides_;
    long nodes_ = 0;
    // neighbor_[axis][k] with k = 0:+1, 1:-1, 2:+2, 3:-2
    std::shared_ptr<const std::vector<std::array<std::vector<int>, 4>>> neighbor_;

    void build_tables();
};

/// d-th derivative (d = 1 or 2) of a periodic scalar field along `axis`.
std::vector<double> periodic_derivative(const Grid& grid, std::span<const double> field,
                                        int axis, int deriv_order, const StencilSpec& spec);
void periodic_derivative_into(const Grid& grid, std::span<const double> field, int axis,
                              int deriv_order, const StencilSpec& spec, std::span<double> out);

// ---------------------------------------------------------------------------
// Deterministic random numbers (explicit bit transform, reproducible
// independent of the standard library's distribution implementations)
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace gaussflow
