#include "gaussflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gaussflow {

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

double Signature::inner(std::span<const double> u, std::span<const double> v) const {
    double acc = 0.0;
    for (int c = 0; c < m; ++c) acc += u[c] * v[c];
    const double s = pseudo() ? -1.0 : 1.0;
    for (int c = m; c < m + n; ++c) acc += s * u[c] * v[c];
    return acc;
}

void Signature::validate() const {
    if (m < 1 || n < 1) throw InvalidInput("signature requires m >= 1 and n >= 1");
    if (m + n > SmallMatrix::kMaxDim)
        throw InvalidInput("ambient dimension exceeds small-matrix capacity");
}

// ---------------------------------------------------------------------------
// SmallMatrix
// ---------------------------------------------------------------------------

SmallMatrix::SmallMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0 || rows > kMaxDim || cols > kMaxDim)
        throw InvalidInput("SmallMatrix dimensions must lie in [0, 16]");
}

SmallMatrix SmallMatrix::identity(int dim) {
    SmallMatrix out(dim, dim);
    for (int i = 0; i < dim; ++i) out.at(i, i) = 1.0;
    return out;
}

SmallMatrix SmallMatrix::transposed() const {
    SmallMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw InvalidInput("matrix product shape mismatch");
    SmallMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double aik = at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += aik * rhs.at(k, j);
        }
    return out;
}

SmallMatrix SmallMatrix::operator+(const SmallMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("matrix sum shape mismatch");
    SmallMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) + rhs.at(i, j);
    return out;
}

SmallMatrix SmallMatrix::operator-(const SmallMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("matrix diff shape mismatch");
    SmallMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) - rhs.at(i, j);
    return out;
}

SmallMatrix SmallMatrix::scaled(double s) const {
    SmallMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = s * at(i, j);
    return out;
}

double SmallMatrix::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m = std::max(m, std::abs(at(i, j)));
    return m;
}

double SmallMatrix::frobenius() const {
    double acc = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) acc += at(i, j) * at(i, j);
    return std::sqrt(acc);
}

double SmallMatrix::trace() const {
    double acc = 0.0;
    const int d = std::min(rows_, cols_);
    for (int i = 0; i < d; ++i) acc += at(i, i);
    return acc;
}

bool SmallMatrix::all_finite() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!std::isfinite(at(i, j))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

namespace {

// Orthonormal direction not in the span of the first `used` columns of u.
void complete_column(SmallMatrix& u, int col, int used) {
    const int rows = u.rows();
    for (int cand = 0; cand < rows; ++cand) {
        std::array<double, SmallMatrix::kMaxDim> w{};
        w[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < used; ++k) {
                if (k == col) continue;
                double dot = 0.0;
                for (int r = 0; r < rows; ++r) dot += w[r] * u.at(r, k);
                for (int r = 0; r < rows; ++r) w[r] -= dot * u.at(r, k);
            }
        }
        double nrm = 0.0;
        for (int r = 0; r < rows; ++r) nrm += w[r] * w[r];
        nrm = std::sqrt(nrm);
        if (nrm > 1e-3) {
            for (int r = 0; r < rows; ++r) u.at(r, col) = w[r] / nrm;
            return;
        }
    }
    throw InvalidInput("svd_small: failed to complete orthonormal basis");
}

SvdResult svd_tall(const SmallMatrix& m_in) {
    const int rows = m_in.rows();
    const int cols = m_in.cols();  // rows >= cols
    SmallMatrix a = m_in;
    SmallMatrix v = SmallMatrix::identity(cols);

    const double tol = 1e-15;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int r = 0; r < rows; ++r) {
                    app += a.at(r, p) * a.at(r, p);
                    aqq += a.at(r, q) * a.at(r, q);
                    apq += a.at(r, p) * a.at(r, q);
                }
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int r = 0; r < rows; ++r) {
                    const double ap = a.at(r, p), aq = a.at(r, q);
                    a.at(r, p) = c * ap - s * aq;
                    a.at(r, q) = s * ap + c * aq;
                }
                for (int r = 0; r < cols; ++r) {
                    const double vp = v.at(r, p), vq = v.at(r, q);
                    v.at(r, p) = c * vp - s * vq;
                    v.at(r, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(cols);
    for (int j = 0; j < cols; ++j) {
        double nrm = 0.0;
        for (int r = 0; r < rows; ++r) nrm += a.at(r, j) * a.at(r, j);
        sigma[j] = std::sqrt(nrm);
    }

    std::vector<int> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    SvdResult out;
    out.sigma.resize(cols);
    out.u = SmallMatrix(rows, cols);
    out.v = SmallMatrix(cols, cols);
    const double zero_tol = 1e-300;
    for (int j = 0; j < cols; ++j) {
        const int src = perm[j];
        out.sigma[j] = sigma[src];
        for (int r = 0; r < cols; ++r) out.v.at(r, j) = v.at(r, src);
        if (sigma[src] > zero_tol) {
            for (int r = 0; r < rows; ++r) out.u.at(r, j) = a.at(r, src) / sigma[src];
        }
    }
    for (int j = 0; j < cols; ++j)
        if (out.sigma[j] <= zero_tol) complete_column(out.u, j, cols);
    return out;
}

}  // namespace

SvdResult svd_small(const SmallMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("svd_small: empty matrix");
    if (!m.all_finite()) throw InvalidInput("svd_small: non-finite entries");
    if (m.rows() >= m.cols()) return svd_tall(m);
    SvdResult t = svd_tall(m.transposed());
    SvdResult out;
    out.sigma = std::move(t.sigma);
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    return out;
}

// ---------------------------------------------------------------------------
// Symmetric Jacobi eigensolver
// ---------------------------------------------------------------------------

SymEigenResult sym_eigen(const SmallMatrix& s_in) {
    const int dim = s_in.rows();
    if (dim == 0 || s_in.cols() != dim) throw InvalidInput("sym_eigen: matrix must be square");
    if (!s_in.all_finite()) throw InvalidInput("sym_eigen: non-finite entries");
    const double sym_tol = 1e-12 * std::max(1.0, s_in.max_abs());
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(s_in.at(i, j) - s_in.at(j, i)) > sym_tol)
                throw InvalidInput("sym_eigen: input is not symmetric");

    SmallMatrix a = s_in;
    // Work on the symmetrized copy so roundoff asymmetry cannot drift.
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const double v = 0.5 * (a.at(i, j) + a.at(j, i));
            a.at(i, j) = v;
            a.at(j, i) = v;
        }
    SmallMatrix vec = SmallMatrix::identity(dim);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) off = std::max(off, std::abs(a.at(i, j)));
        if (off <= 1e-16 * std::max(1.0, a.max_abs())) break;
        for (int p = 0; p < dim - 1; ++p) {
            for (int q = p + 1; q < dim; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < dim; ++k) {
                    const double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < dim; ++k) {
                    const double vkp = vec.at(k, p), vkq = vec.at(k, q);
                    vec.at(k, p) = c * vkp - s * vkq;
                    vec.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int i, int j) { return a.at(i, i) < a.at(j, j); });

    SymEigenResult out;
    out.values.resize(dim);
    out.vectors = SmallMatrix(dim, dim);
    for (int j = 0; j < dim; ++j) {
        out.values[j] = a.at(perm[j], perm[j]);
        for (int r = 0; r < dim; ++r) out.vectors.at(r, j) = vec.at(r, perm[j]);
    }
    return out;
}

void sym_eigen_range(SmallMatrix a, double& lambda_min, double& lambda_max) {
    const int dim = a.rows();
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) off = std::max(off, std::abs(a.at(i, j)));
        if (off <= 1e-15 * std::max(1.0, a.max_abs())) break;
        for (int p = 0; p < dim - 1; ++p)
            for (int q = p + 1; q < dim; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < dim; ++k) {
                    const double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    lambda_min = a.at(0, 0);
    lambda_max = a.at(0, 0);
    for (int i = 1; i < dim; ++i) {
        lambda_min = std::min(lambda_min, a.at(i, i));
        lambda_max = std::max(lambda_max, a.at(i, i));
    }
}

bool spd_invert_raw(int dim, const double* a, double* inv, double& det) {
    if (dim == 1) {
        if (!(a[0] > 0.0)) return false;
        det = a[0];
        inv[0] = 1.0 / a[0];
        return true;
    }
    if (dim == 2) {
        det = a[0] * a[3] - a[1] * a[2];
        if (!(a[0] > 0.0) || !(det > 0.0)) return false;
        const double w = 1.0 / det;
        inv[0] = a[3] * w;
        inv[1] = -a[1] * w;
        inv[2] = -a[2] * w;
        inv[3] = a[0] * w;
        return true;
    }
    // Cholesky on a stack buffer.
    double l[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double acc = a[i * dim + j];
            for (int k = 0; k < j; ++k) acc -= l[i * dim + k] * l[j * dim + k];
            if (i == j) {
                if (!(acc > 0.0)) return false;
                l[i * dim + i] = std::sqrt(acc);
            } else {
                l[i * dim + j] = acc / l[j * dim + j];
            }
        }
    det = 1.0;
    for (int i = 0; i < dim; ++i) det *= l[i * dim + i] * l[i * dim + i];
    double y[SmallMatrix::kMaxDim];
    for (int col = 0; col < dim; ++col) {
        for (int i = 0; i < dim; ++i) {
            double acc = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) acc -= l[i * dim + k] * y[k];
            y[i] = acc / l[i * dim + i];
        }
        for (int i = dim - 1; i >= 0; --i) {
            double acc = y[i];
            for (int k = i + 1; k < dim; ++k) acc -= l[k * dim + i] * inv[k * dim + col];
            inv[i * dim + col] = acc / l[i * dim + i];
        }
    }
    return true;
}

void sym_range_raw(int dim, const double* a_in, double& lambda_min, double& lambda_max) {
    if (dim == 1) {
        lambda_min = lambda_max = a_in[0];
        return;
    }
    if (dim == 2) {
        // (tr^2 - 4 det) rewritten as a sum of squares; the naive form
        // cancels catastrophically near equal eigenvalues.
        const double tr = a_in[0] + a_in[3];
        const double disc = std::hypot(a_in[0] - a_in[3], a_in[1] + a_in[2]);
        lambda_min = 0.5 * (tr - disc);
        lambda_max = 0.5 * (tr + disc);
        return;
    }
    double a[SmallMatrix::kMaxDim * SmallMatrix::kMaxDim];
    for (int i = 0; i < dim * dim; ++i) a[i] = a_in[i];
    double scale = 1.0;
    for (int i = 0; i < dim * dim; ++i) scale = std::max(scale, std::abs(a[i]));
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) off = std::max(off, std::abs(a[i * dim + j]));
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < dim - 1; ++p)
            for (int q = p + 1; q < dim; ++q) {
                const double apq = a[p * dim + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < dim; ++k) {
                    const double akp = a[k * dim + p], akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double apk = a[p * dim + k], aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
    }
    lambda_min = lambda_max = a[0];
    for (int i = 1; i < dim; ++i) {
        lambda_min = std::min(lambda_min, a[i * dim + i]);
        lambda_max = std::max(lambda_max, a[i * dim + i]);
    }
}

// ---------------------------------------------------------------------------
// SPD helpers
// ---------------------------------------------------------------------------

bool cholesky(const SmallMatrix& s, SmallMatrix& lower) {
    const int dim = s.rows();
    lower = SmallMatrix(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double acc = s.at(i, j);
            for (int k = 0; k < j; ++k) acc -= lower.at(i, k) * lower.at(j, k);
            if (i == j) {
                if (!(acc > 0.0)) return false;
                lower.at(i, i) = std::sqrt(acc);
            } else {
                lower.at(i, j) = acc / lower.at(j, j);
            }
        }
    }
    return true;
}

bool invert_spd(const SmallMatrix& s, SmallMatrix& inverse, double& det) {
    const int dim = s.rows();
    SmallMatrix l;
    if (!cholesky(s, l)) return false;
    det = 1.0;
    for (int i = 0; i < dim; ++i) det *= l.at(i, i) * l.at(i, i);

    inverse = SmallMatrix(dim, dim);
    std::array<double, SmallMatrix::kMaxDim> y{};
    for (int col = 0; col < dim; ++col) {
        for (int i = 0; i < dim; ++i) {
            double acc = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) acc -= l.at(i, k) * y[k];
            y[i] = acc / l.at(i, i);
        }
        for (int i = dim - 1; i >= 0; --i) {
            double acc = y[i];
            for (int k = i + 1; k < dim; ++k) acc -= l.at(k, i) * inverse.at(k, col);
            inverse.at(i, col) = acc / l.at(i, i);
        }
    }
    return true;
}

SmallMatrix inv_sqrt_spd(const SmallMatrix& s) {
    SymEigenResult eig = sym_eigen(s);
    const int dim = s.rows();
    SmallMatrix out(dim, dim);
    for (int k = 0; k < dim; ++k) {
        if (!(eig.values[k] > 0.0)) throw InvalidInput("inv_sqrt_spd: matrix not positive definite");
        const double w = 1.0 / std::sqrt(eig.values[k]);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.at(i, j) += w * eig.vectors.at(i, k) * eig.vectors.at(j, k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

Grid::Grid(std::vector<int> sizes, std::vector<double> periods)
    : sizes_(std::move(sizes)), periods_(std::move(periods)) {
    if (sizes_.empty() || sizes_.size() != periods_.size())
        throw InvalidInput("grid: sizes and periods must be non-empty and match");
    nodes_ = 1;
    for (size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] < 1) throw InvalidInput("grid: sizes must be positive");
        if (!(periods_[i] > 0.0)) throw InvalidInput("grid: periods must be positive");
        nodes_ *= sizes_[i];
    }
    strides_.assign(sizes_.size(), 1);
    for (int i = dim() - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * sizes_[i + 1];
    build_tables();
}

void Grid::build_tables() {
    auto tables = std::make_shared<std::vector<std::array<std::vector<int>, 4>>>(dim());
    const int offsets[4] = {1, -1, 2, -2};
    for (int axis = 0; axis < dim(); ++axis) {
        const long stride = strides_[axis];
        const int size = sizes_[axis];
        for (int k = 0; k < 4; ++k) {
            auto& tab = (*tables)[axis][k];
            tab.resize(nodes_);
            const int off = offsets[k];
            for (long node = 0; node < nodes_; ++node) {
                const int c = static_cast<int>((node / stride) % size);
                int nc = (c + off) % size;
                if (nc < 0) nc += size;
                tab[node] = static_cast<int>(node + (nc - c) * stride);
            }
        }
    }
    neighbor_ = std::move(tables);
}

int Grid::shift(int node, int axis, int offset) const {
    switch (offset) {
        case 0: return node;
        case 1: return (*neighbor_)[axis][0][node];
        case -1: return (*neighbor_)[axis][1][node];
        case 2: return (*neighbor_)[axis][2][node];
        case -2: return (*neighbor_)[axis][3][node];
        default: {
            const long stride = strides_[axis];
            const int size = sizes_[axis];
            const int c = static_cast<int>((node / stride) % size);
            int nc = (c + offset) % size;
            if (nc < 0) nc += size;
            return static_cast<int>(node + static_cast<long>(nc - c) * stride);
        }
    }
}

double Grid::coordinate(int node, int axis) const {
    const int c = static_cast<int>((node / strides_[axis]) % sizes_[axis]);
    return c * spacing(axis);
}

std::vector<double> Grid::coordinates(int node) const {
    std::vector<double> x(dim());
    for (int axis = 0; axis < dim(); ++axis) x[axis] = coordinate(node, axis);
    return x;
}

int Grid::node_index(std::span<const int> multi) const {
    long idx = 0;
    for (int axis = 0; axis < dim(); ++axis) {
        int c = multi[axis] % sizes_[axis];
        if (c < 0) c += sizes_[axis];
        idx += static_cast<long>(c) * strides_[axis];
    }
    return static_cast<int>(idx);
}

std::vector<double> Grid::spacings() const {
    std::vector<double> h(dim());
    for (int axis = 0; axis < dim(); ++axis) h[axis] = spacing(axis);
    return h;
}

StencilSpec Grid::stencil(int order) const {
    StencilSpec spec;
    spec.order = order;
    spec.spacing = spacings();
    spec.validate();
    return spec;
}

bool Grid::same_layout(const Grid& other) const {
    return sizes_ == other.sizes_ && periods_ == other.periods_;
}

// ---------------------------------------------------------------------------
// Stencils
// ---------------------------------------------------------------------------

void StencilSpec::validate() const {
    if (order != 2 && order != 4) throw InvalidInput("stencil order must be 2 or 4");
    for (double h : spacing)
        if (!(h > 0.0)) throw InvalidInput("stencil spacing must be positive");
}

void periodic_derivative_into(const Grid& grid, std::span<const double> field, int axis,
                              int deriv_order, const StencilSpec& spec, std::span<double> out) {
    spec.validate();
    if (axis < 0 || axis >= grid.dim()) throw InvalidInput("derivative axis out of range");
    if (deriv_order != 1 && deriv_order != 2)
        throw InvalidInput("derivative order must be 1 or 2");
    if (grid.sizes()[axis] < spec.width())
        throw GridTooSmall("grid too small for the requested stencil");
    const double h = spec.spacing[axis];
    const long nodes = grid.node_count();

    if (spec.order == 2 && deriv_order == 1) {
        const double w = 0.5 / h;
        for (long i = 0; i < nodes; ++i)
            out[i] = w * (field[grid.shift(i, axis, 1)] - field[grid.shift(i, axis, -1)]);
    } else if (spec.order == 2 && deriv_order == 2) {
        const double w = 1.0 / (h * h);
        for (long i = 0; i < nodes; ++i)
            out[i] = w * (field[grid.shift(i, axis, 1)] - 2.0 * field[i] +
                          field[grid.shift(i, axis, -1)]);
    } else if (spec.order == 4 && deriv_order == 1) {
        const double w = 1.0 / (12.0 * h);
        for (long i = 0; i < nodes; ++i)
            out[i] = w * (field[grid.shift(i, axis, -2)] - 8.0 * field[grid.shift(i, axis, -1)] +
                          8.0 * field[grid.shift(i, axis, 1)] - field[grid.shift(i, axis, 2)]);
    } else {
        const double w = 1.0 / (12.0 * h * h);
        for (long i = 0; i < nodes; ++i)
            out[i] = w * (-field[grid.shift(i, axis, -2)] + 16.0 * field[grid.shift(i, axis, -1)] -
                          30.0 * field[i] + 16.0 * field[grid.shift(i, axis, 1)] -
                          field[grid.shift(i, axis, 2)]);
    }
}

std::vector<double> periodic_derivative(const Grid& grid, std::span<const double> field,
                                        int axis, int deriv_order, const StencilSpec& spec) {
    std::vector<double> out(grid.node_count());
    periodic_derivative_into(grid, field, axis, deriv_order, spec, out);
    return out;
}

}  // namespace gaussflow
