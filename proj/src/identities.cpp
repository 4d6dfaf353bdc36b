#include "gaussflow/identities.hpp"

#include <algorithm>
#include <cmath>

namespace gaussflow {

SffSample SffSample::random(int m, int n, Rng& rng, double range) {
    if (m < 1 || n < 1 || m > SmallMatrix::kMaxDim)
        throw InvalidInput("SffSample::random: bad shape");
    SffSample out;
    out.m = m;
    out.n = n;
    out.shape_ops.reserve(n);
    for (int a = 0; a < n; ++a) {
        SmallMatrix s(m, m);
        for (int i = 0; i < m; ++i) {
            s.at(i, i) = rng.uniform(-range, range);
            for (int j = i + 1; j < m; ++j) {
                const double v = rng.uniform(-range, range);
                s.at(i, j) = v;
                s.at(j, i) = v;
            }
        }
        out.shape_ops.push_back(s);
    }
    return out;
}

void SffSample::scale(double s) {
    for (auto& a : shape_ops) a = a.scaled(s);
}

SmallMatrix SffSample::gram() const {
    SmallMatrix s(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) acc += shape_ops[a].at(i, j) * shape_ops[b].at(i, j);
            s.at(a, b) = acc;
            s.at(b, a) = acc;
        }
    return s;
}

double SffSample::norm_B2() const {
    const SmallMatrix s = gram();
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += s.at(a, a);
    return acc;
}

std::vector<double> SffSample::mean_curvature() const {
    std::vector<double> h(n);
    for (int a = 0; a < n; ++a) h[a] = shape_ops[a].trace();
    return h;
}

double commutator_sum_ordered(std::span<const SmallMatrix> ops) {
    double acc = 0.0;
    const int n = static_cast<int>(ops.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const SmallMatrix c = ops[a] * ops[b] - ops[b] * ops[a];
            const double f = c.frobenius();
            acc += f * f;
        }
    return acc;
}

TraceInequalityResult check_trace_inequality(const SffSample& sample) {
    const SmallMatrix s = sample.gram();
    double sum_sq = 0.0, trace = 0.0;
    for (int a = 0; a < sample.n; ++a) {
        trace += s.at(a, a);
        for (int b = 0; b < sample.n; ++b) sum_sq += s.at(a, b) * s.at(a, b);
    }
    TraceInequalityResult out;
    out.margin = sum_sq - trace * trace / sample.n;
    out.scale = trace * trace;
    return out;
}

CommutatorBoundResult check_commutator_bound(const SffSample& sample) {
    const SmallMatrix s = sample.gram();
    double sum_sq = 0.0, trace = 0.0;
    for (int a = 0; a < sample.n; ++a) {
        trace += s.at(a, a);
        for (int b = 0; b < sample.n; ++b) sum_sq += s.at(a, b) * s.at(a, b);
    }
    CommutatorBoundResult out;
    out.lhs = commutator_sum_ordered(sample.shape_ops) + sum_sq;
    out.scale = trace * trace;  // |B|^4
    out.bound_general = (2.0 - 1.0 / sample.n) * out.scale;
    out.bound_refined = 1.5 * out.scale;
    return out;
}

HCauchyResult check_H_cauchy(const SffSample& sample) {
    const SmallMatrix s = sample.gram();
    HCauchyResult out;
    out.mean = sample.mean_curvature();
    double shh = 0.0, h2 = 0.0;
    for (int a = 0; a < sample.n; ++a) {
        h2 += out.mean[a] * out.mean[a];
        for (int b = 0; b < sample.n; ++b) shh += s.at(a, b) * out.mean[a] * out.mean[b];
    }
    // (sum_a H_a^2)^2 = <sum_a H_a A_a, I>^2 <= ||sum H_a A_a||_F^2 * ||I||_F^2,
    // so the sharp constant is the dimension m of the shape operators.
    out.margin = sample.m * shh - h2 * h2;
    out.scale = h2 * h2;
    return out;
}

RPerpResult check_rperp_expansion(const SffSample& sample) {
    const int m = sample.m;
    const int n = sample.n;
    // inner[i][j][k][l] = <B_ij, B_kl> = sum_a h_a(i,j) h_a(k,l)
    auto inner = [&](int i, int j, int k, int l) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
            acc += sample.shape_ops[a].at(i, j) * sample.shape_ops[a].at(k, l);
        return acc;
    };
    double term_mixed = 0.0, term_diag = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    term_mixed += inner(i, l, j, k) * inner(j, l, i, k);
                    term_diag += inner(i, l, i, k) * inner(j, k, j, l);
                }
    RPerpResult out;
    out.route_index = 2.0 * term_diag - 2.0 * term_mixed;
    out.route_commutator = commutator_sum_ordered(sample.shape_ops);
    out.residual = std::abs(out.route_index - out.route_commutator);
    const double b2 = sample.norm_B2();
    out.scale = b2 * b2;
    return out;
}

bool IdentitySuiteReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

IdentitySuiteReport run_identity_suite(long samples_per_shape, std::uint64_t seed) {
    IdentitySuiteReport report;
    Rng rng(seed);
    const double rel_tol = 1e-10;

    IdentitySuiteReport::Entry trace{"trace-inequality", true, 0.0};
    IdentitySuiteReport::Entry comm{"commutator-bounds", true, 0.0};
    IdentitySuiteReport::Entry cauchy{"mean-curvature-cauchy", true, 0.0};
    IdentitySuiteReport::Entry rperp{"normal-curvature-double-expression", true, 0.0};

    for (int m = 2; m <= 3; ++m) {
        for (int n = 2; n <= 3; ++n) {
            for (long it = 0; it < samples_per_shape; ++it) {
                SffSample sample = SffSample::random(m, n, rng);

                const TraceInequalityResult tr = check_trace_inequality(sample);
                const double tr_rel = -tr.margin / std::max(tr.scale, 1e-300);
                trace.worst = std::max(trace.worst, tr_rel);
                if (tr.margin < -rel_tol * std::max(tr.scale, 1.0)) trace.pass = false;

                const CommutatorBoundResult cb = check_commutator_bound(sample);
                const double excess =
                    std::max(cb.lhs - cb.bound_general,
                             (sample.n >= 2) ? cb.lhs - cb.bound_refined : -1.0);
                const double cb_rel = excess / std::max(cb.scale, 1e-300);
                comm.worst = std::max(comm.worst, cb_rel);
                if (excess > rel_tol * std::max(cb.scale, 1.0)) comm.pass = false;

                const HCauchyResult hc = check_H_cauchy(sample);
                const double hc_rel = -hc.margin / std::max(hc.scale, 1e-300);
                cauchy.worst = std::max(cauchy.worst, hc_rel);
                if (hc.margin < -rel_tol * std::max(hc.scale, 1.0)) cauchy.pass = false;

                const RPerpResult rp = check_rperp_expansion(sample);
                const double rp_rel = rp.residual / std::max(rp.scale, 1.0);
                rperp.worst = std::max(rperp.worst, rp_rel);
                if (rp.residual > rel_tol * std::max(rp.scale, 1.0)) rperp.pass = false;
            }
        }
    }
    report.entries = {trace, comm, cauchy, rperp};
    return report;
}

}  // namespace gaussflow
