#pragma once

#include <span>
#include <string>
#include <vector>

#include "gaussflow/numerics.hpp"

namespace gaussflow {

/// A random second-fundamental-form sample: n symmetric m x m shape
/// operators A_alpha in an orthonormal adapted frame.
struct SffSample {
    int m = 2;
    int n = 2;
    std::vector<SmallMatrix> shape_ops;  // n symmetric m x m matrices

    static SffSample random(int m, int n, Rng& rng, double range = 2.0);
    void scale(double s);

    SmallMatrix gram() const;       // S_ab = tr(A_a A_b)
    double norm_B2() const;         // sum_a S_aa
    std::vector<double> mean_curvature() const;  // H_a = tr(A_a)
};

/// sum over ordered pairs a != b of ||[A_a, A_b]||_F^2.
double commutator_sum_ordered(std::span<const SmallMatrix> ops);

/// sum_{ab} S_ab^2 - (1/n) (sum_a S_aa)^2 >= 0.
struct TraceInequalityResult {
    double margin;
    double scale;  // |B|^4, for relative comparisons
};
TraceInequalityResult check_trace_inequality(const SffSample& sample);

/// lhs = sum_{a!=b} ||[A_a,A_b]||^2 + sum S_ab^2 against (2 - 1/n)|B|^4 and,
/// for n >= 2, the refined (3/2)|B|^4.
struct CommutatorBoundResult {
    double lhs;
    double bound_general;
    double bound_refined;  // meaningful for n >= 2
    double scale;
};
CommutatorBoundResult check_commutator_bound(const SffSample& sample);

/// Cauchy-type bound (sum_a H_a^2)^2 <= m * S_ab H_a H_b with H_a = tr(A_a).
struct HCauchyResult {
    double margin;  // m * S_ab H_a H_b - ||H||^4
    double scale;   // ||H||^4
    std::vector<double> mean;
};
HCauchyResult check_H_cauchy(const SffSample& sample);

/// Two closed forms of the squared normal-curvature norm: the inner-product
/// index expression versus the commutator sum; they must agree.
struct RPerpResult {
    double route_index;
    double route_commutator;
    double residual;
    double scale;
};
RPerpResult check_rperp_expansion(const SffSample& sample);

/// Random-sweep driver used by the CLI subcommand and the acceptance suite.
struct IdentitySuiteReport {
    struct Entry {
        std::string name;
        bool pass;
        double worst;  // worst relative margin/residual observed
    };
    std::vector<Entry> entries;
    bool all_pass() const;
};
IdentitySuiteReport run_identity_suite(long samples_per_shape, std::uint64_t seed);

}  // namespace gaussflow
