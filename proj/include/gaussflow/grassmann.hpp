#pragma once

#include <optional>
#include <vector>

#include "gaussflow/numerics.hpp"

namespace gaussflow {

/// Gauss-ball radius bound sqrt(2)/12 * pi below which the weighted
/// curvature estimate applies (Euclidean target).
double weighted_radius_bound();
/// Short-time / confinable bound sqrt(2)/4 * pi.
double confinable_radius_bound();

enum class AngleKind { Circular, Hyperbolic };

/// Jordan (principal) angles between a tangent plane and the reference
/// plane, sorted descending. Circular for Euclidean targets, hyperbolic
/// for space-like planes in the pseudo-Euclidean case.
struct JordanAngles {
    std::vector<double> angles;
    AngleKind kind = AngleKind::Circular;
};

/// Scalar parameters of a geodesic Gauss ball of radius R0 centered at the
/// reference plane. epsilon/q are present only in the weighted regime
/// R0 < sqrt(2)pi/12.
struct BallParams {
    double radius = 0.0;       // R0
    double r0 = 1.0;           // cos(sqrt(2) R0)
    std::optional<double> epsilon;
    std::optional<double> q;

    static BallParams for_radius(double radius);
};

/// Jordan angles of the graph plane span{e_i + (Df)_{alpha i} e_alpha}
/// relative to the coordinate m-plane. Df is the n x m gradient matrix.
JordanAngles jordan_angles(const SmallMatrix& df, const Signature& sig);

/// Principal angles between two planes given as orthonormal row frames
/// (m x (m+n) each); Euclidean targets only.
JordanAngles jordan_angles_frames(const SmallMatrix& frame_a, const SmallMatrix& frame_b);

/// Geodesic distance sqrt(sum theta_i^2).
double distance(const JordanAngles& ja);

/// Pluecker pairing <P, P0>: prod cos(theta) (circular) or prod cosh(theta)
/// (hyperbolic); equals det(g)^{-1/2} of the corresponding graph metric.
double plucker_pairing(const JordanAngles& ja);

/// Lower bound (cos(sqrt(2)pi/12))^m for the pairing inside the weighted ball.
double w_floor(int m);

/// Smallest epsilon > 0 making both weighted-estimate constraints hold at
/// r0 = cos(sqrt(2) R0); requires r0 > sqrt(3)/2.
double choose_epsilon(double r0);

/// The two closed-form feasibility expressions behind choose_epsilon,
/// evaluated at cos-distance r (both must be <= 0 for the estimate).
double epsilon_constraint_primary(double r0, double eps, double r);
double epsilon_constraint_decay(double r0, double eps);

/// Weighted-estimate exponent q = 3((1+eps)/r0 - 1).
double q_exponent(double r0, double eps);

/// Confinement potential h1 = 1 + eps - cos(sqrt(2) rho) and its companions.
struct ConfinementPotential {
    double h1;
    double cos_term;  // cos(sqrt(2) rho)
    double sin_term;  // sin(sqrt(2) rho)
};
ConfinementPotential confinement_potential(double rho, double eps);

/// sup over theta of sin(theta) / (1 + eps - cos(theta)); the gradient-bound
/// constant 1/sqrt(eps(eps+2)).
double gradient_bound_constant(double eps);

}  // namespace gaussflow
