#include "gaussflow/grassmann.hpp"

#include <algorithm>
#include <cmath>

namespace gaussflow {

double weighted_radius_bound() { return std::sqrt(2.0) / 12.0 * kPi; }
double confinable_radius_bound() { return std::sqrt(2.0) / 4.0 * kPi; }

BallParams BallParams::for_radius(double radius) {
    if (!(radius >= 0.0)) throw InvalidInput("ball radius must be >= 0");
    BallParams out;
    out.radius = radius;
    out.r0 = std::cos(std::sqrt(2.0) * radius);
    if (radius < weighted_radius_bound()) {
        out.epsilon = choose_epsilon(out.r0);
        out.q = q_exponent(out.r0, *out.epsilon);
    }
    return out;
}

JordanAngles jordan_angles(const SmallMatrix& df, const Signature& sig) {
    if (!df.all_finite()) throw InvalidInput("jordan_angles: non-finite gradient");
    SvdResult svd = svd_small(df);
    JordanAngles out;
    out.kind = sig.pseudo() ? AngleKind::Hyperbolic : AngleKind::Circular;
    out.angles.resize(svd.sigma.size());
    // Guard band: treat sigma within 1e-12 of 1 as already light-like.
    const double guard = 1.0 - 1e-12;
    for (size_t i = 0; i < svd.sigma.size(); ++i) {
        const double s = svd.sigma[i];
        if (out.kind == AngleKind::Hyperbolic) {
            if (s > guard) throw NotSpaceLike("jordan_angles: gradient singular value >= 1");
            out.angles[i] = std::atanh(s);
        } else {
            out.angles[i] = std::atan(s);
        }
    }
    std::sort(out.angles.begin(), out.angles.end(), std::greater<double>());
    return out;
}

JordanAngles jordan_angles_frames(const SmallMatrix& frame_a, const SmallMatrix& frame_b) {
    if (frame_a.rows() != frame_b.rows() || frame_a.cols() != frame_b.cols())
        throw InvalidInput("jordan_angles_frames: frame shapes differ");
    SvdResult svd = svd_small(frame_a * frame_b.transposed());
    JordanAngles out;
    out.kind = AngleKind::Circular;
    out.angles.resize(svd.sigma.size());
    for (size_t i = 0; i < svd.sigma.size(); ++i)
        out.angles[i] = std::acos(std::clamp(svd.sigma[i], -1.0, 1.0));
    std::sort(out.angles.begin(), out.angles.end(), std::greater<double>());
    return out;
}

double distance(const JordanAngles& ja) {
    double acc = 0.0;
    for (double t : ja.angles) acc += t * t;
    return std::sqrt(acc);
}

double plucker_pairing(const JordanAngles& ja) {
    double w = 1.0;
    for (double t : ja.angles)
        w *= (ja.kind == AngleKind::Hyperbolic) ? std::cosh(t) : std::cos(t);
    return w;
}

double w_floor(int m) {
    if (m < 1) throw InvalidInput("w_floor: m must be >= 1");
    return std::pow(std::cos(weighted_radius_bound()), m);
}

double epsilon_constraint_primary(double r0, double eps, double r) {
    return (3.0 / (2.0 * r0) - r / (2.0 * (1.0 - r * r))) * eps + 3.0 / (2.0 * r0) - 0.5 -
           r / (2.0 * (1.0 + r));
}

double epsilon_constraint_decay(double r0, double eps) {
    return 6.0 / r0 - r0 - 5.0 - 5.0 * eps;
}

double choose_epsilon(double r0) {
    const double feasible = std::sqrt(3.0) / 2.0;
    if (!(r0 > feasible) || !(r0 <= 1.0))
        throw InfeasibleRadius("choose_epsilon: requires cos(sqrt(2) R0) > sqrt(3)/2");
    // Primary constraint a*eps + b <= 0 with a < 0 on the feasible range.
    const double a = 3.0 / (2.0 * r0) - r0 / (2.0 * (1.0 - r0 * r0));
    const double b = 3.0 / (2.0 * r0) - 0.5 - r0 / (2.0 * (1.0 + r0));
    double threshold = 0.0;
    if (a < 0.0) {
        threshold = -b / a;
    } else if (b > 0.0) {
        throw InfeasibleRadius("choose_epsilon: primary constraint infeasible");
    }
    const double decay_threshold = (6.0 / r0 - r0 - 5.0) / 5.0;
    const double eps = std::max({threshold, decay_threshold, 0.0});
    return eps * (1.0 + 1e-12);
}

double q_exponent(double r0, double eps) {
    if (!(r0 > 0.0) || !(r0 < 1.0 + 1e-15) || eps < 0.0)
        throw InvalidInput("q_exponent: requires r0 in (0,1], eps >= 0");
    return 3.0 * ((1.0 + eps) / r0 - 1.0);
}

ConfinementPotential confinement_potential(double rho, double eps) {
    if (rho < 0.0) throw InvalidInput("confinement_potential: rho must be >= 0");
    ConfinementPotential out;
    out.cos_term = std::cos(std::sqrt(2.0) * rho);
    out.sin_term = std::sin(std::sqrt(2.0) * rho);
    out.h1 = 1.0 + eps - out.cos_term;
    return out;
}

double gradient_bound_constant(double eps) {
    if (!(eps > 0.0)) throw InvalidInput("gradient_bound_constant: eps must be > 0");
    return 1.0 / std::sqrt(eps * (eps + 2.0));
}

}  // namespace gaussflow
