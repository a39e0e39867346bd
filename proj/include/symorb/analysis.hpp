#pragma once

#include <vector>

#include "symorb/forcefield.hpp"
#include "symorb/integrator.hpp"
#include "symorb/vec2.hpp"

namespace symorb {

/// K = x y' - y x'.
double angular_momentum(const State& state);
/// H = |v|^2 / 2 + U(|r|) of the unperturbed field.
double energy(const PowerLawParams& params, const State& state);
/// K^2 / (2 r^2) + U(r).
double effective_potential(const PowerLawParams& params, double K, double r);

struct TurningRadii {
    double r_min = 0.0;
    double r_max = 0.0;
};

/// Roots of E = U_eff(r) on both sides of the circular radius (K^2/kappa)^(1/(2-alpha)),
/// bisected to machine precision and returned on the allowed side. Bounded near-circular
/// motion needs alpha < 2 and K != 0; otherwise throws NoBoundedMotion.
TurningRadii turning_radii(const PowerLawParams& params, double E, double K);

struct RadialProblem {
    PowerLawParams params;
    double E = 0.0;
    double K = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;

    static RadialProblem from_state(const PowerLawParams& params, const State& state);
};

enum class ApsisKind { Pericenter, Apocenter };

struct ApsisEvent {
    ApsisKind kind = ApsisKind::Pericenter;
    double t = 0.0;
    double r = 0.0;
    /// Unwrapped polar angle measured from the trajectory start.
    double angle = 0.0;
};

struct ApsidesResult {
    /// r' vanished (to 1e-9 of the speed scale) along the whole trajectory.
    bool circular = false;
    std::vector<ApsisEvent> events;
};

/// Zeros of r' = (r . v) / |r| located on the dense output. A launch point with r' = 0 is
/// reported as an apsis as well.
ApsidesResult apsides(const Trajectory& traj);

inline constexpr int kApsidalQuadratureNodes = 128;

/// Polar-angle advance between a pericenter and the next apocenter. The substitution
/// r = r_min + (r_max - r_min) sin^2(theta) removes the endpoint singularities before
/// Gauss-Legendre quadrature. Nearly circular problems (r_max - r_min < 1e-9) return the limit.
double apsidal_angle(const RadialProblem& problem);

/// pi sqrt(U'(r0) / (3 U'(r0) + r0 U''(r0))); throws DegenerateLimit when the denominator <= 0.
double apsidal_limit(const PowerLawParams& params, double r0);

/// r''(0) = epsilon (2 + epsilon) U'(a) for a launch with (1 + epsilon) times the circular velocity.
double radial_accel_at_launch(const PowerLawParams& params, double a, double epsilon);

/// Central second difference (r(h) - 2a + r(-h)) / h^2 from two integrations (forward and
/// with reversed velocity) of the same launch.
double radial_accel_finite_difference(const PowerLawParams& params, double a, double epsilon, double h = 1e-3);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

}  // namespace symorb
