#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "symorb/forcefield.hpp"
#include "symorb/integrator.hpp"
#include "symorb/vec2.hpp"

namespace symorb {

enum class OrbitSymmetry {
    XAxis,      // assembled from a half orbit, period 2 tau
    XAndYAxes,  // assembled from a quarter orbit, period 4 tau
};

std::string to_string(OrbitSymmetry s);

inline constexpr std::size_t kDefaultOrbitSamples = 1024;
/// Endpoint hypotheses of the extension must hold to this fraction of the launch scale.
inline constexpr double kHypothesisTolerance = 1e-8;

/// Closed orbit obtained by reflecting a solved segment. The segment is kept so the orbit can
/// be evaluated at any time, not only at the stored samples.
class PeriodicOrbit {
  public:
    PeriodicOrbit(Trajectory segment, OrbitSymmetry symmetry, std::size_t sample_count);

    [[nodiscard]] OrbitSymmetry symmetry() const { return symmetry_; }
    [[nodiscard]] double tau() const { return segment_.t_end(); }
    [[nodiscard]] double period() const { return (symmetry_ == OrbitSymmetry::XAxis ? 2.0 : 4.0) * tau(); }
    [[nodiscard]] double mu() const { return segment_.mu(); }
    [[nodiscard]] Vec2 x0() const { return segment_.start().position; }
    [[nodiscard]] Vec2 v_mu() const { return segment_.start().velocity; }
    [[nodiscard]] const Trajectory& segment() const { return segment_; }

    /// Extended solution at any time (periodic).
    [[nodiscard]] State state_at(double t) const;

    /// sample_count + 1 states at t_k = k T / sample_count; the last repeats the first.
    [[nodiscard]] const std::vector<State>& samples() const { return samples_; }
    /// Closed polyline of the first sample_count positions.
    [[nodiscard]] std::vector<Vec2> polyline() const;

  private:
    Trajectory segment_;
    OrbitSymmetry symmetry_;
    std::vector<State> samples_;
};

/// Mirror-and-reverse extension of a segment that starts and ends orthogonally on the x-axis.
/// Throws HypothesisViolation when y or x' at either end is not (numerically) zero.
PeriodicOrbit extend_half(const Trajectory& segment, std::size_t sample_count = kDefaultOrbitSamples);

/// Extension of a segment from the x-axis (vertical velocity) to the y-axis (horizontal
/// velocity) through both mirrors. Throws HypothesisViolation when the endpoint conditions fail.
PeriodicOrbit extend_quarter(const Trajectory& segment, std::size_t sample_count = kDefaultOrbitSamples);

struct ClosureResidual {
    double position = 0.0;
    double velocity = 0.0;
};

/// Re-integrates from the orbit start for one period: |r(T) - r(0)|, |r'(T) - r'(0)|.
ClosureResidual verify_closure(const PeriodicOrbit& orbit, const ForceField& field, double mu,
                               const IntegratorConfig& cfg);

struct SimplicityResult {
    bool simple = true;
    std::optional<Vec2> intersection;
    std::size_t first_edge = 0;
    std::size_t second_edge = 0;
};

/// Pairwise edge sweep of the closed polyline; adjacent edges are skipped.
SimplicityResult is_simple_closed(std::span<const Vec2> polyline);
SimplicityResult is_simple_closed(const PeriodicOrbit& orbit);

/// Throws PointOnCurve when a vertex lies within 1e-9 of the point.
int winding_number(std::span<const Vec2> polyline, Vec2 point = {});
int winding_number(const PeriodicOrbit& orbit, Vec2 point = {});

/// max over vertices q of dist(phi q, trace).
double symmetry_residual(std::span<const Vec2> polyline, Reflection reflection);
double symmetry_residual(const PeriodicOrbit& orbit, Reflection reflection);
double symmetry_residual(const PeriodicOrbit& orbit, const std::set<Reflection>& reflections);

enum class Axis { X, Y };

struct AxisCrossing {
    double t = 0.0;
    Vec2 point;
    Vec2 velocity;
    bool transversal = true;
};

/// Crossings of the orbit with an axis over one period, located on the continuous extension.
std::vector<AxisCrossing> axis_crossings(const PeriodicOrbit& orbit, Axis axis = Axis::X);

struct ValidationTolerances {
    double closure_position = 1e-6;
    double closure_velocity = 1e-5;
    double symmetry = 1e-7;
    double crossing_position = 1e-6;
};

struct OrbitDiagnostics {
    ClosureResidual closure;
    SimplicityResult simplicity;
    int winding = 0;
    double symmetry_x = 0.0;
    std::optional<double> symmetry_y;  // only for XAndYAxes orbits
    std::vector<AxisCrossing> crossings;
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

/// The full battery: closure, simplicity, winding +-1, mirror residuals and the two x-axis
/// crossings (at +-x0 for quarter orbits, at x0 and a negative abscissa for half orbits).
OrbitDiagnostics validate_orbit(const PeriodicOrbit& orbit, const ForceField& field, double mu,
                                const IntegratorConfig& cfg, const ValidationTolerances& tol = {});

}  // namespace symorb
