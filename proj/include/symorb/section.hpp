#pragma once

#include <optional>

#include "symorb/forcefield.hpp"
#include "symorb/integrator.hpp"
#include "symorb/vec2.hpp"

namespace symorb {

/// Closed segment E = [a, b] used as a Poincare section.
class SectionSpec {
  public:
    enum class Kind { PositiveYAxis, NegativeXAxis, General };

    /// Closed segment from `a` to `b`; throws InvalidArgument when degenerate.
    SectionSpec(Vec2 a, Vec2 b, double transversality_floor, Kind kind = Kind::General);

    /// {0} x [0.25 R, 4 R].
    static SectionSpec positive_y_axis(double reference_radius, double transversality_floor);
    /// [-4 R, -0.25 R] x {0}.
    static SectionSpec negative_x_axis(double reference_radius, double transversality_floor);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const Vec2& a() const { return a_; }
    [[nodiscard]] const Vec2& b() const { return b_; }
    [[nodiscard]] double length() const { return length_; }
    [[nodiscard]] double transversality_floor() const { return floor_; }

    /// Signed distance of p to the supporting line (positive on the left of a -> b).
    [[nodiscard]] double normal_coordinate(const Vec2& p) const;
    /// Signed velocity component along the left normal.
    [[nodiscard]] double normal_speed(const Vec2& v) const;
    /// Position of the projection of p along the segment, 0 at a and 1 at b.
    [[nodiscard]] double parameter(const Vec2& p) const;

  private:
    Vec2 a_;
    Vec2 b_;
    double length_;
    double floor_;
    Kind kind_;
};

struct CrossingEvent {
    double t_star = 0.0;
    State state;
    double normal_speed = 0.0;
};

/// Smallest t* in (0, window] where `traj` meets the closed segment. Sign changes of the
/// normal coordinate are bracketed on dense-output subintervals and refined by bisection to
/// 1e-12 * window. Throws NoCrossing, TangentialCrossing or BoundaryCrossing.
CrossingEvent first_transversal_crossing(const Trajectory& traj, const SectionSpec& section, double window);

/// Scans only step `index` of `traj` (same rules as above). Empty if the step holds no hit.
std::optional<CrossingEvent> scan_step(const Trajectory& traj, std::size_t index, const SectionSpec& section,
                                       double window);

struct CrossingTime {
    double t = 0.0;
    CrossingEvent event;
    /// Integrated solution; it stops at the end of the step that contains the crossing.
    Trajectory trajectory;
};

/// flow followed by first_transversal_crossing: the map t(x, v, mu). Integration stops at the
/// first step containing a hit, so a later domain exit does not mask the crossing.
CrossingTime crossing_time(const ForceField& field, double mu, Vec2 x0, Vec2 v, const SectionSpec& section,
                           double window, const IntegratorConfig& cfg);

}  // namespace symorb
