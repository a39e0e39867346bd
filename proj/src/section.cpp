#include "symorb/section.hpp"

#include <cmath>
#include <sstream>

#include "symorb/errors.hpp"

namespace symorb {

namespace {
constexpr int kSubdivisions = 8;
constexpr double kTimeTolerance = 1e-12;      // relative to the window
constexpr double kBoundaryTolerance = 1e-9;   // relative to the segment length
}  // namespace

SectionSpec::SectionSpec(Vec2 a, Vec2 b, double transversality_floor, Kind kind)
    : a_(a), b_(b), length_(distance(a, b)), floor_(transversality_floor), kind_(kind) {
    if (!(length_ > 0.0)) throw InvalidArgument("section segment must have positive length");
    if (!(floor_ >= 0.0)) throw InvalidArgument("transversality floor must be nonnegative");
}

SectionSpec SectionSpec::positive_y_axis(double reference_radius, double transversality_floor) {
    return {{0.0, 0.25 * reference_radius}, {0.0, 4.0 * reference_radius}, transversality_floor,
            Kind::PositiveYAxis};
}

SectionSpec SectionSpec::negative_x_axis(double reference_radius, double transversality_floor) {
    return {{-4.0 * reference_radius, 0.0}, {-0.25 * reference_radius, 0.0}, transversality_floor,
            Kind::NegativeXAxis};
}

double SectionSpec::normal_coordinate(const Vec2& p) const { return cross(b_ - a_, p - a_) / length_; }

double SectionSpec::normal_speed(const Vec2& v) const { return cross(b_ - a_, v) / length_; }

double SectionSpec::parameter(const Vec2& p) const { return dot(p - a_, b_ - a_) / (length_ * length_); }

std::optional<CrossingEvent> scan_step(const Trajectory& traj, std::size_t index, const SectionSpec& section,
                                       double window) {
    const auto& step = traj.steps()[index];
    const double lo_t = step.t0;
    const double hi_t = std::min({step.t1(), window, traj.t_end()});
    if (!(hi_t > lo_t)) return std::nullopt;

    auto normal_at = [&](double t) { return section.normal_coordinate(traj.interpolate(t).position); };

    double ta = lo_t;
    double na = normal_at(ta);
    for (int j = 1; j <= kSubdivisions; ++j) {
        const double tb = j == kSubdivisions ? hi_t : lo_t + (hi_t - lo_t) * j / kSubdivisions;
        const double nb = normal_at(tb);
        const bool change = (na < 0.0 && nb > 0.0) || (na > 0.0 && nb < 0.0) || (na != 0.0 && nb == 0.0);
        if (change) {
            double a = ta, b = tb;
            const bool a_negative = na < 0.0;
            const double tol = kTimeTolerance * window;
            for (int it = 0; it < 200 && b - a > tol; ++it) {
                const double mid = 0.5 * (a + b);
                const double nm = normal_at(mid);
                if (nm == 0.0) {
                    a = b = mid;
                    break;
                }
                ((nm < 0.0) == a_negative ? a : b) = mid;
            }
            const double t_star = 0.5 * (a + b);
            const State s = traj.interpolate(t_star);
            const double param = section.parameter(s.position);
            if (param >= -kBoundaryTolerance && param <= 1.0 + kBoundaryTolerance) {
                if (param <= kBoundaryTolerance || param >= 1.0 - kBoundaryTolerance) {
                    std::ostringstream msg;
                    msg << "crossing at " << s.position << " (t = " << t_star << ") hits the segment boundary";
                    throw BoundaryCrossing(msg.str());
                }
                const double vn = section.normal_speed(s.velocity);
                if (std::abs(vn) < section.transversality_floor()) {
                    std::ostringstream msg;
                    msg << "crossing at t = " << t_star << " has normal speed " << vn << " below floor "
                        << section.transversality_floor();
                    throw TangentialCrossing(msg.str());
                }
                return CrossingEvent{t_star, s, vn};
            }
        }
        ta = tb;
        na = nb;
    }
    return std::nullopt;
}

CrossingEvent first_transversal_crossing(const Trajectory& traj, const SectionSpec& section, double window) {
    if (!(window > 0.0)) throw InvalidArgument("crossing window must be positive");
    for (std::size_t i = 0; i < traj.step_count(); ++i) {
        if (traj.steps()[i].t0 >= window) break;
        if (auto ev = scan_step(traj, i, section, window)) return *ev;
    }
    std::ostringstream msg;
    msg << "no crossing of the section in (0, " << std::min(window, traj.t_end()) << "]";
    throw NoCrossing(msg.str());
}

CrossingTime crossing_time(const ForceField& field, double mu, Vec2 x0, Vec2 v, const SectionSpec& section,
                           double window, const IntegratorConfig& cfg) {
    if (!(window > 0.0)) throw InvalidArgument("crossing window must be positive");
    std::optional<CrossingEvent> hit;
    auto observer = [&](const Trajectory& traj) {
        hit = scan_step(traj, traj.step_count() - 1, section, window);
        return hit.has_value();
    };
    Trajectory traj = flow(field, mu, x0, v, window, cfg, observer);
    if (!hit) {
        std::ostringstream msg;
        msg << "no crossing of the section in (0, " << window << "]";
        throw NoCrossing(msg.str());
    }
    return {hit->t_star, *hit, std::move(traj)};
}

}  // namespace symorb
