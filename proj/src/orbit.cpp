#include "symorb/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "symorb/errors.hpp"

namespace symorb {

std::string to_string(OrbitSymmetry s) { return s == OrbitSymmetry::XAxis ? "x-axis" : "x-and-y-axes"; }

PeriodicOrbit::PeriodicOrbit(Trajectory segment, OrbitSymmetry symmetry, std::size_t sample_count)
    : segment_(std::move(segment)), symmetry_(symmetry) {
    if (sample_count < 4) throw InvalidArgument("orbit needs at least 4 samples");
    if (!(tau() > 0.0)) throw InvalidArgument("orbit segment has empty span");
    samples_.reserve(sample_count + 1);
    const double period = this->period();
    for (std::size_t k = 0; k <= sample_count; ++k) {
        const double t = period * static_cast<double>(k) / static_cast<double>(sample_count);
        State s = state_at(k == sample_count ? 0.0 : t);
        s.t = t;
        samples_.push_back(s);
    }
}

State PeriodicOrbit::state_at(double t) const {
    const double tau = this->tau();
    const double period = this->period();
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;

    auto forward = [&](double s) { return segment_.interpolate(s); };
    // phi r(c - u): position phi r, velocity -phi r'.
    auto reversed = [&](Reflection phi, double s) {
        State st = segment_.interpolate(s);
        return State{0.0, reflect(phi, st.position), -reflect(phi, st.velocity)};
    };

    State out;
    if (symmetry_ == OrbitSymmetry::XAxis) {
        out = u <= tau ? forward(u) : reversed(Reflection::XAxis, 2.0 * tau - u);
    } else if (u <= tau) {
        out = forward(u);
    } else if (u <= 2.0 * tau) {
        out = reversed(Reflection::YAxis, 2.0 * tau - u);
    } else if (u <= 3.0 * tau) {
        const State st = forward(u - 2.0 * tau);
        out = {0.0, -st.position, -st.velocity};
    } else {
        out = reversed(Reflection::XAxis, 4.0 * tau - u);
    }
    out.t = t;
    return out;
}

std::vector<Vec2> PeriodicOrbit::polyline() const {
    std::vector<Vec2> out;
    out.reserve(samples_.size() - 1);
    for (std::size_t i = 0; i + 1 < samples_.size(); ++i) out.push_back(samples_[i].position);
    return out;
}

namespace {

void require(bool ok, const char* what, double value, double scale) {
    if (ok) return;
    std::ostringstream msg;
    msg << "extension hypothesis failed: " << what << " = " << value << " exceeds " << kHypothesisTolerance * scale;
    throw HypothesisViolation(msg.str());
}

struct Scales {
    double position;
    double velocity;
};

Scales scales_of(const Trajectory& segment) {
    const auto& s = segment.start();
    return {std::max(s.position.norm(), 1e-300), std::max(s.velocity.norm(), 1e-300)};
}

}  // namespace

PeriodicOrbit extend_half(const Trajectory& segment, std::size_t sample_count) {
    const Scales sc = scales_of(segment);
    const State a = segment.start();
    const State b = segment.interpolate(segment.t_end());
    const double tp = kHypothesisTolerance * sc.position;
    const double tv = kHypothesisTolerance * sc.velocity;
    require(std::abs(a.position.y) < tp, "y(0)", a.position.y, sc.position);
    require(std::abs(a.velocity.x) < tv, "x'(0)", a.velocity.x, sc.velocity);
    require(std::abs(b.position.y) < tp, "y(tau)", b.position.y, sc.position);
    require(std::abs(b.velocity.x) < tv, "x'(tau)", b.velocity.x, sc.velocity);
    return {segment, OrbitSymmetry::XAxis, sample_count};
}

PeriodicOrbit extend_quarter(const Trajectory& segment, std::size_t sample_count) {
    const Scales sc = scales_of(segment);
    const State a = segment.start();
    const State b = segment.interpolate(segment.t_end());
    const double tp = kHypothesisTolerance * sc.position;
    const double tv = kHypothesisTolerance * sc.velocity;
    require(std::abs(a.position.y) < tp, "y(0)", a.position.y, sc.position);
    require(std::abs(a.velocity.x) < tv, "x'(0)", a.velocity.x, sc.velocity);
    require(std::abs(b.position.x) < tp, "x(tau)", b.position.x, sc.position);
    require(std::abs(b.velocity.y) < tv, "y'(tau)", b.velocity.y, sc.velocity);
    return {segment, OrbitSymmetry::XAndYAxes, sample_count};
}

ClosureResidual verify_closure(const PeriodicOrbit& orbit, const ForceField& field, double mu,
                               const IntegratorConfig& cfg) {
    const State start = orbit.state_at(0.0);
    const Trajectory traj = flow(field, mu, start.position, start.velocity, orbit.period(), cfg);
    const State end = traj.interpolate(traj.t_end());
    return {distance(end.position, start.position), distance(end.velocity, start.velocity)};
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

std::optional<Vec2> segment_intersection(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    if (std::max(p1.x, p2.x) < std::min(q1.x, q2.x) || std::max(q1.x, q2.x) < std::min(p1.x, p2.x) ||
        std::max(p1.y, p2.y) < std::min(q1.y, q2.y) || std::max(q1.y, q2.y) < std::min(p1.y, p2.y)) {
        return std::nullopt;
    }
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) {
        const Vec2 r = p2 - p1;
        const Vec2 s = q2 - q1;
        const double denom = cross(r, s);
        if (denom == 0.0) return p1;
        const double t = cross(q1 - p1, s) / denom;
        return p1 + t * r;
    }
    if (o1 == 0 && on_segment(p1, p2, q1)) return q1;
    if (o2 == 0 && on_segment(p1, p2, q2)) return q2;
    if (o3 == 0 && on_segment(q1, q2, p1)) return p1;
    if (o4 == 0 && on_segment(q1, q2, p2)) return p2;
    return std::nullopt;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

}  // namespace

SimplicityResult is_simple_closed(std::span<const Vec2> polyline) {
    const std::size_t n = polyline.size();
    if (n < 3) throw InvalidArgument("is_simple_closed needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a1 = polyline[i];
        const Vec2& a2 = polyline[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // closing edge shares vertex 0
            const Vec2& b1 = polyline[j];
            const Vec2& b2 = polyline[(j + 1) % n];
            if (auto p = segment_intersection(a1, a2, b1, b2)) return {false, p, i, j};
        }
    }
    return {};
}

SimplicityResult is_simple_closed(const PeriodicOrbit& orbit) {
    const auto poly = orbit.polyline();
    return is_simple_closed(poly);
}

int winding_number(std::span<const Vec2> polyline, Vec2 point) {
    const std::size_t n = polyline.size();
    if (n < 3) throw InvalidArgument("winding_number needs at least 3 vertices");
    for (const auto& v : polyline) {
        if (distance(v, point) < 1e-9) {
            std::ostringstream msg;
            msg << "point " << point << " lies on the curve";
            throw PointOnCurve(msg.str());
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polyline[i] - point;
        const Vec2 b = polyline[(i + 1) % n] - point;
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

int winding_number(const PeriodicOrbit& orbit, Vec2 point) {
    const auto poly = orbit.polyline();
    return winding_number(poly, point);
}

double symmetry_residual(std::span<const Vec2> polyline, Reflection reflection) {
    const std::size_t n = polyline.size();
    double worst = 0.0;
    for (const auto& q : polyline) {
        const Vec2 image = reflect(reflection, q);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n && best > 0.0; ++i) {
            best = std::min(best, point_segment_distance(image, polyline[i], polyline[(i + 1) % n]));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double symmetry_residual(const PeriodicOrbit& orbit, Reflection reflection) {
    const auto poly = orbit.polyline();
    return symmetry_residual(poly, reflection);
}

double symmetry_residual(const PeriodicOrbit& orbit, const std::set<Reflection>& reflections) {
    double worst = 0.0;
    for (Reflection r : reflections) worst = std::max(worst, symmetry_residual(orbit, r));
    return worst;
}

std::vector<AxisCrossing> axis_crossings(const PeriodicOrbit& orbit, Axis axis) {
    const std::size_t n = orbit.samples().size() - 1;
    const double period = orbit.period();
    auto coordinate = [&](double t) {
        const State s = orbit.state_at(t);
        return axis == Axis::X ? s.position.y : s.position.x;
    };
    // Offset grid so that the launch point (exactly on the x-axis) is never a grid node.
    auto grid = [&](std::size_t k) { return period * (static_cast<double>(k) + 0.5) / static_cast<double>(n); };

    const double speed_scale = std::max(orbit.v_mu().norm(), 1e-300);
    std::vector<AxisCrossing> out;
    double ta = grid(0);
    double ca = coordinate(ta);
    for (std::size_t k = 1; k <= n; ++k) {
        const double tb = grid(k);
        const double cb = coordinate(tb);
        if ((ca < 0.0 && cb >= 0.0) || (ca > 0.0 && cb <= 0.0)) {
            double lo = ta, hi = tb;
            const bool lo_negative = ca < 0.0;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * period; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((coordinate(mid) < 0.0) == lo_negative ? lo : hi) = mid;
            }
            double t = std::fmod(0.5 * (lo + hi), period);
            if (period - t < 1e-9 * period) t = 0.0;
            State s = orbit.state_at(t);
            const double vn = axis == Axis::X ? s.velocity.y : s.velocity.x;
            if (axis == Axis::X) {
                s.position.y = 0.0;
            } else {
                s.position.x = 0.0;
            }
            out.push_back({t, s.position, s.velocity, std::abs(vn) > 1e-9 * speed_scale});
        }
        ta = tb;
        ca = cb;
    }
    std::sort(out.begin(), out.end(), [](const AxisCrossing& a, const AxisCrossing& b) { return a.t < b.t; });
    return out;
}

OrbitDiagnostics validate_orbit(const PeriodicOrbit& orbit, const ForceField& field, double mu,
                                const IntegratorConfig& cfg, const ValidationTolerances& tol) {
    OrbitDiagnostics d;
    auto fail = [&](const std::string& what) { d.failures.push_back(what); };

    try {
        d.closure = verify_closure(orbit, field, mu, cfg);
        if (!(d.closure.position < tol.closure_position)) {
            fail("closure: position residual " + std::to_string(d.closure.position));
        }
        if (!(d.closure.velocity < tol.closure_velocity)) {
            fail("closure: velocity residual " + std::to_string(d.closure.velocity));
        }
    } catch (const Error& e) {
        d.closure = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        fail(std::string("closure: ") + e.what());
    }

    const auto poly = orbit.polyline();
    d.simplicity = is_simple_closed(poly);
    if (!d.simplicity.simple) fail("simple: polyline self-intersects");

    try {
        d.winding = winding_number(poly);
        if (std::abs(d.winding) != 1) fail("winding: " + std::to_string(d.winding));
    } catch (const PointOnCurve& e) {
        fail(std::string("winding: ") + e.what());
    }

    d.symmetry_x = symmetry_residual(poly, Reflection::XAxis);
    if (!(d.symmetry_x < tol.symmetry)) fail("symmetry: reflect-x residual " + std::to_string(d.symmetry_x));
    if (orbit.symmetry() == OrbitSymmetry::XAndYAxes) {
        d.symmetry_y = symmetry_residual(poly, Reflection::YAxis);
        if (!(*d.symmetry_y < tol.symmetry)) fail("symmetry: reflect-y residual " + std::to_string(*d.symmetry_y));
    }

    d.crossings = axis_crossings(orbit, Axis::X);
    const bool transversal = std::all_of(d.crossings.begin(), d.crossings.end(),
                                         [](const AxisCrossing& c) { return c.transversal; });
    if (d.crossings.size() != 2 || !transversal) {
        fail("crossings: expected exactly two transversal x-axis crossings, found " +
             std::to_string(d.crossings.size()));
    } else {
        const Vec2 x0 = orbit.x0();
        const Vec2 p = d.crossings[0].point;
        const Vec2 q = d.crossings[1].point;
        const bool has_x0 = distance(p, x0) < tol.crossing_position || distance(q, x0) < tol.crossing_position;
        const Vec2 other = distance(p, x0) < distance(q, x0) ? q : p;
        if (!has_x0) fail("crossings: launch point x0 not among the x-axis crossings");
        if (orbit.symmetry() == OrbitSymmetry::XAndYAxes) {
            if (distance(other, -x0) >= tol.crossing_position) fail("crossings: second crossing is not at -x0");
        } else if (!(other.x < 0.0)) {
            fail("crossings: second crossing is not on the negative x-axis");
        }
    }
    return d;
}

}  // namespace symorb
