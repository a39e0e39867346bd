#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "symorb/continuation.hpp"
#include "symorb/errors.hpp"
#include "symorb/orbit.hpp"
#include "symorb/section.hpp"

using namespace symorb;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Trajectory circle_arc(double t) { return flow(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, t, {}); }

std::vector<Vec2> circle_polyline(std::size_t n, double radius = 1.0) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        out.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
    return out;
}

// r = 0.5 + cos(theta): the inner loop crosses the outer one at the origin.
std::vector<Vec2> limacon(std::size_t n) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const double r = 0.5 + std::cos(th);
        out.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return out;
}

ShootingProblem quarter_problem() { return ShootingProblem::for_field(test::radial_family()); }
ShootingProblem half_problem() { return ShootingProblem::for_field(test::x_symmetric_family(0.5)); }
}  // namespace

TEST_CASE("half circle extends to the full circle") {
    const PeriodicOrbit orbit = extend_half(circle_arc(kPi), 256);
    CHECK(orbit.period() == Approx(2.0 * kPi));
    CHECK(orbit.symmetry() == OrbitSymmetry::XAxis);
    REQUIRE(orbit.samples().size() == 257);
    for (const auto& s : orbit.samples()) CHECK(std::abs(s.position.norm() - 1.0) < 1e-8);
    CHECK(distance(orbit.state_at(1.5 * kPi).position, {0.0, -1.0}) < 1e-8);
    CHECK(distance(orbit.state_at(1.5 * kPi).velocity, {1.0, 0.0}) < 1e-8);
    CHECK(orbit.samples().front().position == orbit.samples().back().position);
}

TEST_CASE("quarter circle extends to the full circle") {
    const PeriodicOrbit orbit = extend_quarter(circle_arc(kPi / 2.0));
    CHECK(orbit.period() == Approx(2.0 * kPi));
    for (double t : {0.3, 2.0, 3.5, 5.0, 6.0}) {
        const State s = orbit.state_at(t);
        CHECK(distance(s.position, {std::cos(t), std::sin(t)}) < 1e-8);
        CHECK(distance(s.velocity, {-std::sin(t), std::cos(t)}) < 1e-8);
    }
    // Periodic evaluation.
    CHECK(distance(orbit.state_at(1.0).position, orbit.state_at(1.0 + orbit.period()).position) < 1e-12);
    CHECK(distance(orbit.state_at(-1.0).position, orbit.state_at(orbit.period() - 1.0).position) < 1e-12);
}

TEST_CASE("extension hypotheses") {
    CHECK_THROWS_AS((void)extend_half(circle_arc(3.0)), HypothesisViolation);
    CHECK_THROWS_AS((void)extend_quarter(circle_arc(1.4)), HypothesisViolation);

    // Meets the negative x-axis but not orthogonally.
    const ForceField f({1.0, 0.5}, {}, 1.0, {0.5, 2.0});
    const auto hit = crossing_time(f, 0.0, {1.0, 0.0}, {0.0, 1.05}, SectionSpec::negative_x_axis(1.0, 1e-6), 10.0, {});
    CHECK(std::abs(hit.event.state.velocity.x) > 1e-3);
    CHECK_THROWS_AS((void)extend_half(hit.trajectory.truncated(hit.t)), HypothesisViolation);

    // Launch not vertical.
    const Trajectory tilted = flow(test::kepler(), 0.0, {1.0, 0.0}, {0.1, 1.0}, 1.0, {});
    CHECK_THROWS_AS((void)extend_half(tilted), HypothesisViolation);
}

TEST_CASE("ellipse quarter matches the third law") {
    // The focus sits at the origin, so the ellipse meets the y-axis obliquely; the
    // pericenter-to-apocenter half is the orthogonal segment.
    const double v = 1.05;
    const double a = 1.0 / (2.0 - v * v);
    const double T = 2.0 * kPi * std::pow(a, 1.5);
    const auto hit = crossing_time(test::kepler(), 0.0, {1.0, 0.0}, {0.0, v},
                                   SectionSpec::negative_x_axis(1.0, 1e-6), T, {});
    const PeriodicOrbit orbit = extend_half(hit.trajectory.truncated(hit.t));
    CHECK(std::abs(orbit.period() - T) / T < 1e-6);
    CHECK(verify_closure(orbit, test::kepler(), 0.0, {}).position < 1e-8);
    CHECK(is_simple_closed(orbit).simple);
    CHECK(winding_number(orbit) == 1);
}

TEST_CASE("solved quarter orbit") {
    const ShootingProblem p = quarter_problem();
    const PeriodicOrbit orbit = extend(p, solve(p, 0.05));
    CHECK(orbit.period() == Approx(4.0 * orbit.tau()));
    CHECK(verify_closure(orbit, p.field, 0.05, p.integrator).position < 1e-6);
    CHECK(symmetry_residual(orbit, Reflection::XAxis) < 1e-8);
    CHECK(symmetry_residual(orbit, Reflection::YAxis) < 1e-8);
    CHECK(symmetry_residual(orbit, std::set<Reflection>{Reflection::XAxis, Reflection::YAxis}) < 1e-8);
    const auto xs = axis_crossings(orbit, Axis::X);
    REQUIRE(xs.size() == 2);
    CHECK(std::abs(xs[0].point.x - 1.0) < 1e-6);
    CHECK(std::abs(xs[1].point.x + 1.0) < 1e-6);
    CHECK(axis_crossings(orbit, Axis::Y).size() == 2);
}

TEST_CASE("solved half orbit") {
    const ShootingProblem p = half_problem();
    const PeriodicOrbit orbit = extend(p, solve(p, 0.05));
    CHECK(orbit.period() == Approx(2.0 * orbit.tau()));
    CHECK(verify_closure(orbit, p.field, 0.05, p.integrator).position < 1e-6);
    CHECK(symmetry_residual(orbit, Reflection::XAxis) < 1e-8);
    // The y-axis mirror is not a symmetry of this field and the orbit shows it.
    CHECK(symmetry_residual(orbit, Reflection::YAxis) > 1e-4);
    const auto xs = axis_crossings(orbit);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0].point.x > 0.0);
    CHECK(xs[1].point.x < 0.0);
    CHECK(xs[0].transversal);

    const OrbitDiagnostics d = validate_orbit(orbit, p.field, 0.05, p.integrator);
    CHECK(d.passed());
    CHECK_FALSE(d.symmetry_y.has_value());
    CHECK(std::abs(d.winding) == 1);
}

TEST_CASE("closure residuals") {
    IntegratorConfig fine;
    fine.rel_tol = fine.abs_tol = 1e-12;
    const Trajectory quarter = flow(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, kPi / 2.0, fine);
    CHECK(verify_closure(extend_quarter(quarter), test::kepler(), 0.0, fine).position < 1e-9);

    // Off-circle orbit with the wrong quarter time.
    const ShootingProblem p = half_problem();
    const ShootingSolution s = solve(p, 0.05);
    CHECK(verify_closure(extend(p, s), p.field, 0.05, p.integrator).position < 1e-6);
    const Trajectory longer = flow(p.field, 0.05, p.x0(), s.v_mu, 1.01 * s.tau, p.integrator);
    const PeriodicOrbit bad(longer, OrbitSymmetry::XAxis, 256);
    CHECK(verify_closure(bad, p.field, 0.05, p.integrator).position > 1e-3);
    CHECK_FALSE(validate_orbit(bad, p.field, 0.05, p.integrator).passed());
}

TEST_CASE("simple closed curves") {
    CHECK(is_simple_closed(circle_polyline(200)).simple);
    const auto loop = is_simple_closed(limacon(400));
    CHECK_FALSE(loop.simple);
    REQUIRE(loop.intersection.has_value());
    CHECK(loop.intersection->norm() < 0.02);
    // A figure eight.
    std::vector<Vec2> eight;
    for (int k = 0; k < 200; ++k) {
        const double t = 2.0 * kPi * k / 200.0;
        eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK_FALSE(is_simple_closed(eight).simple);
}

TEST_CASE("winding numbers") {
    CHECK(std::abs(winding_number(circle_polyline(100))) == 1);
    CHECK(winding_number(circle_polyline(100)) == 1);
    CHECK(winding_number(circle_polyline(100), {5.0, 0.0}) == 0);
    auto cw = circle_polyline(100);
    std::reverse(cw.begin(), cw.end());
    CHECK(winding_number(cw) == -1);
    CHECK_THROWS_AS(winding_number(circle_polyline(100), {1.0, 0.0}), PointOnCurve);
    // Points inside the limacon's inner loop are encircled twice.
    CHECK(winding_number(limacon(400), {0.3, 0.0}) == 2);
    CHECK(winding_number(limacon(400), {0.7, 0.0}) == 1);
}

TEST_CASE("symmetry residual of polylines") {
    const auto c = circle_polyline(360);
    CHECK(symmetry_residual(c, Reflection::XAxis) < 1e-10);
    CHECK(symmetry_residual(c, Reflection::YAxis) < 1e-10);
    auto shifted = c;
    for (auto& q : shifted) q.x += 0.1;
    CHECK(symmetry_residual(shifted, Reflection::XAxis) < 1e-10);
    CHECK(symmetry_residual(shifted, Reflection::YAxis) == Approx(0.2).epsilon(0.05));
}

TEST_CASE("circle axis crossings") {
    const PeriodicOrbit orbit = extend_half(flow(ForceField::power_law({1.0, 1.0}, 1.5), 0.0, {1.5, 0.0},
                                                 {0.0, circular_speed({1.0, 1.0}, 1.5)},
                                                 kPi * std::pow(1.5, 1.5), {}));
    const auto xs = axis_crossings(orbit);
    REQUIRE(xs.size() == 2);
    CHECK(distance(xs[0].point, {1.5, 0.0}) < 1e-7);
    CHECK(distance(xs[1].point, {-1.5, 0.0}) < 1e-7);
}
