#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "symorb/errors.hpp"
#include "symorb/section.hpp"

using namespace symorb;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// kappa so small the motion is a straight line over the test window.
ForceField free_motion() { return {{1e-12, 1.0}, {}, 1.0, {1e-9, 100.0}}; }
}  // namespace

TEST_CASE("section geometry") {
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    CHECK(y.a() == Vec2{0.0, 0.25});
    CHECK(y.b() == Vec2{0.0, 4.0});
    CHECK(y.length() == Approx(3.75));
    CHECK(y.normal_coordinate({-1.0, 1.0}) == Approx(1.0));
    CHECK(y.normal_coordinate({1.0, 1.0}) == Approx(-1.0));
    CHECK(y.parameter({0.0, 0.25}) == Approx(0.0));
    CHECK(y.parameter({0.0, 4.0}) == Approx(1.0));

    const SectionSpec x = SectionSpec::negative_x_axis(2.0, 1e-6);
    CHECK(x.a() == Vec2{-8.0, 0.0});
    CHECK(x.b() == Vec2{-0.5, 0.0});

    CHECK_THROWS_AS(SectionSpec({1.0, 1.0}, {1.0, 1.0}, 1e-6), InvalidArgument);
    CHECK_THROWS_AS(SectionSpec({0.0, 0.0}, {1.0, 1.0}, -1.0), InvalidArgument);
}

TEST_CASE("circle meets the positive y-axis at a quarter period") {
    const Trajectory traj = flow(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, 2.0, {});
    const CrossingEvent ev = first_transversal_crossing(traj, SectionSpec::positive_y_axis(1.0, 1e-6), 2.0);
    CHECK(ev.t_star == Approx(kPi / 2.0).epsilon(1e-8));
    CHECK(distance(ev.state.position, {0.0, 1.0}) < 1e-9);
    CHECK(distance(ev.state.velocity, {-1.0, 0.0}) < 1e-9);
    CHECK(ev.normal_speed == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("crossing_time on Kepler launches") {
    IntegratorConfig cfg;
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    const auto circ = crossing_time(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, y, 5.0, cfg);
    CHECK(circ.t == Approx(kPi / 2.0).epsilon(1e-8));
    CHECK(circ.trajectory.t_end() >= circ.t);
    CHECK(circ.trajectory.t_end() < 5.0);

    const auto ell = crossing_time(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.05}, y, 5.0, cfg);
    CHECK(std::isfinite(ell.t));
    CHECK(ell.t > kPi / 2.0);
    const double s = y.parameter(ell.event.state.position);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK(std::abs(ell.event.state.position.x) < 1e-10);
}

TEST_CASE("crossing time agrees with the Kepler equation") {
    // Pericenter launch v = 1.05: the y-axis is reached when x(E) = a(cos E - e) = 0.
    const double v = 1.05;
    const double a = 1.0 / (2.0 - v * v);
    const double e = 1.0 - 1.0 / a;
    const double E = std::acos(e);
    const double t = std::pow(a, 1.5) * (E - e * std::sin(E));
    const auto hit = crossing_time(test::kepler(), 0.0, {1.0, 0.0}, {0.0, v},
                                   SectionSpec::positive_y_axis(1.0, 1e-6), 5.0, {});
    CHECK(hit.t == Approx(t).epsilon(1e-8));
}

TEST_CASE("no crossing in the right half-plane") {
    const Trajectory traj = flow(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, 1.0, {});
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, SectionSpec::negative_x_axis(1.0, 1e-6), 1.0),
                    NoCrossing);
}

TEST_CASE("window limits the search") {
    const Trajectory traj = flow(test::kepler(), 0.0, {1.0, 0.0}, {0.0, 1.0}, 3.0, {});
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, SectionSpec::positive_y_axis(1.0, 1e-6), 1.5),
                    NoCrossing);
}

TEST_CASE("tangential crossing is rejected") {
    // Drifts onto the y-axis with normal speed 1e-7, below the floor 1e-6.
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    const Trajectory traj = flow(free_motion(), 0.0, {1e-6, 0.5}, {-1e-7, 0.1}, 20.0, {});
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, y, 20.0), TangentialCrossing);
}

TEST_CASE("crossing at the segment endpoint is rejected") {
    // Radial launch straight at the far endpoint (0, 4).
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    const Trajectory traj = flow(free_motion(), 0.0, {1.0, 4.0}, {-1.0, 0.0}, 2.0, {});
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, y, 2.0), BoundaryCrossing);
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, y, 2.0), CrossingError);
}

TEST_CASE("passing beside the segment is not a crossing") {
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    const Trajectory traj = flow(free_motion(), 0.0, {1.0, 5.0}, {-1.0, 0.0}, 2.0, {});
    CHECK_THROWS_AS((void)first_transversal_crossing(traj, y, 2.0), NoCrossing);
}

TEST_CASE("crossing_time is continuous in the launch speed") {
    const SectionSpec y = SectionSpec::positive_y_axis(1.0, 1e-6);
    auto t_of = [&](double v) { return crossing_time(test::kepler(), 0.0, {1.0, 0.0}, {0.0, v}, y, 5.0, {}).t; };
    const double t0 = t_of(1.03);
    double prev = INFINITY;
    for (double h : {1e-3, 1e-4, 1e-5}) {
        const double d = std::abs(t_of(1.03 + h) - t0);
        CHECK(d < prev);
        CHECK(d < 10.0 * h);
        prev = d;
    }
}
