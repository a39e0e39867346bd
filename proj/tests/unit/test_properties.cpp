// Randomized properties with fixed seeds.
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "symorb/analysis.hpp"
#include "symorb/continuation.hpp"
#include "symorb/errors.hpp"
#include "symorb/integrator.hpp"
#include "symorb/orbit.hpp"
#include "symorb/shooting.hpp"

using namespace symorb;

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double pick(std::initializer_list<double> xs) {
        const auto i = std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng);
        return *(xs.begin() + static_cast<std::ptrdiff_t>(i));
    }
};

}  // namespace

TEST_CASE("energy and angular momentum are conserved on bounded launches") {
    Gen g(7);
    for (int k = 0; k < 20; ++k) {
        const PowerLawParams p{g.uniform(0.5, 2.0), g.pick({0.0, 0.5, 1.0, 1.5})};
        const double sigma = g.uniform(0.95, 1.05);
        const ForceField f(p, {}, 1.0, {0.3, 3.0});
        const State s{0.0, {1.0, 0.0}, {0.0, sigma * circular_speed(p, 1.0)}};
        const Trajectory traj = flow(f, 0.0, s.position, s.velocity, 10.0, {});
        const double e0 = energy(p, s);
        const double scale = std::max(std::abs(e0), 0.5 * dot(s.velocity, s.velocity));
        CAPTURE(p.alpha);
        CAPTURE(sigma);
        for (const auto& st : traj.sample_uniform(50)) {
            CHECK(std::abs(energy(p, st) - e0) / scale < 1e-8);
            CHECK(std::abs(angular_momentum(st) - angular_momentum(s)) < 1e-8);
        }
    }
}

TEST_CASE("declared mirrors commute with the flow") {
    Gen g(11);
    for (int k = 0; k < 15; ++k) {
        const double alpha = g.pick({0.5, 1.0, 1.5});
        const ForceField f = test::x_symmetric_family(alpha);
        const double mu = g.uniform(-0.05, 0.05);
        const Vec2 x0{g.uniform(0.9, 1.1), g.uniform(-0.1, 0.1)};
        const Vec2 v{g.uniform(-0.05, 0.05), g.uniform(0.97, 1.03) * circular_speed(f.base(), x0.norm())};
        CAPTURE(mu);
        CHECK(flow_with_reflection_check(f, mu, x0, v, 2.0, {}).residual < 1e-9);
    }
}

TEST_CASE("field symmetry holds for every sampled mu") {
    Gen g(13);
    for (int k = 0; k < 10; ++k) {
        const double mu = g.uniform(-0.9, 0.9);
        CHECK(check_symmetry(test::radial_family(), mu, 200, k).max_residual() < 1e-12);
        CHECK(check_symmetry(test::x_symmetric_family(0.5), mu, 200, k).max_residual() < 1e-12);
    }
}

TEST_CASE("solved orbits close and are reflection symmetric") {
    Gen g(17);
    for (int k = 0; k < 6; ++k) {
        const bool quarter = k % 2 == 0;
        const ShootingProblem p = ShootingProblem::for_field(
            quarter ? test::radial_family(g.uniform(0.5, 2.0)) : test::x_symmetric_family(g.pick({0.5, 1.5})));
        const double mu = g.uniform(-0.03, 0.03);
        CAPTURE(mu);
        CAPTURE(quarter);
        const ShootingSolution sol = solve(p, mu);
        CHECK(std::abs(sol.sigma - 1.0) < p.eta);
        CHECK(std::abs(sol.miss_residual) < kDefaultMissTolerance);
        const PeriodicOrbit orbit = extend(p, sol);
        const OrbitDiagnostics d = validate_orbit(orbit, p.field, mu, p.integrator);
        CHECK(d.passed());
        CHECK(d.closure.position < 1e-6);
        CHECK(std::abs(d.winding) == 1);
        CHECK(symmetry_residual(orbit, Reflection::XAxis) < 1e-7);
    }
}

TEST_CASE("miss function is odd about the circle at mu = 0") {
    // Near the circular orbit the miss value is linear in sigma - 1 to leading order.
    Gen g(19);
    const ShootingProblem p = ShootingProblem::for_field(test::kepler());
    for (int k = 0; k < 8; ++k) {
        const double d = g.uniform(1e-4, 1e-3);
        const double up = miss(p, 1.0 + d, 0.0).value;
        const double down = miss(p, 1.0 - d, 0.0).value;
        CHECK(up > 0.0);
        CHECK(down < 0.0);
        CHECK(std::abs(up + down) < 10.0 * d * d);
    }
}

TEST_CASE("apsidal angle is invariant under rescaling kappa") {
    Gen g(23);
    for (int k = 0; k < 10; ++k) {
        const double alpha = g.pick({0.0, 0.5, 1.5});
        const double sigma = g.uniform(0.97, 1.03);
        auto phi = [&](double kappa) {
            const PowerLawParams p{kappa, alpha};
            const State s{0.0, {1.0, 0.0}, {0.0, sigma * circular_speed(p, 1.0)}};
            return apsidal_angle(RadialProblem::from_state(p, s));
        };
        CHECK(phi(1.0) == doctest::Approx(phi(g.uniform(0.2, 5.0))).epsilon(1e-8));
    }
}
