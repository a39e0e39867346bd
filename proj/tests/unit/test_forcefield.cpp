#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "symorb/errors.hpp"
#include "symorb/forcefield.hpp"

using namespace symorb;
using doctest::Approx;

TEST_CASE("power law force values") {
    CHECK(test::kepler().eval_force({1.0, 0.0}, 0.0) == Vec2{-1.0, 0.0});

    const ForceField log_field(PowerLawParams{1.0, 0.0}, {}, 1.0, {0.5, 4.0});
    const Vec2 f = log_field.eval_force({2.0, 0.0}, 0.0);
    CHECK(f.x == Approx(-0.5).epsilon(1e-15));
    CHECK(f.y == 0.0);
    CHECK(test::kepler().eval_force({2.0, 0.0}, 0.0).x == Approx(-0.25).epsilon(1e-15));

    const Vec2 g = test::radial_family().eval_force({1.0, 0.0}, 0.1);
    CHECK(g.x == Approx(-1.1).epsilon(1e-15));
    CHECK(g.y == 0.0);
}

TEST_CASE("force is the negative gradient of the potential") {
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const PowerLawParams p{1.7, alpha};
        const ForceField field(p, {}, 1.0, {0.5, 2.0});
        for (double r : {0.6, 1.0, 1.9}) {
            const double h = 1e-5;
            const double dU = (potential(p, r + h) - potential(p, r - h)) / (2.0 * h);
            CAPTURE(alpha);
            CHECK(-field.eval_force({r, 0.0}, 0.0).x == Approx(dU).epsilon(1e-8));
            CHECK(potential_derivatives(p, r).first == Approx(dU).epsilon(1e-8));
        }
    }
}

TEST_CASE("force validates domain and parameter") {
    const ForceField field = test::kepler();
    CHECK_THROWS_AS((void)field.eval_force({0.1, 0.0}, 0.0), DomainExit);
    CHECK_THROWS_AS((void)field.eval_force({3.0, 0.0}, 0.0), DomainExit);
    CHECK_THROWS_AS((void)field.eval_force({1.0, 0.0}, 1.0), InvalidArgument);
    CHECK_THROWS_AS((void)field.eval_force({1.0, 0.0}, -1.5), InvalidArgument);
    CHECK_NOTHROW((void)field.eval_force({2.0, 0.0}, 0.0));
    CHECK_NOTHROW((void)field.eval_force({0.5, 0.0}, 0.0));
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(PowerLawParams({0.0, 1.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(PowerLawParams({1.0, -0.5}).validate(), InvalidArgument);
    CHECK_THROWS_AS(ForceField(PowerLawParams{1.0, 1.0}, {}, 1.0, {0.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(ForceField(PowerLawParams{1.0, 1.0}, {}, 1.0, {1.5, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(ForceField(PowerLawParams{1.0, 1.0}, {}, 0.0, {0.5, 2.0}), InvalidArgument);
}

TEST_CASE("potential values") {
    CHECK(potential({1.0, 1.0}, 2.0) == Approx(-0.5));
    CHECK(potential({1.0, 0.0}, 1.0) == 0.0);
    CHECK(potential({2.0, 2.0}, 2.0) == Approx(-0.25));
    CHECK_THROWS_AS(potential({1.0, 1.0}, 0.0), InvalidArgument);
}

TEST_CASE("potential derivatives") {
    auto d = potential_derivatives({1.0, 1.0}, 1.0);
    CHECK(d.first == Approx(1.0));
    CHECK(d.second == Approx(-2.0));
    d = potential_derivatives({1.0, 0.0}, 2.0);
    CHECK(d.first == Approx(0.5));
    CHECK(d.second == Approx(-0.25));

    double prev_first = INFINITY;
    double prev_second = -INFINITY;
    for (double r = 1.0; r < 1e4; r *= 3.0) {
        const auto dd = potential_derivatives({1.0, 1.0}, r);
        CHECK(dd.first < prev_first);
        CHECK(dd.second > prev_second);
        CHECK(dd.first > 0.0);
        prev_first = dd.first;
        prev_second = dd.second;
    }
}

TEST_CASE("circular speed") {
    CHECK(circular_speed({1.0, 1.0}, 1.0) == Approx(1.0));
    for (double p : {0.3, 1.0, 7.0}) CHECK(circular_speed({4.0, 0.0}, p) == Approx(2.0));
    CHECK(circular_speed({1.0, 2.0}, 2.0) == Approx(0.5));
}

TEST_CASE("symmetry of central and radial fields") {
    const auto k = check_symmetry(test::kepler(), 0.0, 500);
    CHECK(k.max_residual() <= 1e-14);
    const auto r = check_symmetry(test::radial_family(), 0.5, 500);
    CHECK(r.max_residual() <= 1e-14);
    CHECK(r.residual.size() == 2);
}

TEST_CASE("symmetry violation of a constant push") {
    // (0, c) breaks the x-axis mirror by 2c.
    const ForceField up = test::constant_push({0.0, 1.0});
    const auto report = measure_symmetry(up, 0.1, 200);
    CHECK(report.residual.at(Reflection::XAxis) == Approx(0.2).epsilon(1e-12));
    CHECK(report.residual.at(Reflection::YAxis) <= 1e-14);
    CHECK_THROWS_AS(check_symmetry(up, 0.1, 200), SymmetryViolation);
    try {
        check_symmetry(up, 0.1, 200);
    } catch (const SymmetryViolation& e) {
        CHECK(e.residual() == Approx(0.2).epsilon(1e-12));
    }

    // (c, 0) breaks the y-axis mirror instead.
    const auto side = measure_symmetry(test::constant_push({1.0, 0.0}), 0.1, 200);
    CHECK(side.residual.at(Reflection::YAxis) == Approx(0.2).epsilon(1e-12));
    CHECK(side.residual.at(Reflection::XAxis) <= 1e-14);
}

TEST_CASE("x-axis-only family") {
    const ForceField f = test::x_symmetric_family(0.5);
    CHECK_NOTHROW(check_symmetry(f, 0.3, 500));
    // Undeclared mirror is not checked, but it is genuinely broken.
    PerturbationSpec spec = f.perturbation();
    spec.declared_symmetries.insert(Reflection::YAxis);
    const ForceField both(f.base(), spec, 1.0, f.annulus());
    CHECK(measure_symmetry(both, 0.3, 500).residual.at(Reflection::YAxis) > 1e-3);
}

TEST_CASE("symmetry sampling is deterministic") {
    const ForceField f = test::constant_push({0.0, 1.0});
    CHECK(measure_symmetry(f, 0.1, 50, 7).max_residual() == measure_symmetry(f, 0.1, 50, 7).max_residual());
}

TEST_CASE("signed-square scaling") {
    PerturbationSpec spec;
    spec.kind = RadialPowerPerturbation{1.0, 3.0};
    spec.scaling = MuScaling::SignedSquare;
    const ForceField f({1.0, 1.0}, spec, 1.0, {0.5, 2.0});
    CHECK(f.perturbation_term({1.0, 0.0}, 0.1).x == Approx(-0.01));
    CHECK(f.perturbation_term({1.0, 0.0}, -0.1).x == Approx(0.01));
}

TEST_CASE("reflection names") {
    CHECK(to_string(Reflection::XAxis) == "reflect-x");
    CHECK(reflection_from_string("reflect-y") == Reflection::YAxis);
    CHECK_THROWS_AS(reflection_from_string("mirror"), InvalidArgument);
    CHECK(reflect(Reflection::XAxis, Vec2{1.0, 2.0}) == Vec2{1.0, -2.0});
    CHECK(reflect(Reflection::YAxis, Vec2{1.0, 2.0}) == Vec2{-1.0, 2.0});
}
