#pragma once

#include <vector>

#include "symorb/forcefield.hpp"

namespace symorb::test {

inline ForceField kepler() { return ForceField::power_law({1.0, 1.0}); }

inline ForceField radial_family(double lambda = 1.0, double alpha = 1.0) {
    PerturbationSpec spec;
    spec.kind = RadialPowerPerturbation{lambda, 3.0};
    return {{1.0, alpha}, spec, 1.0, {0.5, 2.0}};
}

// f = c (x^2, x y): equivariant under the x-axis mirror only.
inline ForceField x_symmetric_family(double alpha, double c = 1.0, Annulus annulus = {0.5, 2.0}) {
    PerturbationSpec spec;
    spec.kind = AxisPolynomialPerturbation{{{c, 2, 0}}, {{c, 1, 1}}};
    spec.declared_symmetries = {Reflection::XAxis};
    return {{1.0, alpha}, spec, 1.0, annulus};
}

// Constant push c; claims both mirrors although it breaks the one along c.
inline ForceField constant_push(Vec2 c, std::set<Reflection> declared = {Reflection::XAxis, Reflection::YAxis}) {
    PerturbationSpec spec;
    AxisPolynomialPerturbation poly;
    if (c.x != 0.0) poly.fx.push_back({c.x, 0, 0});
    if (c.y != 0.0) poly.fy.push_back({c.y, 0, 0});
    spec.kind = poly;
    spec.declared_symmetries = std::move(declared);
    return {{1.0, 1.0}, spec, 2.0, {0.5, 2.0}};
}

}  // namespace symorb::test
