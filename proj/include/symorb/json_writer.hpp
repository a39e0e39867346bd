#pragma once

#include <string>

#include "json.hpp"
#include "symorb/continuation.hpp"
#include "symorb/forcefield.hpp"
#include "symorb/orbit.hpp"
#include "symorb/shooting.hpp"

namespace symorb {

/// Pretty-prints `value` with two-space indentation; floating-point numbers are written with
/// 17 significant digits and non-finite ones as null.
std::string dump_json(const nlohmann::json& value);

nlohmann::json field_to_json(const ForceField& field);
nlohmann::json orbit_json(const PeriodicOrbit& orbit, const ShootingSolution& solution,
                          const OrbitDiagnostics& diagnostics, bool include_samples);
nlohmann::json curve_summary_json(const ContinuationCurve& curve);

}  // namespace symorb
