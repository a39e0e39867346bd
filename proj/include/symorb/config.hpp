#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "symorb/analysis.hpp"
#include "symorb/continuation.hpp"
#include "symorb/forcefield.hpp"
#include "symorb/orbit.hpp"
#include "symorb/shooting.hpp"

namespace symorb {

/// Parses a field definition
///   {kappa, alpha, perturbation: {kind, params, symmetries, scaling}, mu_range, annulus}
/// kind is one of zero | radial_power {lambda, beta} | axis_polynomial {fx, fy} where fx and fy
/// are lists of [coefficient, px, py]. mu_range is a or [-a, a]; annulus is [inner, outer]
/// (default [0.5 R, 2 R]).
ForceField field_from_json_text(const std::string& text, double reference_radius = 1.0);
std::string field_to_json_text(const ForceField& field);

struct SweepGrid {
    /// Unset: a / 2.
    std::optional<double> mu_max;
    std::size_t mu_points = 64;
    bool both_signs = true;
};

struct ScanGrid {
    std::size_t sigma_points = 41;
    std::size_t mu_points = 21;
    /// Unset: half the empirical delta0 of the positive sweep.
    std::optional<double> mu_max;
};

struct RunConfig {
    ForceField field = ForceField::power_law({1.0, 1.0});
    /// Unset ("auto"): quarter iff alpha = 1.
    std::optional<ShootingMode> mode;
    double radius = 1.0;
    IntegratorConfig integrator;
    double miss_tol = kDefaultMissTolerance;
    double eta = kDefaultEta;
    double delta = kDefaultDelta;
    std::optional<double> t_bar;
    SweepGrid sweep;
    ScanGrid scan;
    std::string output_dir = "out";
    std::uint64_t seed = 42;
    int threads = 1;

    /// Throws InvalidArgument on non-positive tolerances/grids or mode inconsistent with alpha.
    void validate() const;
    [[nodiscard]] ShootingMode resolved_mode() const;
    [[nodiscard]] ShootingProblem problem() const;
};

RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Orbit export {mu, sigma, v_mu, tau, period, symmetry, diagnostics, samples}.
std::string orbit_to_json_text(const PeriodicOrbit& orbit, const ShootingSolution& solution,
                               const OrbitDiagnostics& diagnostics, bool include_samples = true);

/// CSV mu,sigma_star,period,closure_residual.
void write_curve_csv(std::ostream& os, const ContinuationCurve& curve);
/// {empirical_delta0, connect_gap, entries, truncated, failed_mu, failure}.
std::string curve_summary_json_text(const ContinuationCurve& curve);
/// Grid CSV: header "mu\sigma,<sigma values>", one row per mu of signs.
void write_scan_csv(std::ostream& os, const ZeroSetScan& scan);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

}  // namespace symorb
