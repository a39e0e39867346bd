#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symorb/orbit.hpp"
#include "symorb/shooting.hpp"

namespace symorb {

struct CurveEntry {
    double mu = 0.0;
    double sigma_star = 0.0;
    Vec2 v_mu;
    double tau = 0.0;
    double period = 0.0;
    double miss_residual = 0.0;
    OrbitDiagnostics diagnostics;
};

struct ContinuationCurve {
    /// Sorted by mu; every entry passed validate_orbit.
    std::vector<CurveEntry> entries;
    /// Largest |mu| reached before the first failure (the whole grid when nothing failed).
    std::optional<double> empirical_delta0;
    /// max |sigma*(mu_{i+1}) - sigma*(mu_i)| over consecutive entries.
    double connect_gap = 0.0;
    bool truncated = false;
    std::optional<double> failed_mu;
    std::string failure;
};

struct SweepOptions {
    double tol = kDefaultMissTolerance;
    /// > 1 solves every mu independently with cold brackets on a thread pool.
    int threads = 1;
    std::size_t orbit_samples = kDefaultOrbitSamples;
    ValidationTolerances validation;
};

/// Solves, extends and validates along a grid that starts at 0 and is monotone in mu.
/// Sequential runs warm-start each bracket at the previous sigma* +- eta/4 (clipped to
/// [1 - eta, 1 + eta]) before falling back to the cold bracket. The first failure truncates
/// the curve.
ContinuationCurve sweep(const ShootingProblem& problem, const std::vector<double>& mu_grid,
                        const SweepOptions& options = {});

/// Solves one mu, extends and validates. Throws on solver failure; diagnostics carry
/// validation failures.
CurveEntry solve_and_validate(const ShootingProblem& problem, double mu, const SweepOptions& options,
                              std::optional<Bracket> warm = std::nullopt);

PeriodicOrbit extend(const ShootingProblem& problem, const ShootingSolution& sol,
                     std::size_t samples = kDefaultOrbitSamples);

/// Uniform grid of `count` points over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct ZeroSetScan {
    std::vector<double> sigma;
    std::vector<double> mu;
    /// signs[i][j] is the sign of miss(sigma[j], mu[i]); 0 when the evaluation failed.
    std::vector<std::vector<int>> signs;
    std::vector<std::vector<double>> values;
    /// Connected components (8-neighbour) of sign-change cells (i, j) = change between j, j+1.
    int components = 0;
    /// Every mu row has at least one sign change.
    bool row_complete = false;
    std::vector<int> changes_per_row;
};

/// Sign matrix of the miss function over sigma_grid x mu_grid. Throws BoundaryHypothesisFailure
/// when the first (last) sigma column is not uniformly of the sign expected below (above) 1.
ZeroSetScan zero_set_scan(const ShootingProblem& problem, const std::vector<double>& sigma_grid,
                          const std::vector<double>& mu_grid, int threads = 1);

}  // namespace symorb
