#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symorb/forcefield.hpp"
#include "symorb/integrator.hpp"
#include "symorb/section.hpp"

namespace symorb {

/// Quarter: hit the positive y-axis orthogonally (alpha = 1, both mirrors).
/// Half: hit the negative x-axis orthogonally (alpha != 1, mirror in the x-axis).
enum class ShootingMode { Quarter, Half };

std::string to_string(ShootingMode mode);
ShootingMode shooting_mode_from_string(const std::string& s);

inline constexpr double kDefaultEta = 0.1;
inline constexpr double kDefaultDelta = 0.2;
inline constexpr double kDefaultMissTolerance = 1e-10;
inline constexpr int kMaxBisections = 200;

/// Shooting from x0 = (R, 0) with vertical launch velocity (0, sigma |v0|), where v0 is the
/// circular velocity of the unperturbed field at R.
struct ShootingProblem {
    explicit ShootingProblem(ForceField f) : field(std::move(f)) {}

    ForceField field;
    double radius = 1.0;
    ShootingMode mode = ShootingMode::Quarter;
    double eta = kDefaultEta;
    double delta = kDefaultDelta;
    /// Unset: 0.75 of the circular period 2 pi / w.
    std::optional<double> t_bar;
    /// Unset: 1e-6 times the circular speed.
    std::optional<double> transversality_floor;
    IntegratorConfig integrator;

    /// Mode picked from alpha: Quarter iff alpha == 1.
    static ShootingProblem for_field(ForceField field, double radius = 1.0);

    /// Throws InvalidArgument on mode/alpha/symmetry mismatch or bad parameters.
    void validate() const;

    [[nodiscard]] Vec2 x0() const { return {radius, 0.0}; }
    [[nodiscard]] double circular_speed() const;
    /// 2 pi R / |v0|.
    [[nodiscard]] double circular_period() const;
    [[nodiscard]] double window() const;
    [[nodiscard]] SectionSpec section() const;
    [[nodiscard]] Vec2 launch_velocity(double sigma) const { return {0.0, sigma * circular_speed()}; }

    /// +1 when miss(sigma) is expected positive for sigma > 1 (Quarter, Half with alpha < 1),
    /// -1 when the orientation is flipped (Half with alpha > 1).
    [[nodiscard]] int expected_orientation() const;
};

struct MissValue {
    double sigma = 0.0;
    double value = 0.0;
    CrossingEvent crossing;
    Trajectory trajectory;
};

/// y' at the first crossing of the positive y-axis segment.
MissValue miss_quarter(const ShootingProblem& problem, double sigma, double mu);
/// x' at the first crossing of the negative x-axis segment.
MissValue miss_half(const ShootingProblem& problem, double sigma, double mu);
/// Dispatches on problem.mode.
MissValue miss(const ShootingProblem& problem, double sigma, double mu);

struct Bracket {
    double sigma_minus = 0.0;
    double sigma_plus = 0.0;
    double miss_minus = 0.0;
    double miss_plus = 0.0;
};

/// Finds sigma_minus < 1 < sigma_plus with |sigma - 1| <= eta whose miss values have the
/// orientation predicted by the sign table. Candidate half-widths are tried in the order
/// eta/2, eta, eta/4, eta/8, ... eta/64. Throws BracketFailure with per-candidate diagnostics.
Bracket bracket(const ShootingProblem& problem, double mu, double eta);

/// Checks an explicit pair [lo, hi]; empty if the orientation does not hold or evaluation fails.
std::optional<Bracket> try_bracket(const ShootingProblem& problem, double mu, double lo, double hi);

struct ShootingSolution {
    double sigma = 0.0;
    Vec2 v_mu;
    double tau = 0.0;
    Trajectory segment;  // valid span [0, tau]
    CrossingEvent crossing;
    double miss_residual = 0.0;
    int iterations = 0;
    Bracket initial_bracket;
};

/// Bisection on sigma inside `initial` (or a fresh bracket) until |miss| < tol.
ShootingSolution solve(const ShootingProblem& problem, double mu, double tol = kDefaultMissTolerance,
                       std::optional<Bracket> initial = std::nullopt);

/// Sign of x' at the first crossing of the negative x-axis for the unperturbed field launched
/// with (1 + epsilon) times the circular velocity at radius 1. Integrates on the wide annulus
/// [0.1, 10] with window 3 circular periods so that the unstable alpha > 2 orbits still reach
/// the section.
int sign_table(const PowerLawParams& params, double epsilon);

}  // namespace symorb
