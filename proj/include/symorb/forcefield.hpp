#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symorb/vec2.hpp"

namespace symorb {

/// Unperturbed attraction g(r) = -kappa r / |r|^(alpha + 2). alpha = 1 is Kepler.
struct PowerLawParams {
    double kappa = 1.0;
    double alpha = 1.0;

    /// Throws InvalidArgument unless kappa > 0 and alpha >= 0.
    void validate() const;
};

/// U(r) = -gamma / r^alpha with alpha * gamma = kappa, or kappa ln r when alpha = 0.
double potential(const PowerLawParams& params, double r);

struct PotentialDerivatives {
    double first;   // U'(r)
    double second;  // U''(r)
};
PotentialDerivatives potential_derivatives(const PowerLawParams& params, double r);

/// Speed of the circular solution of radius p, sqrt(p U'(p)).
double circular_speed(const PowerLawParams& params, double p);

// ---------------------------------------------------------------------------
// Perturbation families. Each is multiplied by the scale s(mu), which is mu
// (linear) or mu |mu| (signed square, continuous but not C^2 in mu).

struct ZeroPerturbation {};

/// -lambda r / |r|^(beta + 2)
struct RadialPowerPerturbation {
    double lambda = 1.0;
    double beta = 3.0;
};

/// One monomial coefficient * x^px * y^py.
struct Monomial {
    double coefficient = 0.0;
    int px = 0;
    int py = 0;
};

/// Component-wise polynomial field (sum of monomials in x, y for each component).
struct AxisPolynomialPerturbation {
    std::vector<Monomial> fx;
    std::vector<Monomial> fy;
};

using PerturbationKind = std::variant<ZeroPerturbation, RadialPowerPerturbation, AxisPolynomialPerturbation>;

enum class MuScaling { Linear, SignedSquare };

struct PerturbationSpec {
    PerturbationKind kind = ZeroPerturbation{};
    std::set<Reflection> declared_symmetries{Reflection::XAxis, Reflection::YAxis};
    MuScaling scaling = MuScaling::Linear;

    [[nodiscard]] bool declares(Reflection r) const { return declared_symmetries.count(r) > 0; }
};

struct Annulus {
    double inner = 0.5;
    double outer = 2.0;

    [[nodiscard]] bool contains(double r) const { return r >= inner && r <= outer; }
};

inline constexpr double kDefaultSymmetryTolerance = 1e-10;

/// Immutable description of r'' = g(r, mu) on an annulus around a reference circle.
class ForceField {
  public:
    /// `mu_limit` is a in the admissible parameter interval (-a, a).
    ForceField(PowerLawParams base, PerturbationSpec perturbation, double mu_limit, Annulus annulus,
               double symmetry_tolerance = kDefaultSymmetryTolerance);

    /// Pure power law with the default annulus [0.5 R, 2 R] and mu range (-1, 1).
    static ForceField power_law(PowerLawParams base, double reference_radius = 1.0);

    [[nodiscard]] const PowerLawParams& base() const { return base_; }
    [[nodiscard]] const PerturbationSpec& perturbation() const { return perturbation_; }
    [[nodiscard]] double mu_limit() const { return mu_limit_; }
    [[nodiscard]] const Annulus& annulus() const { return annulus_; }
    [[nodiscard]] double symmetry_tolerance() const { return symmetry_tolerance_; }

    /// g(r, mu). Throws DomainExit when |r| leaves the annulus and InvalidArgument when
    /// mu is outside (-a, a).
    [[nodiscard]] Vec2 eval_force(const Vec2& r, double mu) const;

    /// Same formula without the domain and parameter guards; used inside integrator stages.
    [[nodiscard]] Vec2 acceleration(const Vec2& r, double mu) const;

    /// Perturbation term alone (already scaled by s(mu)).
    [[nodiscard]] Vec2 perturbation_term(const Vec2& r, double mu) const;

    /// Copy with a different annulus.
    [[nodiscard]] ForceField with_annulus(Annulus annulus) const;

  private:
    PowerLawParams base_;
    PerturbationSpec perturbation_;
    double mu_limit_;
    Annulus annulus_;
    double symmetry_tolerance_;
};

/// Max over samples of |f(phi p) - phi f(p)| for one reflection.
struct SymmetryReport {
    std::map<Reflection, double> residual;

    [[nodiscard]] double max_residual() const;
};

/// Samples `sample_count` points uniformly in the annulus (seeded, deterministic) and
/// measures each declared reflection. Throws SymmetryViolation if any residual exceeds
/// the field's tolerance.
SymmetryReport check_symmetry(const ForceField& field, double mu, int sample_count,
                              std::uint64_t seed = 0x5eed);

/// Same measurement without the throw.
SymmetryReport measure_symmetry(const ForceField& field, double mu, int sample_count,
                                std::uint64_t seed = 0x5eed);

std::string to_string(Reflection r);
Reflection reflection_from_string(const std::string& s);

}  // namespace symorb
