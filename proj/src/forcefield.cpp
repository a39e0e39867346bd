#include "symorb/forcefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "symorb/errors.hpp"

namespace symorb {

void PowerLawParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw InvalidArgument("power law: kappa must be positive");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("power law: alpha must be nonnegative");
    }
}

double potential(const PowerLawParams& params, double r) {
    if (!(r > 0.0)) throw InvalidArgument("potential: r must be positive");
    if (params.alpha == 0.0) return params.kappa * std::log(r);
    const double gamma = params.kappa / params.alpha;
    return -gamma / std::pow(r, params.alpha);
}

PotentialDerivatives potential_derivatives(const PowerLawParams& params, double r) {
    if (!(r > 0.0)) throw InvalidArgument("potential_derivatives: r must be positive");
    // U'(r) = kappa / r^(alpha+1) for every alpha >= 0 (including the logarithmic case).
    const double first = params.kappa / std::pow(r, params.alpha + 1.0);
    const double second = -(params.alpha + 1.0) * first / r;
    return {first, second};
}

double circular_speed(const PowerLawParams& params, double p) {
    if (!(p > 0.0)) throw InvalidArgument("circular_speed: radius must be positive");
    return std::sqrt(p * potential_derivatives(params, p).first);
}

namespace {

double mu_scale(MuScaling scaling, double mu) {
    return scaling == MuScaling::Linear ? mu : mu * std::abs(mu);
}

double ipow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

double eval_polynomial(const std::vector<Monomial>& terms, const Vec2& r) {
    double sum = 0.0;
    for (const auto& m : terms) sum += m.coefficient * ipow(r.x, m.px) * ipow(r.y, m.py);
    return sum;
}

struct PerturbationEvaluator {
    const Vec2& r;

    Vec2 operator()(const ZeroPerturbation&) const { return {}; }
    Vec2 operator()(const RadialPowerPerturbation& p) const {
        const double n = r.norm();
        return -p.lambda / std::pow(n, p.beta + 2.0) * r;
    }
    Vec2 operator()(const AxisPolynomialPerturbation& p) const {
        return {eval_polynomial(p.fx, r), eval_polynomial(p.fy, r)};
    }
};

void validate_perturbation(const PerturbationKind& kind) {
    if (const auto* poly = std::get_if<AxisPolynomialPerturbation>(&kind)) {
        for (const auto* terms : {&poly->fx, &poly->fy}) {
            for (const auto& m : *terms) {
                if (m.px < 0 || m.py < 0) throw InvalidArgument("polynomial perturbation: negative exponent");
            }
        }
    }
}

}  // namespace

ForceField::ForceField(PowerLawParams base, PerturbationSpec perturbation, double mu_limit, Annulus annulus,
                       double symmetry_tolerance)
    : base_(base),
      perturbation_(std::move(perturbation)),
      mu_limit_(mu_limit),
      annulus_(annulus),
      symmetry_tolerance_(symmetry_tolerance) {
    base_.validate();
    validate_perturbation(perturbation_.kind);
    if (!(annulus_.inner > 0.0)) throw InvalidArgument("annulus must exclude the origin (inner radius > 0)");
    if (!(annulus_.outer > annulus_.inner)) throw InvalidArgument("annulus outer radius must exceed inner");
    if (!(mu_limit_ > 0.0)) throw InvalidArgument("mu range (-a, a) needs a > 0");
    if (!(symmetry_tolerance_ > 0.0)) throw InvalidArgument("symmetry tolerance must be positive");
}

ForceField ForceField::power_law(PowerLawParams base, double reference_radius) {
    return {base, PerturbationSpec{}, 1.0, Annulus{0.5 * reference_radius, 2.0 * reference_radius}};
}

Vec2 ForceField::perturbation_term(const Vec2& r, double mu) const {
    const double s = mu_scale(perturbation_.scaling, mu);
    if (s == 0.0) return {};
    return s * std::visit(PerturbationEvaluator{r}, perturbation_.kind);
}

Vec2 ForceField::acceleration(const Vec2& r, double mu) const {
    const double n = r.norm();
    const Vec2 central = -base_.kappa / std::pow(n, base_.alpha + 2.0) * r;
    return central + perturbation_term(r, mu);
}

Vec2 ForceField::eval_force(const Vec2& r, double mu) const {
    const double n = r.norm();
    if (!annulus_.contains(n)) {
        std::ostringstream msg;
        msg << "position " << r << " (|r| = " << n << ") outside annulus [" << annulus_.inner << ", "
            << annulus_.outer << "]";
        throw DomainExit(msg.str(), State{std::numeric_limits<double>::quiet_NaN(), r, {}});
    }
    if (!(std::abs(mu) < mu_limit_)) {
        std::ostringstream msg;
        msg << "mu = " << mu << " outside (-" << mu_limit_ << ", " << mu_limit_ << ")";
        throw InvalidArgument(msg.str());
    }
    return acceleration(r, mu);
}

ForceField ForceField::with_annulus(Annulus annulus) const {
    return {base_, perturbation_, mu_limit_, annulus, symmetry_tolerance_};
}

double SymmetryReport::max_residual() const {
    double m = 0.0;
    for (const auto& [_, v] : residual) m = std::max(m, v);
    return m;
}

SymmetryReport measure_symmetry(const ForceField& field, double mu, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw InvalidArgument("check_symmetry: sample_count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(field.annulus().inner, field.annulus().outer);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    SymmetryReport report;
    for (Reflection r : field.perturbation().declared_symmetries) report.residual[r] = 0.0;

    for (int i = 0; i < sample_count; ++i) {
        const double rho = radius(rng);
        const double th = angle(rng);
        const Vec2 p{rho * std::cos(th), rho * std::sin(th)};
        const Vec2 f = field.eval_force(p, mu);
        for (auto& [refl, worst] : report.residual) {
            const Vec2 lhs = field.eval_force(reflect(refl, p), mu);
            worst = std::max(worst, distance(lhs, reflect(refl, f)));
        }
    }
    return report;
}

SymmetryReport check_symmetry(const ForceField& field, double mu, int sample_count, std::uint64_t seed) {
    auto report = measure_symmetry(field, mu, sample_count, seed);
    for (const auto& [refl, value] : report.residual) {
        if (value > field.symmetry_tolerance()) {
            std::ostringstream msg;
            msg << "declared symmetry " << to_string(refl) << " violated: residual " << value << " > "
                << field.symmetry_tolerance();
            throw SymmetryViolation(msg.str(), value);
        }
    }
    return report;
}

std::string to_string(Reflection r) { return r == Reflection::XAxis ? "reflect-x" : "reflect-y"; }

Reflection reflection_from_string(const std::string& s) {
    if (s == "reflect-x") return Reflection::XAxis;
    if (s == "reflect-y") return Reflection::YAxis;
    throw InvalidArgument("unknown reflection '" + s + "' (expected reflect-x or reflect-y)");
}

}  // namespace symorb
