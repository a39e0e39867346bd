#include "symorb/shooting.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "symorb/errors.hpp"

namespace symorb {

std::string to_string(ShootingMode mode) { return mode == ShootingMode::Quarter ? "quarter" : "half"; }

ShootingMode shooting_mode_from_string(const std::string& s) {
    if (s == "quarter") return ShootingMode::Quarter;
    if (s == "half") return ShootingMode::Half;
    throw InvalidArgument("unknown shooting mode '" + s + "' (expected quarter or half)");
}

ShootingProblem ShootingProblem::for_field(ForceField field, double radius) {
    const ShootingMode mode = field.base().alpha == 1.0 ? ShootingMode::Quarter : ShootingMode::Half;
    ShootingProblem p{std::move(field)};
    p.radius = radius;
    p.mode = mode;
    return p;
}

void ShootingProblem::validate() const {
    const auto& pert = field.perturbation();
    if (mode == ShootingMode::Quarter) {
        if (field.base().alpha != 1.0) throw InvalidArgument("quarter mode requires alpha = 1");
        if (!pert.declares(Reflection::XAxis) || !pert.declares(Reflection::YAxis)) {
            throw InvalidArgument("quarter mode requires the field to declare reflect-x and reflect-y");
        }
    } else {
        if (field.base().alpha == 1.0) throw InvalidArgument("half mode requires alpha != 1");
        if (!pert.declares(Reflection::XAxis)) {
            throw InvalidArgument("half mode requires the field to declare reflect-x");
        }
    }
    if (!(radius > 0.0) || !field.annulus().contains(radius)) {
        throw InvalidArgument("shooting radius must lie inside the field annulus");
    }
    if (!(delta > 0.0) || delta >= 1.0) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(eta > 0.0) || eta > delta) throw InvalidArgument("eta must lie in (0, delta]");
    if (t_bar && !(*t_bar > 0.0)) throw InvalidArgument("t_bar must be positive");
    integrator.validate();
}

double ShootingProblem::circular_speed() const { return symorb::circular_speed(field.base(), radius); }

double ShootingProblem::circular_period() const {
    return 2.0 * std::numbers::pi * radius / circular_speed();
}

double ShootingProblem::window() const { return t_bar.value_or(0.75 * circular_period()); }

SectionSpec ShootingProblem::section() const {
    const double floor = transversality_floor.value_or(1e-6 * circular_speed());
    return mode == ShootingMode::Quarter ? SectionSpec::positive_y_axis(radius, floor)
                                         : SectionSpec::negative_x_axis(radius, floor);
}

int ShootingProblem::expected_orientation() const {
    if (mode == ShootingMode::Quarter) return 1;
    return field.base().alpha < 1.0 ? 1 : -1;
}

namespace {

MissValue evaluate(const ShootingProblem& problem, double sigma, double mu, bool use_vy) {
    auto ct = crossing_time(problem.field, mu, problem.x0(), problem.launch_velocity(sigma), problem.section(),
                            problem.window(), problem.integrator);
    const Vec2& vel = ct.event.state.velocity;
    return MissValue{sigma, use_vy ? vel.y : vel.x, ct.event, std::move(ct.trajectory)};
}

}  // namespace

MissValue miss_quarter(const ShootingProblem& problem, double sigma, double mu) {
    if (problem.mode != ShootingMode::Quarter) throw InvalidArgument("miss_quarter needs a quarter-mode problem");
    return evaluate(problem, sigma, mu, true);
}

MissValue miss_half(const ShootingProblem& problem, double sigma, double mu) {
    if (problem.mode != ShootingMode::Half) throw InvalidArgument("miss_half needs a half-mode problem");
    return evaluate(problem, sigma, mu, false);
}

MissValue miss(const ShootingProblem& problem, double sigma, double mu) {
    return problem.mode == ShootingMode::Quarter ? miss_quarter(problem, sigma, mu) : miss_half(problem, sigma, mu);
}

std::optional<Bracket> try_bracket(const ShootingProblem& problem, double mu, double lo, double hi) {
    try {
        const double m_lo = miss(problem, lo, mu).value;
        const double m_hi = miss(problem, hi, mu).value;
        const int o = problem.expected_orientation();
        if (o * m_lo < 0.0 && o * m_hi > 0.0) return Bracket{lo, hi, m_lo, m_hi};
    } catch (const Error&) {
    }
    return std::nullopt;
}

Bracket bracket(const ShootingProblem& problem, double mu, double eta) {
    problem.validate();
    if (!(eta > 0.0) || eta > problem.delta) throw InvalidArgument("bracket: eta must lie in (0, delta]");

    std::ostringstream diag;
    diag << "no sign change of the miss function within |sigma - 1| <= " << eta << " at mu = " << mu << ":";
    for (double d : {eta / 2, eta, eta / 4, eta / 8, eta / 16, eta / 32, eta / 64}) {
        const double lo = 1.0 - d;
        const double hi = 1.0 + d;
        std::string lo_msg, hi_msg;
        double m_lo = NAN, m_hi = NAN;
        try {
            m_lo = miss(problem, lo, mu).value;
        } catch (const Error& e) {
            lo_msg = e.what();
        }
        try {
            m_hi = miss(problem, hi, mu).value;
        } catch (const Error& e) {
            hi_msg = e.what();
        }
        const int o = problem.expected_orientation();
        if (lo_msg.empty() && hi_msg.empty() && o * m_lo < 0.0 && o * m_hi > 0.0) {
            return Bracket{lo, hi, m_lo, m_hi};
        }
        diag << "\n  sigma " << lo << ": " << (lo_msg.empty() ? std::to_string(m_lo) : lo_msg) << "; sigma " << hi
             << ": " << (hi_msg.empty() ? std::to_string(m_hi) : hi_msg);
    }
    throw BracketFailure(diag.str());
}

ShootingSolution solve(const ShootingProblem& problem, double mu, double tol, std::optional<Bracket> initial) {
    problem.validate();
    if (!(tol > 0.0)) throw InvalidArgument("solve: tolerance must be positive");
    const Bracket br = initial ? *initial : bracket(problem, mu, problem.eta);

    double lo = br.sigma_minus, hi = br.sigma_plus;
    double m_lo = br.miss_minus;

    auto finish = [&](MissValue&& mv, int iterations) {
        ShootingSolution sol;
        sol.sigma = mv.sigma;
        sol.v_mu = problem.launch_velocity(mv.sigma);
        sol.tau = mv.crossing.t_star;
        sol.segment = mv.trajectory.truncated(mv.crossing.t_star);
        sol.crossing = mv.crossing;
        sol.miss_residual = mv.value;
        sol.iterations = iterations;
        sol.initial_bracket = br;
        return sol;
    };

    for (int it = 1; it <= kMaxBisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        MissValue mv = miss(problem, mid, mu);
        if (std::abs(mv.value) < tol) return finish(std::move(mv), it);
        if ((mv.value < 0.0) == (m_lo < 0.0)) {
            lo = mid;
            m_lo = mv.value;
        } else {
            hi = mid;
        }
        if (!(hi - lo > 4.0 * std::numeric_limits<double>::epsilon())) {
            std::ostringstream msg;
            msg << "bracket collapsed at sigma = " << mid << " with miss " << mv.value << " (tol " << tol << ")";
            throw NonConvergence(msg.str());
        }
    }
    throw NonConvergence("bisection iteration cap reached");
}

int sign_table(const PowerLawParams& params, double epsilon) {
    params.validate();
    if (params.alpha == 1.0) throw InvalidArgument("sign_table: alpha must differ from 1");
    ForceField field(params, PerturbationSpec{}, 1.0, Annulus{0.1, 10.0});
    ShootingProblem problem{std::move(field)};
    problem.mode = ShootingMode::Half;
    problem.t_bar = 3.0 * problem.circular_period();
    const double v = miss_half(problem, 1.0 + epsilon, 0.0).value;
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

}  // namespace symorb
