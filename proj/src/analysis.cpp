#include "symorb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "symorb/errors.hpp"

namespace symorb {

double angular_momentum(const State& s) { return cross(s.position, s.velocity); }

double energy(const PowerLawParams& params, const State& s) {
    return 0.5 * s.velocity.squared_norm() + potential(params, s.position.norm());
}

double effective_potential(const PowerLawParams& params, double K, double r) {
    return K * K / (2.0 * r * r) + potential(params, r);
}

namespace {

/// Bisection on [inside, outside] for E - U_eff = 0, keeping `inside` on the allowed side.
double bisect_turning_point(const PowerLawParams& params, double E, double K, double inside, double outside) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        (E - effective_potential(params, K, mid) >= 0.0 ? inside : outside) = mid;
    }
    return inside;
}

}  // namespace

TurningRadii turning_radii(const PowerLawParams& params, double E, double K) {
    params.validate();
    if (K == 0.0) throw NoBoundedMotion("radial motion (K = 0) has no turning pair around a circular orbit");
    if (params.alpha >= 2.0) {
        throw NoBoundedMotion("alpha >= 2: the effective potential has no minimum, no bounded oscillation");
    }
    const double rc = std::pow(K * K / params.kappa, 1.0 / (2.0 - params.alpha));
    const double umin = effective_potential(params, K, rc);
    const double slack = 1e-14 * std::max(1.0, std::abs(E));
    if (E < umin - slack) {
        std::ostringstream msg;
        msg << "energy " << E << " below the effective-potential minimum " << umin;
        throw NoBoundedMotion(msg.str());
    }
    if (E <= umin + slack) return {rc, rc};

    double lo = rc / 2.0;
    while (E - effective_potential(params, K, lo) >= 0.0) {
        lo /= 2.0;
        if (lo < 1e-300) throw NoBoundedMotion("no inner turning point");
    }
    double hi = rc * 2.0;
    for (int i = 0; E - effective_potential(params, K, hi) >= 0.0; ++i) {
        hi *= 2.0;
        if (i > 200) throw NoBoundedMotion("energy above the effective-potential asymptote: unbounded motion");
    }
    return {bisect_turning_point(params, E, K, rc, lo), bisect_turning_point(params, E, K, rc, hi)};
}

RadialProblem RadialProblem::from_state(const PowerLawParams& params, const State& state) {
    RadialProblem p;
    p.params = params;
    p.E = energy(params, state);
    p.K = angular_momentum(state);
    const auto tr = turning_radii(params, p.E, p.K);
    p.r_min = tr.r_min;
    p.r_max = tr.r_max;
    return p;
}

ApsidesResult apsides(const Trajectory& traj) {
    ApsidesResult out;
    if (traj.step_count() == 0) return out;

    auto rdot = [&](const State& s) { return dot(s.position, s.velocity) / s.position.norm(); };
    const double speed_scale = std::max(traj.start().velocity.norm(), 1e-300);
    const double zero_band = 1e-12 * speed_scale;

    // Dense sample grid: 8 points per step.
    std::vector<State> grid;
    grid.push_back(traj.start());
    for (const auto& step : traj.steps()) {
        const double t1 = std::min(step.t1(), traj.t_end());
        for (int j = 1; j <= 8; ++j) grid.push_back(traj.interpolate(step.t0 + (t1 - step.t0) * j / 8.0));
        if (t1 >= traj.t_end()) break;
    }

    double max_rdot = 0.0;
    for (const auto& s : grid) max_rdot = std::max(max_rdot, std::abs(rdot(s)));
    if (max_rdot <= 1e-9 * speed_scale) {
        out.circular = true;
        return out;
    }

    double angle = 0.0;
    auto advance_angle = [](double base, const Vec2& from, const Vec2& to) {
        return base + std::atan2(cross(from, to), dot(from, to));
    };

    // Launch point on an apsis.
    std::size_t first_nonzero = 0;
    while (first_nonzero < grid.size() && std::abs(rdot(grid[first_nonzero])) <= zero_band) ++first_nonzero;
    if (first_nonzero == grid.size()) return out;
    if (first_nonzero > 0 || std::abs(rdot(grid[0])) <= zero_band) {
        const double following = rdot(grid[first_nonzero]);
        out.events.push_back({following > 0.0 ? ApsisKind::Pericenter : ApsisKind::Apocenter, grid[0].t,
                              grid[0].position.norm(), 0.0});
    }
    for (std::size_t i = 1; i <= first_nonzero; ++i) {
        angle = advance_angle(angle, grid[i - 1].position, grid[i].position);
    }

    std::size_t last = first_nonzero;
    double last_value = rdot(grid[last]);
    double last_angle = angle;
    for (std::size_t i = first_nonzero + 1; i < grid.size(); ++i) {
        angle = advance_angle(angle, grid[i - 1].position, grid[i].position);
        const double value = rdot(grid[i]);
        if (std::abs(value) <= zero_band) continue;
        if ((value > 0.0) != (last_value > 0.0)) {
            double lo = grid[last].t, hi = grid[i].t;
            const bool lo_negative = last_value < 0.0;
            for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                ((rdot(traj.interpolate(mid)) < 0.0) == lo_negative ? lo : hi) = mid;
            }
            const double t = 0.5 * (lo + hi);
            const State s = traj.interpolate(t);
            const double a = advance_angle(last_angle, grid[last].position, s.position);
            out.events.push_back(
                {lo_negative ? ApsisKind::Pericenter : ApsisKind::Apocenter, t, s.position.norm(), a});
        }
        last = i;
        last_value = value;
        last_angle = angle;
    }
    return out;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double apsidal_limit(const PowerLawParams& params, double r0) {
    const auto d = potential_derivatives(params, r0);
    const double denom = 3.0 * d.first + r0 * d.second;
    if (!(denom > 1e-12 * 3.0 * d.first)) {
        std::ostringstream msg;
        msg << "apsidal limit undefined: 3U' + r U'' = " << denom << " <= 0";
        throw DegenerateLimit(msg.str());
    }
    return std::numbers::pi * std::sqrt(d.first / denom);
}

double apsidal_angle(const RadialProblem& problem) {
    const double width = problem.r_max - problem.r_min;
    if (!(width >= 0.0)) throw NoBoundedMotion("apsidal_angle: r_max < r_min");
    if (width < 1e-9) return apsidal_limit(problem.params, 0.5 * (problem.r_min + problem.r_max));

    static const QuadratureRule rule = gauss_legendre(kApsidalQuadratureNodes);
    const double half = std::numbers::pi / 4.0;  // theta in [0, pi/2]
    const double K = std::abs(problem.K);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double theta = half * (rule.nodes[i] + 1.0);
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double r = problem.r_min + width * s * s;
        const double gap = problem.E - effective_potential(problem.params, problem.K, r);
        if (!(gap > 0.0)) continue;
        const double dr = 2.0 * width * s * c;
        sum += rule.weights[i] * (K / (r * r)) * dr / std::sqrt(2.0 * gap);
    }
    return half * sum;
}

double radial_accel_at_launch(const PowerLawParams& params, double a, double epsilon) {
    if (!(a > 0.0)) throw InvalidArgument("radial_accel_at_launch: a must be positive");
    return epsilon * (2.0 + epsilon) * potential_derivatives(params, a).first;
}

double radial_accel_finite_difference(const PowerLawParams& params, double a, double epsilon, double h) {
    const ForceField field(params, PerturbationSpec{}, 1.0, Annulus{0.5 * a, 2.0 * a});
    const Vec2 x0{a, 0.0};
    const Vec2 v{0.0, (1.0 + epsilon) * circular_speed(params, a)};
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-13;
    const auto fwd = flow(field, 0.0, x0, v, h, cfg);
    const auto bwd = flow(field, 0.0, x0, -v, h, cfg);
    const double rp = fwd.interpolate(h).position.norm();
    const double rm = bwd.interpolate(h).position.norm();
    return (rp - 2.0 * a + rm) / (h * h);
}

}  // namespace symorb
