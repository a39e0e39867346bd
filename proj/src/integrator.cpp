#include "symorb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "symorb/errors.hpp"

namespace symorb {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");
    if (max_step && !(*max_step > 0.0)) throw InvalidArgument("integrator max_step must be positive");
    if (min_radius_guard && !(*min_radius_guard > 0.0)) throw InvalidArgument("min_radius_guard must be positive");
    if (max_steps == 0) throw InvalidArgument("max_steps must be positive");
}

namespace {

using Vector = Trajectory::Vector;

Vector to_vector(const Vec2& p, const Vec2& v) { return {p.x, p.y, v.x, v.y}; }

State to_state(double t, const Vector& y) { return {t, {y[0], y[1]}, {y[2], y[3]}}; }

Vector axpy(const Vector& y, double h, std::initializer_list<std::pair<double, const Vector*>> terms) {
    Vector out = y;
    for (const auto& [c, k] : terms) {
        for (int i = 0; i < 4; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class Rhs {
  public:
    Rhs(const ForceField& field, double mu) : field_(field), mu_(mu) {}
    Vector operator()(const Vector& y) const {
        const Vec2 a = field_.acceleration({y[0], y[1]}, mu_);
        return {y[2], y[3], a.x, a.y};
    }

  private:
    const ForceField& field_;
    double mu_;
};

double scaled_norm(const Vector& e, const Vector& y0, const Vector& y1, const IntegratorConfig& cfg) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        sum += (e[i] / sk) * (e[i] / sk);
    }
    return std::sqrt(sum / 4.0);
}

double initial_step(const Rhs& f, const Vector& y0, const Vector& f0, double max_step,
                    const IntegratorConfig& cfg) {
    double dn0 = 0.0, dn1 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        dn0 += (y0[i] / sk) * (y0[i] / sk);
        dn1 += (f0[i] / sk) * (f0[i] / sk);
    }
    dn0 = std::sqrt(dn0 / 4.0);
    dn1 = std::sqrt(dn1 / 4.0);
    double h = (dn0 < 1e-10 || dn1 < 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
    h = std::min(h, max_step);
    const Vector y1 = axpy(y0, h, {{1.0, &f0}});
    const Vector f1 = f(y1);
    double dn2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        dn2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    dn2 = std::sqrt(dn2 / 4.0) / h;
    const double der = std::max(dn1, dn2);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 1.0 / 5.0);
    return std::min({100.0 * h, h1, max_step});
}

bool outside(double r, double inner, double outer) { return r < inner || r > outer; }

}  // namespace

Vector Trajectory::Step::eval(double t) const {
    const double th = h > 0.0 ? (t - t0) / h : 0.0;
    const double th1 = 1.0 - th;
    Vector out{};
    for (int i = 0; i < 4; ++i) {
        out[i] = coeff[0][i] +
                 th * (coeff[1][i] + th1 * (coeff[2][i] + th * (coeff[3][i] + th1 * coeff[4][i])));
    }
    return out;
}

Trajectory::Trajectory(State start, double mu) : start_(start), mu_(mu), end_(start.t) {}

State Trajectory::interpolate(double t) const {
    if (steps_.empty()) return start_;
    t = std::clamp(t, start_.t, end_);
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double value, const Step& s) { return value < s.t0; });
    const Step& s = it == steps_.begin() ? steps_.front() : *std::prev(it);
    return to_state(t, s.eval(t));
}

State Trajectory::node(std::size_t i) const {
    if (i == 0) return start_;
    const Step& s = steps_.at(i - 1);
    return to_state(s.t1(), s.eval(s.t1()));
}

std::vector<double> Trajectory::node_times() const {
    std::vector<double> out;
    out.reserve(steps_.size() + 1);
    out.push_back(start_.t);
    for (const auto& s : steps_) out.push_back(std::min(s.t1(), end_));
    return out;
}

std::vector<State> Trajectory::sample_uniform(std::size_t count) const {
    std::vector<State> out;
    out.reserve(count + 1);
    const double span = end_ - start_.t;
    for (std::size_t i = 0; i <= count; ++i) {
        const double t = i == count ? end_ : start_.t + span * static_cast<double>(i) / static_cast<double>(count);
        out.push_back(interpolate(t));
    }
    return out;
}

Trajectory Trajectory::truncated(double t) const {
    if (!(t > start_.t) || t > end_) throw InvalidArgument("truncated: time outside trajectory span");
    Trajectory out(start_, mu_);
    for (const auto& s : steps_) {
        if (s.t0 >= t) break;
        out.steps_.push_back(s);
    }
    out.end_ = t;
    return out;
}

void Trajectory::append(const Step& step) {
    steps_.push_back(step);
    end_ = step.t1();
}

Trajectory flow(const ForceField& field, double mu, Vec2 x, Vec2 v, double t_end, const IntegratorConfig& cfg,
                const StepObserver& stop) {
    cfg.validate();
    if (!(t_end > 0.0)) throw InvalidArgument("flow: t_end must be positive");
    // Validates mu range and the starting point.
    (void)field.eval_force(x, mu);

    const double inner = cfg.min_radius_guard.value_or(field.annulus().inner);
    const double outer = field.annulus().outer;
    const double r0 = x.norm();
    const double max_step = cfg.max_step.value_or(
        2.0 * std::numbers::pi * r0 / circular_speed(field.base(), r0) / 50.0);

    const Rhs f(field, mu);
    Trajectory traj(State{0.0, x, v}, mu);

    Vector y = to_vector(x, v);
    Vector k1 = f(y);
    double t = 0.0;
    double h = initial_step(f, y, k1, max_step, cfg);
    bool last_rejected = false;

    for (std::size_t n = 0; t < t_end; ++n) {
        if (n >= cfg.max_steps) throw StepFailure("flow: step budget exhausted before t_end");
        if (t + h >= t_end || t + 1.01 * h >= t_end) h = t_end - t;

        const Vector k2 = f(axpy(y, h, {{a21, &k1}}));
        const Vector k3 = f(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vector k4 = f(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vector k5 = f(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vector k6 = f(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vector y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const Vector k7 = f(y1);

        Vector err{};
        for (int i = 0; i < 4; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        const double en = scaled_norm(err, y, y1, cfg);
        const bool finite = std::all_of(y1.begin(), y1.end(), [](double q) { return std::isfinite(q); });

        if (finite && en <= 1.0) {
            Trajectory::Step step;
            step.t0 = t;
            step.h = h;
            for (int i = 0; i < 4; ++i) {
                const double diff = y1[i] - y[i];
                const double bspl = h * k1[i] - diff;
                step.coeff[0][i] = y[i];
                step.coeff[1][i] = diff;
                step.coeff[2][i] = bspl;
                step.coeff[3][i] = diff - h * k7[i] - bspl;
                step.coeff[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                        d7 * k7[i]);
            }

            // Domain guard: look at a few interior points of the step as well as the node.
            constexpr int kProbe = 4;
            for (int j = 1; j <= kProbe; ++j) {
                const double tj = t + h * j / kProbe;
                const Vector yj = step.eval(tj);
                if (!outside(std::hypot(yj[0], yj[1]), inner, outer)) continue;
                double lo = t + h * (j - 1) / kProbe;
                double hi = tj;
                for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const Vector ym = step.eval(mid);
                    (outside(std::hypot(ym[0], ym[1]), inner, outer) ? hi : lo) = mid;
                }
                const State exit = to_state(hi, step.eval(hi));
                std::ostringstream msg;
                msg << "trajectory left annulus [" << inner << ", " << outer << "] at t = " << hi << ", |r| = "
                    << exit.position.norm();
                throw DomainExit(msg.str(), exit);
            }

            traj.append(step);
            t = (h == t_end - t) ? t_end : t + h;
            y = y1;
            k1 = k7;
            if (stop && stop(traj)) break;
        }

        double fac = finite ? 0.9 * std::pow(std::max(en, 1e-10), -0.2) : 0.2;
        fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
        last_rejected = !(finite && en <= 1.0);
        h = std::min(h * fac, max_step);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            throw StepFailure(fmt::format("flow: step size underflow at t = {}", t));
        }
    }
    return traj;
}

ReflectionCheck flow_with_reflection_check(const ForceField& field, double mu, Vec2 x0, Vec2 v, double t_end,
                                           const IntegratorConfig& cfg) {
    ReflectionCheck out;
    out.trajectory = flow(field, mu, x0, v, t_end, cfg);
    out.mirrored = flow(field, mu, reflect(Reflection::XAxis, x0), reflect(Reflection::XAxis, v), t_end, cfg);

    auto probe = [&](double t) {
        const Vec2 a = reflect(Reflection::XAxis, out.trajectory.interpolate(t).position);
        const Vec2 b = out.mirrored.interpolate(t).position;
        out.residual = std::max(out.residual, distance(a, b));
    };
    for (double t : out.trajectory.node_times()) probe(t);
    for (double t : out.mirrored.node_times()) probe(t);
    constexpr int kUniform = 1000;
    for (int i = 0; i <= kUniform; ++i) probe(t_end * i / kUniform);
    return out;
}

void write_states_csv(std::ostream& os, std::span<const State> states) {
    os << "t,x,y,vx,vy\n";
    for (const auto& s : states) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.position.x, s.position.y,
                          s.velocity.x, s.velocity.y);
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t count) {
    const auto states = traj.sample_uniform(count);
    write_states_csv(os, states);
}

}  // namespace symorb
