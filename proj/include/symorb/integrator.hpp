#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "symorb/forcefield.hpp"
#include "symorb/vec2.hpp"

namespace symorb {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    /// Unset: one fiftieth of the circular period at the launch radius.
    std::optional<double> max_step;
    /// Unset: the field's annulus inner radius.
    std::optional<double> min_radius_guard;
    std::size_t max_steps = 2'000'000;

    void validate() const;
};

/// Dense solution of r'' = g(r, mu) built from accepted Dormand-Prince steps.
/// Each step stores the coefficients of its fourth-order continuous extension.
class Trajectory {
  public:
    using Vector = std::array<double, 4>;  // x, y, vx, vy

    struct Step {
        double t0 = 0.0;
        double h = 0.0;
        std::array<Vector, 5> coeff{};

        [[nodiscard]] double t1() const { return t0 + h; }
        [[nodiscard]] Vector eval(double t) const;
    };

    Trajectory() = default;
    Trajectory(State start, double mu);

    [[nodiscard]] double t_begin() const { return start_.t; }
    /// End of the valid span; may lie inside the last step after truncation.
    [[nodiscard]] double t_end() const { return end_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] const State& start() const { return start_; }
    [[nodiscard]] std::span<const Step> steps() const { return steps_; }
    [[nodiscard]] std::size_t step_count() const { return steps_.size(); }

    /// State at time t, t clamped into [t_begin, t_end].
    [[nodiscard]] State interpolate(double t) const;
    /// Stored state at node i (i = 0 .. step_count()).
    [[nodiscard]] State node(std::size_t i) const;
    [[nodiscard]] std::vector<double> node_times() const;

    /// `count + 1` uniformly spaced states covering [t_begin, t_end].
    [[nodiscard]] std::vector<State> sample_uniform(std::size_t count) const;

    /// Copy whose valid span ends at t (t_begin < t <= t_end).
    [[nodiscard]] Trajectory truncated(double t) const;

    void append(const Step& step);

  private:
    State start_;
    double mu_ = 0.0;
    double end_ = 0.0;
    std::vector<Step> steps_;
};

/// Called after every accepted step; returning true stops the integration there.
using StepObserver = std::function<bool(const Trajectory&)>;

/// Integrates (r, r')' = (r', g(r, mu)) from (x, v) at t = 0 up to t_end with an adaptive
/// Dormand-Prince 5(4) scheme. Throws DomainExit (with the localized exit state) when the
/// orbit leaves the annulus, StepFailure when the step size underflows.
Trajectory flow(const ForceField& field, double mu, Vec2 x, Vec2 v, double t_end, const IntegratorConfig& cfg,
                const StepObserver& stop = {});

struct ReflectionCheck {
    Trajectory trajectory;
    Trajectory mirrored;
    /// max_t |phi r1(t) - r2(t)| with phi the mirror in the x-axis.
    double residual = 0.0;
};

/// Integrates (x0, v) and (phi x0, phi v) for the mirror phi in the x-axis and compares them.
ReflectionCheck flow_with_reflection_check(const ForceField& field, double mu, Vec2 x0, Vec2 v, double t_end,
                                           const IntegratorConfig& cfg);

/// CSV with header t,x,y,vx,vy and `count + 1` uniform rows, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t count);
void write_states_csv(std::ostream& os, std::span<const State> states);

}  // namespace symorb
