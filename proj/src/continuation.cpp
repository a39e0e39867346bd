#include "symorb/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>
#include <variant>

#include "symorb/errors.hpp"

namespace symorb {

namespace {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

void check_grid(const ShootingProblem& problem, const std::vector<double>& mu_grid) {
    if (mu_grid.empty()) throw InvalidArgument("sweep: empty mu grid");
    if (mu_grid.front() != 0.0) throw InvalidArgument("sweep: mu grid must start at 0");
    if (mu_grid.size() > 1) {
        const bool up = mu_grid[1] > 0.0;
        for (std::size_t i = 1; i < mu_grid.size(); ++i) {
            if (up ? !(mu_grid[i] > mu_grid[i - 1]) : !(mu_grid[i] < mu_grid[i - 1])) {
                throw InvalidArgument("sweep: mu grid must be strictly monotone");
            }
        }
    }
    for (double mu : mu_grid) {
        if (!(std::abs(mu) < problem.field.mu_limit())) throw InvalidArgument("sweep: mu grid leaves the mu range");
    }
}

using Outcome = std::variant<CurveEntry, std::string>;

Outcome attempt(const ShootingProblem& problem, double mu, const SweepOptions& options,
                std::optional<Bracket> warm) {
    try {
        CurveEntry entry = solve_and_validate(problem, mu, options, warm);
        if (!entry.diagnostics.passed()) {
            std::ostringstream msg;
            msg << "validation failed at mu = " << mu << ":";
            for (const auto& f : entry.diagnostics.failures) msg << " [" << f << "]";
            return msg.str();
        }
        return entry;
    } catch (const Error& e) {
        return std::string(e.what());
    }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = hi;
    return out;
}

PeriodicOrbit extend(const ShootingProblem& problem, const ShootingSolution& sol, std::size_t samples) {
    return problem.mode == ShootingMode::Quarter ? extend_quarter(sol.segment, samples)
                                                 : extend_half(sol.segment, samples);
}

CurveEntry solve_and_validate(const ShootingProblem& problem, double mu, const SweepOptions& options,
                              std::optional<Bracket> warm) {
    const ShootingSolution sol = solve(problem, mu, options.tol, warm);
    const PeriodicOrbit orbit = extend(problem, sol, options.orbit_samples);
    CurveEntry entry;
    entry.mu = mu;
    entry.sigma_star = sol.sigma;
    entry.v_mu = sol.v_mu;
    entry.tau = sol.tau;
    entry.period = orbit.period();
    entry.miss_residual = sol.miss_residual;
    entry.diagnostics = validate_orbit(orbit, problem.field, mu, problem.integrator, options.validation);
    return entry;
}

ContinuationCurve sweep(const ShootingProblem& problem, const std::vector<double>& mu_grid,
                        const SweepOptions& options) {
    problem.validate();
    check_grid(problem, mu_grid);

    std::vector<std::optional<Outcome>> outcomes(mu_grid.size());
    if (options.threads > 1) {
        parallel_for(mu_grid.size(), options.threads,
                     [&](std::size_t i) { outcomes[i] = attempt(problem, mu_grid[i], options, std::nullopt); });
    } else {
        std::optional<double> previous;
        for (std::size_t i = 0; i < mu_grid.size(); ++i) {
            std::optional<Bracket> warm;
            if (previous) {
                const double lo = std::max(1.0 - problem.eta, *previous - problem.eta / 4.0);
                const double hi = std::min(1.0 + problem.eta, *previous + problem.eta / 4.0);
                if (lo < hi) warm = try_bracket(problem, mu_grid[i], lo, hi);
            }
            outcomes[i] = attempt(problem, mu_grid[i], options, warm);
            if (const auto* e = std::get_if<CurveEntry>(&*outcomes[i])) {
                previous = e->sigma_star;
            } else {
                break;
            }
        }
    }

    ContinuationCurve curve;
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        const auto& out = *outcomes[i];
        if (const auto* e = std::get_if<CurveEntry>(&out)) {
            curve.entries.push_back(*e);
            continue;
        }
        curve.truncated = true;
        curve.failed_mu = mu_grid[i];
        curve.failure = std::get<std::string>(out);
        break;
    }
    if (!curve.entries.empty()) curve.empirical_delta0 = std::abs(curve.entries.back().mu);

    std::sort(curve.entries.begin(), curve.entries.end(),
              [](const CurveEntry& a, const CurveEntry& b) { return a.mu < b.mu; });
    for (std::size_t i = 1; i < curve.entries.size(); ++i) {
        curve.connect_gap =
            std::max(curve.connect_gap, std::abs(curve.entries[i].sigma_star - curve.entries[i - 1].sigma_star));
    }
    return curve;
}

ZeroSetScan zero_set_scan(const ShootingProblem& problem, const std::vector<double>& sigma_grid,
                          const std::vector<double>& mu_grid, int threads) {
    problem.validate();
    if (sigma_grid.size() < 2 || mu_grid.empty()) throw InvalidArgument("zero_set_scan: grid too small");

    ZeroSetScan scan;
    scan.sigma = sigma_grid;
    scan.mu = mu_grid;
    const std::size_t rows = mu_grid.size();
    const std::size_t cols = sigma_grid.size();
    scan.signs.assign(rows, std::vector<int>(cols, 0));
    scan.values.assign(rows, std::vector<double>(cols, std::nan("")));

    parallel_for(rows * cols, threads, [&](std::size_t k) {
        const std::size_t i = k / cols;
        const std::size_t j = k % cols;
        try {
            const double v = miss(problem, sigma_grid[j], mu_grid[i]).value;
            scan.values[i][j] = v;
            scan.signs[i][j] = v < 0.0 ? -1 : 1;
        } catch (const Error&) {
        }
    });

    const int o = problem.expected_orientation();
    for (std::size_t i = 0; i < rows; ++i) {
        if (scan.signs[i].front() != -o || scan.signs[i].back() != o) {
            std::ostringstream msg;
            msg << "boundary columns at mu = " << mu_grid[i] << " have signs (" << scan.signs[i].front() << ", "
                << scan.signs[i].back() << "), expected (" << -o << ", " << o << ")";
            throw BoundaryHypothesisFailure(msg.str());
        }
    }

    // Sign-change cells and their 8-neighbour components.
    std::vector<std::vector<int>> label(rows, std::vector<int>(cols - 1, -1));
    auto is_change = [&](std::size_t i, std::size_t j) {
        return scan.signs[i][j] * scan.signs[i][j + 1] < 0;
    };
    scan.changes_per_row.assign(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j + 1 < cols; ++j) scan.changes_per_row[i] += is_change(i, j) ? 1 : 0;
    }
    scan.row_complete = std::all_of(scan.changes_per_row.begin(), scan.changes_per_row.end(),
                                    [](int c) { return c > 0; });

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (!is_change(i, j) || label[i][j] >= 0) continue;
            const int id = scan.components++;
            std::vector<std::pair<std::size_t, std::size_t>> stack{{i, j}};
            label[i][j] = id;
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                for (int di = -1; di <= 1; ++di) {
                    for (int dj = -1; dj <= 1; ++dj) {
                        const auto ni = static_cast<std::ptrdiff_t>(ci) + di;
                        const auto nj = static_cast<std::ptrdiff_t>(cj) + dj;
                        if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(rows) ||
                            nj >= static_cast<std::ptrdiff_t>(cols - 1)) {
                            continue;
                        }
                        const auto ui = static_cast<std::size_t>(ni);
                        const auto uj = static_cast<std::size_t>(nj);
                        if (is_change(ui, uj) && label[ui][uj] < 0) {
                            label[ui][uj] = id;
                            stack.emplace_back(ui, uj);
                        }
                    }
                }
            }
        }
    }
    return scan;
}

}  // namespace symorb
