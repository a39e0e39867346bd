#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "symorb/analysis.hpp"
#include "symorb/config.hpp"
#include "symorb/continuation.hpp"
#include "symorb/errors.hpp"
#include "symorb/json_writer.hpp"
#include "symorb/orbit.hpp"
#include "symorb/section.hpp"
#include "symorb/shooting.hpp"

namespace symorb::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::optional<double> mu;
    std::optional<double> sigma;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    bool json_output = false;
};

RunConfig load(const Options& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    if (o.out_dir) cfg.output_dir = *o.out_dir;
    if (o.threads) {
        if (*o.threads < 1) throw InvalidArgument("--threads must be >= 1");
        cfg.threads = *o.threads;
    }
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
    f << text;
}

std::string num(double v) { return format_number(v); }

// --- solve -----------------------------------------------------------------

int cmd_solve(const Options& o, std::ostream& out) {
    const RunConfig cfg = load(o);
    const double mu = o.mu.value_or(0.0);
    const ShootingProblem problem = cfg.problem();
    const ShootingSolution sol = solve(problem, mu, cfg.miss_tol);
    const PeriodicOrbit orbit = extend(problem, sol);
    const OrbitDiagnostics d = validate_orbit(orbit, problem.field, mu, problem.integrator);

    if (o.out_dir) {
        const fs::path dir(cfg.output_dir);
        write_file(dir / "orbit.json", dump_json(orbit_json(orbit, sol, d, true)));
        std::ostringstream csv;
        write_states_csv(csv, orbit.samples());
        write_file(dir / "orbit.csv", csv.str());
    }

    if (o.json_output) {
        out << dump_json(orbit_json(orbit, sol, d, false));
    } else {
        out << "mode          " << to_string(problem.mode) << '\n'
            << "mu            " << num(mu) << '\n'
            << "sigma*        " << num(sol.sigma) << '\n'
            << "v_mu          (" << num(sol.v_mu.x) << ", " << num(sol.v_mu.y) << ")\n"
            << "tau           " << num(sol.tau) << '\n'
            << "period        " << num(orbit.period()) << '\n'
            << "miss residual " << num(sol.miss_residual) << '\n'
            << "closure       " << num(d.closure.position) << '\n'
            << "winding       " << d.winding << '\n'
            << "validation    " << (d.passed() ? "passed" : "FAILED") << '\n';
        for (const auto& f : d.failures) out << "  " << f << '\n';
    }
    return d.passed() ? kOk : kValidation;
}

// --- sweep -----------------------------------------------------------------

ContinuationCurve merge(const ContinuationCurve& pos, const std::optional<ContinuationCurve>& neg) {
    ContinuationCurve all = pos;
    if (neg) {
        for (const auto& e : neg->entries) {
            if (e.mu != 0.0) all.entries.push_back(e);
        }
        std::sort(all.entries.begin(), all.entries.end(),
                  [](const CurveEntry& a, const CurveEntry& b) { return a.mu < b.mu; });
        all.truncated = pos.truncated || neg->truncated;
        if (pos.empirical_delta0 && neg->empirical_delta0) {
            all.empirical_delta0 = std::min(*pos.empirical_delta0, *neg->empirical_delta0);
        } else {
            all.empirical_delta0.reset();
        }
    }
    all.connect_gap = 0.0;
    for (std::size_t i = 1; i < all.entries.size(); ++i) {
        all.connect_gap =
            std::max(all.connect_gap, std::abs(all.entries[i].sigma_star - all.entries[i - 1].sigma_star));
    }
    return all;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const ShootingProblem problem = cfg.problem();
    const double a = problem.field.mu_limit();
    const double mu_max = cfg.sweep.mu_max.value_or(0.5 * a);
    if (!(mu_max < a)) throw InvalidArgument("sweep.mu_max must lie inside the mu range");

    SweepOptions opts;
    opts.tol = cfg.miss_tol;
    opts.threads = cfg.threads;
    const ContinuationCurve pos = sweep(problem, linspace(0.0, mu_max, cfg.sweep.mu_points), opts);
    std::optional<ContinuationCurve> neg;
    if (cfg.sweep.both_signs) neg = sweep(problem, linspace(0.0, -mu_max, cfg.sweep.mu_points), opts);
    const ContinuationCurve curve = merge(pos, neg);

    json summary = curve_summary_json(curve);
    summary["mu_max"] = mu_max;
    summary["mode"] = to_string(problem.mode);
    summary["positive"] = curve_summary_json(pos);
    if (neg) summary["negative"] = curve_summary_json(*neg);

    // Zero-set scan over the successful positive range.
    const double scan_mu = cfg.scan.mu_max.value_or(0.5 * pos.empirical_delta0.value_or(0.0));
    const auto sigma_grid = linspace(1.0 - problem.eta, 1.0 + problem.eta, cfg.scan.sigma_points);
    const auto mu_grid = scan_mu > 0.0 ? linspace(0.0, scan_mu, cfg.scan.mu_points) : std::vector<double>{0.0};
    bool scan_ok = true;
    std::string scan_csv;
    try {
        const ZeroSetScan scan = zero_set_scan(problem, sigma_grid, mu_grid, cfg.threads);
        std::ostringstream os;
        write_scan_csv(os, scan);
        scan_csv = os.str();
        scan_ok = scan.row_complete;
        summary["scan"] = {{"mu_max", scan_mu},
                           {"sigma_points", sigma_grid.size()},
                           {"mu_points", mu_grid.size()},
                           {"components", scan.components},
                           {"row_complete", scan.row_complete}};
    } catch (const BoundaryHypothesisFailure& e) {
        scan_ok = false;
        summary["scan"] = {{"mu_max", scan_mu}, {"error", e.what()}};
    }

    const fs::path dir(cfg.output_dir);
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    write_file(dir / "curve.csv", csv.str());
    write_file(dir / "summary.json", dump_json(summary));
    if (!scan_csv.empty()) write_file(dir / "scan.csv", scan_csv);

    if (o.json_output) {
        out << dump_json(summary);
    } else {
        out << "orbits           " << curve.entries.size() << '\n'
            << "mu range         [" << num(curve.entries.empty() ? 0.0 : curve.entries.front().mu) << ", "
            << num(curve.entries.empty() ? 0.0 : curve.entries.back().mu) << "]\n"
            << "empirical delta0 " << (curve.empirical_delta0 ? num(*curve.empirical_delta0) : "none") << '\n'
            << "connect gap      " << num(curve.connect_gap) << '\n'
            << "truncated        " << (curve.truncated ? "yes" : "no") << '\n'
            << "zero-set scan    " << (scan_ok ? "ok" : "FAILED") << '\n'
            << "outputs          " << (dir / "curve.csv").string() << ", " << (dir / "summary.json").string()
            << (scan_csv.empty() ? "" : ", " + (dir / "scan.csv").string()) << '\n';
    }
    if (pos.truncated) err << "positive sweep stopped at mu = " << num(pos.failed_mu.value_or(NAN)) << ": "
                           << pos.failure << '\n';
    if (neg && neg->truncated) err << "negative sweep stopped at mu = " << num(neg->failed_mu.value_or(NAN)) << ": "
                                   << neg->failure << '\n';
    if (!scan_ok) {
        err << "zero-set scan failed its boundary/row checks\n";
        return kValidation;
    }
    return kOk;
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const Options& o, std::ostream& out) {
    const RunConfig cfg = load(o);
    if (!o.sigma) throw InvalidArgument("analyze needs --sigma");
    const double mu = o.mu.value_or(0.0);
    const ShootingProblem problem = cfg.problem();
    const PowerLawParams& params = problem.field.base();
    const State s{0.0, problem.x0(), problem.launch_velocity(*o.sigma)};

    json report;
    report["sigma"] = *o.sigma;
    report["mu"] = mu;
    report["E"] = energy(params, s);
    report["K"] = angular_momentum(s);
    try {
        report["Phi_limit"] = apsidal_limit(params, problem.radius);
    } catch (const DegenerateLimit&) {
        report["Phi_limit"] = nullptr;
    }
    try {
        const RadialProblem rp = RadialProblem::from_state(params, s);
        report["r_min"] = rp.r_min;
        report["r_max"] = rp.r_max;
        report["Phi"] = apsidal_angle(rp);
    } catch (const NoBoundedMotion& e) {
        report["r_min"] = nullptr;
        report["r_max"] = nullptr;
        report["Phi"] = nullptr;
        report["note"] = e.what();
    }

    // Apsides along three circular periods of the (possibly perturbed) flow.
    const Trajectory traj =
        flow(problem.field, mu, s.position, s.velocity, 3.0 * problem.circular_period(), problem.integrator);
    const ApsidesResult ap = apsides(traj);
    report["circular"] = ap.circular;
    json events = json::array();
    for (const auto& ev : ap.events) {
        events.push_back({{"kind", ev.kind == ApsisKind::Pericenter ? "pericenter" : "apocenter"},
                          {"t", ev.t},
                          {"r", ev.r},
                          {"angle", ev.angle}});
    }
    report["apsides"] = events;
    if (ap.circular && report["Phi"].is_number()) report["Phi"] = report["Phi_limit"];

    if (o.json_output) {
        out << dump_json(report);
    } else {
        auto field = [&](const char* key) {
            const json& v = report[key];
            return v.is_number() ? num(v.get<double>()) : std::string("n/a");
        };
        out << "E         " << field("E") << '\n'
            << "K         " << field("K") << '\n'
            << "r_min     " << field("r_min") << '\n'
            << "r_max     " << field("r_max") << '\n'
            << "Phi       " << field("Phi") << '\n'
            << "Phi_limit " << field("Phi_limit") << '\n'
            << "circular  " << (ap.circular ? "yes" : "no") << '\n'
            << "apsides   " << ap.events.size() << '\n';
        if (report.contains("note")) out << "note      " << report["note"].get<std::string>() << '\n';
    }
    return kOk;
}

// --- verify ----------------------------------------------------------------

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

Check run_check(const std::string& name, const std::function<Check()>& body) {
    try {
        Check c = body();
        c.name = name;
        return c;
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const ShootingProblem problem = cfg.problem();
    const double a = problem.field.mu_limit();
    const double mu_max = std::min(cfg.sweep.mu_max.value_or(0.5 * a), 0.5 * a);

    std::vector<Check> checks;

    checks.push_back(run_check("field_symmetry", [&] {
        double worst = 0.0;
        for (double mu : {mu_max, -mu_max, 0.5 * mu_max}) {
            worst = std::max(worst, measure_symmetry(problem.field, mu, 1000, cfg.seed).max_residual());
        }
        return Check{"", worst <= problem.field.symmetry_tolerance(),
                     fmt::format("max residual {:.3g} over declared mirrors (tolerance {:.3g})", worst,
                                 problem.field.symmetry_tolerance())};
    }));

    checks.push_back(run_check("sign_table", [&] {
        int matches = 0;
        for (double alpha : {0.0, 0.5, 2.0, 3.0}) {
            for (double eps : {0.05, -0.05}) {
                const int expected = (alpha < 1.0 ? 1 : -1) * (eps > 0.0 ? 1 : -1);
                matches += sign_table({1.0, alpha}, eps) == expected ? 1 : 0;
            }
        }
        return Check{"", matches == 8, fmt::format("{}/8 cells match", matches)};
    }));

    checks.push_back(run_check("launch_identity", [&] {
        const PowerLawParams& p = problem.field.base();
        double worst = 0.0;
        for (double eps : {0.1, -0.1, 0.01, -0.01}) {
            worst = std::max(worst, std::abs(radial_accel_finite_difference(p, problem.radius, eps) -
                                             radial_accel_at_launch(p, problem.radius, eps)));
        }
        return Check{"", worst < 1e-5, fmt::format("max deviation {:.3g}", worst)};
    }));

    checks.push_back(run_check("reflection_equivariance", [&] {
        const double mu = 0.5 * mu_max;
        const auto rc = flow_with_reflection_check(problem.field, mu, problem.x0(), problem.launch_velocity(1.0),
                                                   problem.window(), problem.integrator);
        return Check{"", rc.residual <= 1e-8, fmt::format("residual {:.3g} at mu = {}", rc.residual, num(mu))};
    }));

    checks.push_back(run_check("continuity", [&] {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> sd(1.0 - problem.eta / 2.0, 1.0 + problem.eta / 2.0);
        std::uniform_real_distribution<double> md(0.0, 0.5 * mu_max);
        auto t_of = [&](double sigma, double mu) {
            return crossing_time(problem.field, mu, problem.x0(), problem.launch_velocity(sigma), problem.section(),
                                 problem.window(), problem.integrator)
                .t;
        };
        bool ok = true;
        std::string detail;
        for (int k = 0; k < 3; ++k) {
            const double sigma = sd(rng);
            const double mu = md(rng);
            const double t0 = t_of(sigma, mu);
            const double d3 = std::abs(t_of(sigma + 1e-3, mu) - t0);
            const double d4 = std::abs(t_of(sigma + 1e-4, mu) - t0);
            const double d5 = std::abs(t_of(sigma + 1e-5, mu) - t0);
            ok = ok && d3 > d4 && d4 > d5;
            detail += fmt::format("{}{:.2e} {:.2e} {:.2e}", k ? "; " : "", d3, d4, d5);
        }
        return Check{"", ok, detail};
    }));

    checks.push_back(run_check("circular_solve", [&] {
        const ShootingSolution sol = solve(problem, 0.0, cfg.miss_tol);
        const OrbitDiagnostics d = validate_orbit(extend(problem, sol), problem.field, 0.0, problem.integrator);
        const double dev = std::abs(sol.sigma - 1.0);
        return Check{"", dev < 1e-8 && d.passed(),
                     fmt::format("|sigma* - 1| = {:.3g}, validation {}", dev, d.passed() ? "passed" : "failed")};
    }));

    const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    if (o.json_output) {
        json report = {{"passed", all}, {"checks", json::array()}};
        for (const auto& c : checks) {
            report["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        out << dump_json(report);
    } else {
        for (const auto& c : checks) out << '[' << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << '\n';
    }
    for (const auto& c : checks) {
        if (!c.passed) err << "failed check: " << c.name << '\n';
    }
    return all ? kOk : kValidation;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BracketFailure*>(&e)) return kBracket;
    if (dynamic_cast<const NonConvergence*>(&e)) return kConvergence;
    if (dynamic_cast<const HypothesisViolation*>(&e) || dynamic_cast<const SymmetryViolation*>(&e) ||
        dynamic_cast<const BoundaryHypothesisFailure*>(&e)) {
        return kValidation;
    }
    if (dynamic_cast<const DomainExit*>(&e) || dynamic_cast<const CrossingError*>(&e) ||
        dynamic_cast<const StepFailure*>(&e) || dynamic_cast<const NoBoundedMotion*>(&e) ||
        dynamic_cast<const DegenerateLimit*>(&e)) {
        return kDomain;
    }
    return kUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetric periodic orbits of perturbed power-law central forces", "symorb"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out_dir, "output directory");
        sub->add_flag("--json", o.json_output, "machine-readable report on stdout");
    };
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve, extend and validate one orbit");
    common(solve_cmd);
    solve_cmd->add_option("--mu", o.mu, "perturbation parameter (default 0)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "continuation sweep in mu and zero-set scan");
    common(sweep_cmd);
    sweep_cmd->add_option("--threads", o.threads, "worker threads for independent solves");

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "energy, turning radii, apsides, apsidal angle");
    common(analyze_cmd);
    analyze_cmd->add_option("--sigma", o.sigma, "launch speed multiplier")->required();
    analyze_cmd->add_option("--mu", o.mu, "perturbation parameter (default 0)");

    CLI::App* verify_cmd = app.add_subcommand("verify", "property checks on a configuration");
    common(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_out, o_err;
        const int code = app.exit(e, o_out, o_err);
        out << o_out.str();
        err << o_err.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(o, out);
        if (*sweep_cmd) return cmd_sweep(o, out, err);
        if (*analyze_cmd) return cmd_analyze(o, out);
        if (*verify_cmd) return cmd_verify(o, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kUsage;
}

}  // namespace symorb::cli
