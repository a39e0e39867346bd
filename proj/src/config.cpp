#include "symorb/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "symorb/errors.hpp"
#include "symorb/json_writer.hpp"

namespace symorb {

using nlohmann::json;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", value);
}

namespace {

void dump_value(std::ostringstream& os, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                break;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(it.key()).dump() << ": ";
                dump_value(os, it.value(), indent + 1);
            }
            os << "\n" << pad << "}";
            break;
        }
        case json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                break;
            }
            // Short numeric rows stay on one line.
            const bool flat = v.size() <= 8 && std::all_of(v.begin(), v.end(), [](const json& e) {
                                  return e.is_number() || e.is_boolean() || e.is_null();
                              });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    dump_value(os, v[i], indent + 1);
                }
                os << "]";
                break;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                dump_value(os, v[i], indent + 1);
            }
            os << "\n" << pad << "]";
            break;
        }
        case json::value_t::number_float: {
            const double d = v.get<double>();
            // JSON has no NaN/Infinity literals.
            if (std::isfinite(d)) {
                os << format_number(d);
            } else {
                os << "null";
            }
            break;
        }
        default:
            os << v.dump();
    }
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw InvalidArgument(where + ": unknown key '" + it.key() + "'");
    }
}

std::vector<Monomial> monomials_from_json(const json& j) {
    std::vector<Monomial> out;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 3) {
            throw InvalidArgument("axis_polynomial terms must be [coefficient, px, py]");
        }
        out.push_back({term[0].get<double>(), term[1].get<int>(), term[2].get<int>()});
    }
    return out;
}

json monomials_to_json(const std::vector<Monomial>& terms) {
    json out = json::array();
    for (const auto& m : terms) out.push_back({m.coefficient, m.px, m.py});
    return out;
}

ForceField field_from_json(const json& j, double reference_radius) {
    require_keys(j, {"kappa", "alpha", "perturbation", "mu_range", "annulus", "symmetry_tolerance"}, "field");
    PowerLawParams base{j.value("kappa", 1.0), j.value("alpha", 1.0)};

    PerturbationSpec spec;
    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        require_keys(p, {"kind", "params", "symmetries", "scaling"}, "perturbation");
        const std::string kind = p.value("kind", "zero");
        const json params = p.value("params", json::object());
        if (kind == "zero") {
            spec.kind = ZeroPerturbation{};
        } else if (kind == "radial_power") {
            require_keys(params, {"lambda", "beta"}, "radial_power params");
            spec.kind = RadialPowerPerturbation{params.value("lambda", 1.0), params.value("beta", 3.0)};
        } else if (kind == "axis_polynomial") {
            require_keys(params, {"fx", "fy"}, "axis_polynomial params");
            AxisPolynomialPerturbation poly;
            if (params.contains("fx")) poly.fx = monomials_from_json(params.at("fx"));
            if (params.contains("fy")) poly.fy = monomials_from_json(params.at("fy"));
            spec.kind = poly;
        } else {
            throw InvalidArgument("unknown perturbation kind '" + kind + "'");
        }
        if (p.contains("symmetries")) {
            spec.declared_symmetries.clear();
            for (const auto& s : p.at("symmetries")) spec.declared_symmetries.insert(reflection_from_string(s));
        }
        const std::string scaling = p.value("scaling", "linear");
        if (scaling == "linear") {
            spec.scaling = MuScaling::Linear;
        } else if (scaling == "signed_square") {
            spec.scaling = MuScaling::SignedSquare;
        } else {
            throw InvalidArgument("unknown perturbation scaling '" + scaling + "'");
        }
    }

    double mu_limit = 1.0;
    if (j.contains("mu_range")) {
        const json& m = j.at("mu_range");
        if (m.is_number()) {
            mu_limit = m.get<double>();
        } else if (m.is_array() && m.size() == 2) {
            mu_limit = m[1].get<double>();
            if (m[0].get<double>() != -mu_limit) throw InvalidArgument("mu_range must be symmetric about 0");
        } else {
            throw InvalidArgument("mu_range must be a number a or [-a, a]");
        }
    }

    Annulus annulus{0.5 * reference_radius, 2.0 * reference_radius};
    if (j.contains("annulus")) {
        const json& a = j.at("annulus");
        if (a.is_array() && a.size() == 2) {
            annulus = {a[0].get<double>(), a[1].get<double>()};
        } else if (a.is_object()) {
            annulus = {a.value("inner", annulus.inner), a.value("outer", annulus.outer)};
        } else {
            throw InvalidArgument("annulus must be [inner, outer]");
        }
    }
    return {base, spec, mu_limit, annulus, j.value("symmetry_tolerance", kDefaultSymmetryTolerance)};
}

struct PerturbationToJson {
    json& out;
    void operator()(const ZeroPerturbation&) const {
        out["kind"] = "zero";
        out["params"] = json::object();
    }
    void operator()(const RadialPowerPerturbation& p) const {
        out["kind"] = "radial_power";
        out["params"] = {{"lambda", p.lambda}, {"beta", p.beta}};
    }
    void operator()(const AxisPolynomialPerturbation& p) const {
        out["kind"] = "axis_polynomial";
        out["params"] = {{"fx", monomials_to_json(p.fx)}, {"fy", monomials_to_json(p.fy)}};
    }
};

}  // namespace

json field_to_json(const ForceField& field) {
    json pert;
    std::visit(PerturbationToJson{pert}, field.perturbation().kind);
    json syms = json::array();
    for (Reflection r : field.perturbation().declared_symmetries) syms.push_back(to_string(r));
    pert["symmetries"] = syms;
    pert["scaling"] = field.perturbation().scaling == MuScaling::Linear ? "linear" : "signed_square";
    return {{"kappa", field.base().kappa},
            {"alpha", field.base().alpha},
            {"perturbation", pert},
            {"mu_range", {-field.mu_limit(), field.mu_limit()}},
            {"annulus", {field.annulus().inner, field.annulus().outer}},
            {"symmetry_tolerance", field.symmetry_tolerance()}};
}

namespace {

template <typename T>
std::optional<T> optional_value(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json crossing_json(const std::vector<AxisCrossing>& crossings) {
    json out = json::array();
    for (const auto& c : crossings) out.push_back({c.point.x, c.point.y});
    return out;
}

}  // namespace

std::string dump_json(const json& value) {
    std::ostringstream os;
    dump_value(os, value, 0);
    os << "\n";
    return os.str();
}

ForceField field_from_json_text(const std::string& text, double reference_radius) {
    try {
        return field_from_json(json::parse(text), reference_radius);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("field config: ") + e.what());
    }
}

std::string field_to_json_text(const ForceField& field) { return dump_json(field_to_json(field)); }

void RunConfig::validate() const {
    integrator.validate();
    if (!(radius > 0.0)) throw InvalidArgument("config: radius must be positive");
    if (!(miss_tol > 0.0)) throw InvalidArgument("config: miss_tol must be positive");
    if (!(eta > 0.0) || !(delta > 0.0)) throw InvalidArgument("config: eta and delta must be positive");
    if (t_bar && !(*t_bar > 0.0)) throw InvalidArgument("config: t_bar must be positive");
    if (sweep.mu_points == 0) throw InvalidArgument("config: sweep.mu_points must be positive");
    if (sweep.mu_max && !(*sweep.mu_max > 0.0)) throw InvalidArgument("config: sweep.mu_max must be positive");
    if (scan.sigma_points < 2 || scan.mu_points == 0) throw InvalidArgument("config: scan grid too small");
    if (scan.mu_max && !(*scan.mu_max > 0.0)) throw InvalidArgument("config: scan.mu_max must be positive");
    if (threads < 1) throw InvalidArgument("config: threads must be >= 1");
    if (mode) {
        const bool quarter = *mode == ShootingMode::Quarter;
        if (quarter != (field.base().alpha == 1.0)) {
            throw InvalidArgument("config: mode must be quarter exactly when alpha = 1");
        }
    }
}

ShootingMode RunConfig::resolved_mode() const {
    return mode.value_or(field.base().alpha == 1.0 ? ShootingMode::Quarter : ShootingMode::Half);
}

ShootingProblem RunConfig::problem() const {
    ShootingProblem p{field};
    p.radius = radius;
    p.mode = resolved_mode();
    p.eta = eta;
    p.delta = delta;
    p.t_bar = t_bar;
    p.integrator = integrator;
    p.validate();
    return p;
}

RunConfig run_config_from_json_text(const std::string& text) {
    try {
        const json j = json::parse(text);
        require_keys(j, {"field", "mode", "radius", "integrator", "shooting", "sweep", "scan", "output", "seed",
                         "threads"},
                     "config");
        RunConfig cfg;
        cfg.radius = j.value("radius", 1.0);
        if (j.contains("field")) cfg.field = field_from_json(j.at("field"), cfg.radius);
        const std::string mode = j.value("mode", "auto");
        if (mode != "auto") cfg.mode = shooting_mode_from_string(mode);

        if (j.contains("integrator")) {
            const json& in = j.at("integrator");
            require_keys(in, {"rel_tol", "abs_tol", "max_step"}, "integrator");
            cfg.integrator.rel_tol = in.value("rel_tol", cfg.integrator.rel_tol);
            cfg.integrator.abs_tol = in.value("abs_tol", cfg.integrator.abs_tol);
            cfg.integrator.max_step = optional_value<double>(in, "max_step");
        }
        if (j.contains("shooting")) {
            const json& s = j.at("shooting");
            require_keys(s, {"eta", "delta", "t_bar", "miss_tol"}, "shooting");
            cfg.eta = s.value("eta", cfg.eta);
            cfg.delta = s.value("delta", cfg.delta);
            cfg.miss_tol = s.value("miss_tol", cfg.miss_tol);
            cfg.t_bar = optional_value<double>(s, "t_bar");
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            require_keys(s, {"mu_max", "mu_points", "both_signs"}, "sweep");
            cfg.sweep.mu_max = optional_value<double>(s, "mu_max");
            cfg.sweep.mu_points = s.value("mu_points", cfg.sweep.mu_points);
            cfg.sweep.both_signs = s.value("both_signs", cfg.sweep.both_signs);
        }
        if (j.contains("scan")) {
            const json& s = j.at("scan");
            require_keys(s, {"sigma_points", "mu_points", "mu_max"}, "scan");
            cfg.scan.sigma_points = s.value("sigma_points", cfg.scan.sigma_points);
            cfg.scan.mu_points = s.value("mu_points", cfg.scan.mu_points);
            cfg.scan.mu_max = optional_value<double>(s, "mu_max");
        }
        cfg.output_dir = j.value("output", cfg.output_dir);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return run_config_from_json_text(buffer.str());
}

json orbit_json(const PeriodicOrbit& orbit, const ShootingSolution& solution, const OrbitDiagnostics& d,
                bool include_samples) {
    json diag = {
        {"closure", {{"position", d.closure.position}, {"velocity", d.closure.velocity}}},
        {"winding", d.winding},
        {"simple", d.simplicity.simple},
        {"crossings", crossing_json(d.crossings)},
        {"symmetry", {{"reflect-x", d.symmetry_x}}},
        {"passed", d.passed()},
        {"failures", d.failures},
    };
    if (d.symmetry_y) diag["symmetry"]["reflect-y"] = *d.symmetry_y;
    json out = {
        {"mu", orbit.mu()},
        {"sigma", solution.sigma},
        {"v_mu", {orbit.v_mu().x, orbit.v_mu().y}},
        {"tau", orbit.tau()},
        {"period", orbit.period()},
        {"symmetry", to_string(orbit.symmetry())},
        {"miss_residual", solution.miss_residual},
        {"diagnostics", diag},
    };
    if (include_samples) {
        json samples = json::array();
        for (const auto& s : orbit.samples()) {
            samples.push_back({s.t, s.position.x, s.position.y, s.velocity.x, s.velocity.y});
        }
        out["samples"] = samples;
    }
    return out;
}

std::string orbit_to_json_text(const PeriodicOrbit& orbit, const ShootingSolution& solution,
                               const OrbitDiagnostics& d, bool include_samples) {
    return dump_json(orbit_json(orbit, solution, d, include_samples));
}

void write_curve_csv(std::ostream& os, const ContinuationCurve& curve) {
    os << "mu,sigma_star,period,closure_residual\n";
    for (const auto& e : curve.entries) {
        os << format_number(e.mu) << ',' << format_number(e.sigma_star) << ',' << format_number(e.period) << ','
           << format_number(e.diagnostics.closure.position) << '\n';
    }
}

json curve_summary_json(const ContinuationCurve& curve) {
    json out = {
        {"entries", curve.entries.size()},
        {"connect_gap", curve.connect_gap},
        {"truncated", curve.truncated},
        {"empirical_delta0", curve.empirical_delta0 ? json(*curve.empirical_delta0) : json(nullptr)},
        {"failed_mu", curve.failed_mu ? json(*curve.failed_mu) : json(nullptr)},
        {"failure", curve.failure},
    };
    double eta_closeness = 0.0;
    for (const auto& e : curve.entries) eta_closeness = std::max(eta_closeness, std::abs(e.sigma_star - 1.0));
    out["max_sigma_deviation"] = eta_closeness;
    return out;
}

std::string curve_summary_json_text(const ContinuationCurve& curve) { return dump_json(curve_summary_json(curve)); }

void write_scan_csv(std::ostream& os, const ZeroSetScan& scan) {
    os << "mu\\sigma";
    for (double s : scan.sigma) os << ',' << format_number(s);
    os << '\n';
    for (std::size_t i = 0; i < scan.mu.size(); ++i) {
        os << format_number(scan.mu[i]);
        for (int v : scan.signs[i]) os << ',' << v;
        os << '\n';
    }
}

}  // namespace symorb
