#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "symorb/analysis.hpp"
#include "symorb/config.hpp"
#include "symorb/continuation.hpp"
#include "symorb/errors.hpp"
#include "symorb/json_writer.hpp"
#include "symorb/shooting.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_python(const json& j) {
    switch (j.type()) {
        case json::value_t::null:
            return py::none();
        case json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
            return py::int_(j.get<long long>());
        case json::value_t::number_float:
            return py::float_(j.get<double>());
        case json::value_t::string:
            return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(to_python(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
            return out;
        }
        default:
            return py::none();
    }
}

symorb::RunConfig config_from(const py::object& source) {
    if (source.is_none()) {
        symorb::RunConfig cfg;
        cfg.validate();
        return cfg;
    }
    if (py::isinstance<py::str>(source)) return symorb::run_config_from_json_text(source.cast<std::string>());
    const auto text = py::module_::import("json").attr("dumps")(source).cast<std::string>();
    return symorb::run_config_from_json_text(text);
}

json entry_json(const symorb::CurveEntry& e) {
    return {{"mu", e.mu},
            {"sigma_star", e.sigma_star},
            {"tau", e.tau},
            {"period", e.period},
            {"closure_residual", e.diagnostics.closure.position},
            {"winding", e.diagnostics.winding},
            {"passed", e.diagnostics.passed()}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Symmetric periodic orbits of perturbed power-law central forces";

    auto base = py::register_exception<symorb::Error>(m, "SymorbError", PyExc_RuntimeError);
    py::register_exception<symorb::InvalidArgument>(m, "InvalidArgument", base);
    py::register_exception<symorb::BracketFailure>(m, "BracketFailure", base);
    py::register_exception<symorb::NonConvergence>(m, "NonConvergence", base);
    py::register_exception<symorb::DomainExit>(m, "DomainExit", base);
    py::register_exception<symorb::NoBoundedMotion>(m, "NoBoundedMotion", base);
    py::register_exception<symorb::BoundaryHypothesisFailure>(m, "BoundaryHypothesisFailure", base);

    py::class_<symorb::RunConfig>(m, "Problem")
        .def(py::init(&config_from), py::arg("config") = py::none(),
             "Build from a config dict or JSON text (the CLI schema); None gives the defaults.")
        .def_static("from_file", &symorb::load_run_config, py::arg("path"))
        .def_property_readonly("mode", [](const symorb::RunConfig& c) { return symorb::to_string(c.resolved_mode()); })
        .def_property_readonly("alpha", [](const symorb::RunConfig& c) { return c.field.base().alpha; })
        .def_property_readonly("kappa", [](const symorb::RunConfig& c) { return c.field.base().kappa; })
        .def_property_readonly("mu_limit", [](const symorb::RunConfig& c) { return c.field.mu_limit(); })
        .def_readonly("radius", &symorb::RunConfig::radius)
        .def_readonly("eta", &symorb::RunConfig::eta)
        .def("field_json", [](const symorb::RunConfig& c) { return to_python(symorb::field_to_json(c.field)); });

    m.def(
        "miss",
        [](const symorb::RunConfig& c, double sigma, double mu) { return symorb::miss(c.problem(), sigma, mu).value; },
        py::arg("problem"), py::arg("sigma"), py::arg("mu") = 0.0,
        "Miss function at launch multiplier sigma.");

    m.def(
        "solve",
        [](const symorb::RunConfig& c, double mu, bool samples) {
            const symorb::ShootingProblem p = c.problem();
            py::gil_scoped_release release;
            const auto sol = symorb::solve(p, mu, c.miss_tol);
            const auto orbit = symorb::extend(p, sol);
            const auto d = symorb::validate_orbit(orbit, p.field, mu, p.integrator);
            const json j = symorb::orbit_json(orbit, sol, d, samples);
            py::gil_scoped_acquire acquire;
            return to_python(j);
        },
        py::arg("problem"), py::arg("mu") = 0.0, py::arg("samples") = false,
        "Solve, extend and validate one periodic orbit.");

    m.def(
        "sweep",
        [](const symorb::RunConfig& c, const std::vector<double>& mu_grid, int threads) {
            symorb::SweepOptions opts;
            opts.tol = c.miss_tol;
            opts.threads = threads;
            const symorb::ShootingProblem p = c.problem();
            symorb::ContinuationCurve curve;
            {
                py::gil_scoped_release release;
                curve = symorb::sweep(p, mu_grid, opts);
            }
            json j = symorb::curve_summary_json(curve);
            j["entries"] = json::array();
            for (const auto& e : curve.entries) j["entries"].push_back(entry_json(e));
            return to_python(j);
        },
        py::arg("problem"), py::arg("mu_grid"), py::arg("threads") = 1,
        "Continuation sweep over a grid starting at 0.");

    m.def(
        "zero_set_scan",
        [](const symorb::RunConfig& c, const std::vector<double>& sigma_grid, const std::vector<double>& mu_grid,
           int threads) {
            const symorb::ShootingProblem p = c.problem();
            symorb::ZeroSetScan s;
            {
                py::gil_scoped_release release;
                s = symorb::zero_set_scan(p, sigma_grid, mu_grid, threads);
            }
            py::dict out;
            out["sigma"] = s.sigma;
            out["mu"] = s.mu;
            out["signs"] = s.signs;
            out["components"] = s.components;
            out["row_complete"] = s.row_complete;
            return out;
        },
        py::arg("problem"), py::arg("sigma_grid"), py::arg("mu_grid"), py::arg("threads") = 1);

    m.def("linspace", &symorb::linspace, py::arg("lo"), py::arg("hi"), py::arg("count"));

    m.def(
        "sign_table", [](double alpha, double epsilon, double kappa) { return symorb::sign_table({kappa, alpha}, epsilon); },
        py::arg("alpha"), py::arg("epsilon"), py::arg("kappa") = 1.0);

    m.def(
        "circular_speed", [](double alpha, double r, double kappa) { return symorb::circular_speed({kappa, alpha}, r); },
        py::arg("alpha"), py::arg("r") = 1.0, py::arg("kappa") = 1.0);

    m.def(
        "apsidal_angle",
        [](double alpha, double sigma, double kappa, double radius) {
            const symorb::PowerLawParams p{kappa, alpha};
            const symorb::State s{0.0, {radius, 0.0}, {0.0, sigma * symorb::circular_speed(p, radius)}};
            return symorb::apsidal_angle(symorb::RadialProblem::from_state(p, s));
        },
        py::arg("alpha"), py::arg("sigma"), py::arg("kappa") = 1.0, py::arg("radius") = 1.0,
        "Polar angle between consecutive apsides for a vertical launch at (radius, 0).");

    m.def(
        "apsidal_limit",
        [](double alpha, double kappa, double radius) { return symorb::apsidal_limit({kappa, alpha}, radius); },
        py::arg("alpha"), py::arg("kappa") = 1.0, py::arg("radius") = 1.0);

    m.def(
        "radial_accel_at_launch",
        [](double alpha, double epsilon, double kappa, double radius) {
            return symorb::radial_accel_at_launch({kappa, alpha}, radius, epsilon);
        },
        py::arg("alpha"), py::arg("epsilon"), py::arg("kappa") = 1.0, py::arg("radius") = 1.0);
}
