#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dynpin/errors.hpp"
#include "dynpin/experiment.hpp"
#include "dynpin/metrics.hpp"
#include "dynpin/oracle.hpp"
#include "dynpin/report.hpp"
#include "dynpin/scenario_io.hpp"
#include "dynpin/sim.hpp"
#include "dynpin/simplex.hpp"

namespace py = pybind11;
using namespace dynpin;

namespace {

std::vector<AssignmentProfile> to_profiles(const std::vector<std::vector<std::size_t>>& raw) {
    std::vector<AssignmentProfile> out;
    out.reserve(raw.size());
    for (const auto& p : raw) out.push_back(AssignmentProfile{p});
    return out;
}

std::vector<SimplexPoint> to_points(const std::vector<std::vector<double>>& raw) {
    std::vector<SimplexPoint> out;
    out.reserve(raw.size());
    for (const auto& x : raw) out.emplace_back(x);
    return out;
}

std::vector<double> to_vec(const SimplexPoint& x) { return {x.weights().begin(), x.weights().end()}; }

BaselinePolicy policy_from(const std::string& name) {
    const auto p = parse_baseline(name);
    if (!p) throw std::invalid_argument("unknown baseline policy '" + name + "'");
    return *p;
}

GameSpec make_game(std::vector<double> capacities, std::vector<double> loads, std::vector<double> demands,
                   double gamma, double speed_scale) {
    GameSpec g{Platform{std::move(capacities), std::move(loads)}, std::move(demands), gamma, speed_scale};
    g.validate();
    return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Learning-based dynamic thread pinning: simulator, learner and equilibrium oracle.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
    py::register_exception<SizeError>(m, "SizeError", PyExc_RuntimeError);
    py::register_exception<MeasurementError>(m, "MeasurementError", PyExc_RuntimeError);

    // Simplex
    m.def("project_to_simplex", [](const std::vector<double>& v) { return to_vec(project_to_simplex(v)); },
          py::arg("v"));
    m.def("perturb", [](const std::vector<double>& x, double lambda) { return to_vec(perturb(SimplexPoint(x), lambda)); },
          py::arg("x"), py::arg("lam"));

    // Game
    py::class_<GameSpec>(m, "Game")
        .def(py::init(&make_game), py::arg("capacities"), py::arg("loads"), py::arg("demands"), py::arg("gamma"),
             py::arg("speed_scale") = 1.0)
        .def_property_readonly("capacities", [](const GameSpec& g) { return g.platform.capacities; })
        .def_property_readonly("loads", [](const GameSpec& g) { return g.platform.loads; })
        .def_readonly("demands", &GameSpec::demands)
        .def_readonly("gamma", &GameSpec::gamma)
        .def_readonly("speed_scale", &GameSpec::speed_scale)
        .def("speeds", [](const GameSpec& g, std::vector<std::size_t> a) { return speeds(AssignmentProfile{std::move(a)}, g); },
             py::arg("profile"))
        .def("objective", [](const GameSpec& g, std::vector<std::size_t> a) {
                 return profile_objective(AssignmentProfile{std::move(a)}, g);
             },
             py::arg("profile"))
        .def("validate", [](const GameSpec& g) {
            const auto v = validate_game(g);
            py::dict d;
            d["ok"] = v.ok;
            d["exhaustive"] = v.exhaustive;
            d["profiles_checked"] = v.profiles_checked;
            d["f_max"] = v.f_max;
            d["f_min"] = v.f_min;
            d["diagnostics"] = v.diagnostics;
            return d;
        });

    // Oracle
    m.def("_equilibria_json", [](const GameSpec& g, double tol) { return to_json(enumerate_pure_nash(g, tol)).dump(); },
          py::arg("game"), py::arg("tol") = kDefaultNashTolerance);
    m.def("mean_field_drift",
          [](const std::vector<std::vector<double>>& x, const GameSpec& g, double lambda) {
              const auto r = mean_field_drift(to_points(x), g, lambda);
              return py::make_tuple(r.drift, r.sup_norm);
          },
          py::arg("x"), py::arg("game"), py::arg("lam"));

    // Scenarios and runs
    py::class_<Scenario>(m, "Scenario")
        .def_static("from_file", [](const std::filesystem::path& p) { return parse_scenario(p); }, py::arg("path"))
        .def_static("from_json", [](const std::string& text) { return parse_scenario_text(text); }, py::arg("text"))
        .def("to_json", [](const Scenario& s) { return to_json(s).dump(); })
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("horizon_steps", &Scenario::horizon_steps)
        .def_readwrite("epsilon", &Scenario::epsilon)
        .def_readwrite("lambda_", &Scenario::lambda)
        .def_readwrite("gamma", &Scenario::gamma)
        .def_readwrite("noise_cv", &Scenario::noise_cv)
        .def_readonly("period_sec", &Scenario::period_sec)
        .def("full_game", &Scenario::full_game)
        .def("game_for", [](const Scenario& s, const std::vector<std::size_t>& active) { return s.game_for(active); },
             py::arg("active"));

    py::class_<Trace>(m, "Trace")
        .def("__len__", [](const Trace& t) { return t.steps.size(); })
        .def_readonly("period_sec", &Trace::period_sec)
        .def_readonly("completion_step", &Trace::completion_step)
        .def("all_completed", &Trace::all_completed)
        .def("makespan", &Trace::makespan)
        .def("active", [](const Trace& t, std::size_t k) { return t.steps.at(k).active; }, py::arg("step"))
        .def("profile", [](const Trace& t, std::size_t k) { return t.steps.at(k).profile.cpu_of; }, py::arg("step"))
        .def("utility", [](const Trace& t, std::size_t k) { return t.steps.at(k).utility; }, py::arg("step"))
        .def("strategies",
             [](const Trace& t, std::size_t k) {
                 std::vector<std::vector<double>> out;
                 for (const auto& x : t.steps.at(k).strategies) out.push_back(to_vec(x));
                 return out;
             },
             py::arg("step"))
        .def("to_csv", [](const Trace& t) {
            std::ostringstream out;
            write_trace_csv(out, t);
            return out.str();
        });

    m.def("run", &run, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
    m.def("run_baseline", [](const Scenario& s, const std::string& policy) { return run_baseline(s, policy_from(policy)); },
          py::arg("scenario"), py::arg("policy"));

    // Metrics
    m.def("time_fraction_near",
          [](const Trace& t, const std::vector<std::vector<std::size_t>>& nash, double delta, double tail) {
              return time_fraction_near(t, to_profiles(nash), delta, StepWindow::tail(t.steps.size(), tail));
          },
          py::arg("trace"), py::arg("nash_set"), py::arg("delta"), py::arg("tail") = 0.2);
    m.def("_completion_stats_json",
          [](const std::vector<double>& makespans) { return to_json(summarize_makespans(makespans)).dump(); },
          py::arg("makespans"));

    // Experiment harness
    m.def("run_experiment",
          [](const std::filesystem::path& scenario, const std::filesystem::path& out, std::size_t replicates,
             std::optional<std::string> baseline, std::optional<std::uint64_t> seed, bool report_nash, double delta) {
              ExperimentConfig c;
              c.scenario_path = scenario;
              c.output_dir = out;
              c.replicates = replicates;
              if (baseline) c.baseline = policy_from(*baseline);
              c.seed = seed;
              c.report_nash = report_nash;
              c.delta = delta;
              std::ostringstream console;
              const auto r = run_experiment(c, console);
              return py::make_tuple(r.exit_code, r.errors, r.artifacts);
          },
          py::arg("scenario"), py::arg("out"), py::arg("replicates") = 1, py::arg("baseline") = py::none(),
          py::arg("seed") = py::none(), py::arg("report_nash") = false, py::arg("delta") = 0.1);
}
