// Python bindings over the C++ core: scenario execution, planning, spectra,
// Gaussian synthesis, and the periodogram estimator. Configs cross the
// boundary as JSON-compatible dicts with the same schema the CLI reads.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "travelfield/checks.hpp"
#include "travelfield/diagnostics.hpp"
#include "travelfield/scenario.hpp"
#include "travelfield/simulate.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json json_from_py(const py::object& obj) {
    const py::object dumps = py::module_::import("json").attr("dumps");
    return json::parse(dumps(obj).cast<std::string>());
}

py::object py_from_json(const json& j) {
    const py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

tfld::ScenarioConfig config_from_py(const py::object& obj) {
    return tfld::ScenarioConfig::from_json(json_from_py(obj));
}

py::array_t<double> frames_array(const tfld::SpaceTimeField& field) {
    const int nt = field.epochs() + 1;
    py::array_t<double> arr({nt, field.grid.n1, field.grid.n2});
    auto view = arr.mutable_unchecked<3>();
    for (int t = 0; t < nt; ++t)
        for (int i = 0; i < field.grid.n1; ++i)
            for (int j = 0; j < field.grid.n2; ++j) view(t, i, j) = field.at(t, i, j);
    return arr;
}

tfld::SpaceTimeField field_from_array(const py::array_t<double, py::array::c_style>& arr, double dt) {
    if (arr.ndim() != 3) throw std::invalid_argument("expected a (T+1, n1, n2) array");
    tfld::SpaceTimeField field(tfld::Grid2D(static_cast<int>(arr.shape(1)),
                                            static_cast<int>(arr.shape(2))),
                               static_cast<int>(arr.shape(0)) - 1, dt);
    auto view = arr.unchecked<3>();
    for (int t = 0; t < static_cast<int>(arr.shape(0)); ++t)
        for (int i = 0; i < field.grid.n1; ++i)
            for (int j = 0; j < field.grid.n2; ++j) field.at(t, i, j) = view(t, i, j);
    return field;
}

py::dict plan_dict(const tfld::PlanReport& plan) {
    py::dict d;
    d["n_required"] = plan.n_required;
    d["v_max"] = plan.v_max;
    d["margin_cells"] = plan.margin_cells;
    d["rule"] = plan.rule == tfld::PlanReport::Rule::Deterministic ? "deterministic"
                : plan.rule == tfld::PlanReport::Rule::FieldSup    ? "field-sup"
                                                                   : "percentile95";
    d["window_base"] = py::make_tuple(plan.window_base[0], plan.window_base[1]);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "traveling Gaussian random field simulation core";

    m.def(
        "run_scenario",
        [](const py::object& config, int member) {
            const tfld::RunResult result = tfld::run_scenario(config_from_py(config), member);
            py::dict out;
            out["frames"] = frames_array(result.field);
            out["config"] = py_from_json(result.config.to_json());
            if (result.plan) out["plan"] = plan_dict(*result.plan);
            if (result.embedding) {
                py::dict e;
                e["m1"] = result.embedding->m1;
                e["m2"] = result.embedding->m2;
                e["min_eigenvalue"] = result.embedding->min_eigenvalue;
                e["clipped_mass_fraction"] = result.embedding->clipped_mass_fraction;
                e["exact"] = result.embedding->exact;
                out["embedding"] = e;
            }
            return out;
        },
        py::arg("config"), py::arg("member") = 0,
        "Run a scenario config (dict, same schema as the CLI) and return frames plus metadata.");

    m.def("preset_names", &tfld::preset_names);
    m.def(
        "preset", [](const std::string& name) { return py_from_json(tfld::make_preset(name).to_json()); },
        py::arg("name"), "Built-in scenario config as a dict.");

    m.def(
        "plan_extended_grid",
        [](int n, int T, const py::object& velocity, double dt) {
            json v = json_from_py(velocity);
            json cfg_json = {
                {"grid", {{"n1", n}, {"n2", n}}}, {"epochs", T}, {"dt", dt},
                {"spectrum", {{"kind", "power_law"}, {"alpha", 5.0}}}, {"velocity", v}};
            const tfld::ScenarioConfig cfg = tfld::ScenarioConfig::from_json(cfg_json);
            return plan_dict(tfld::plan_extended_grid(cfg.grid, T, cfg.velocity, dt));
        },
        py::arg("n"), py::arg("T"), py::arg("velocity"), py::arg("dt") = 1.0,
        "Extended-grid plan for an n x n window traveling for T epochs.");

    m.def(
        "simulate_spatial_circulant",
        [](const py::object& spectrum, int n, std::uint64_t seed, std::uint64_t stream) {
            json cfg_json = {{"grid", {{"n1", n}, {"n2", n}}}, {"epochs", 0},
                             {"spectrum", json_from_py(spectrum)},
                             {"velocity", {{"kind", "constant"}, {"v", {0.0, 0.0}}}}};
            const tfld::ScenarioConfig cfg = tfld::ScenarioConfig::from_json(cfg_json);
            tfld::RngStream rng(seed, stream);
            auto [field, report] =
                tfld::simulate_spatial_circulant(cfg.spectrum, tfld::Grid2D(n, n), rng);
            py::array_t<double> arr({n, n});
            auto view = arr.mutable_unchecked<2>();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) view(i, j) = field.at(i, j);
            py::dict rep;
            rep["min_eigenvalue"] = report.min_eigenvalue;
            rep["clipped_mass_fraction"] = report.clipped_mass_fraction;
            rep["exact"] = report.exact;
            return py::make_tuple(arr, rep);
        },
        py::arg("spectrum"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0,
        "One circulant-embedding realization of a spatial spectrum on an n x n grid.");

    m.def(
        "discretize_spectrum",
        [](const py::object& spectrum, int n1, int n2, int nt) {
            json cfg_json = {{"grid", {{"n1", n1}, {"n2", n2}}}, {"epochs", nt - 1},
                             {"spectrum", json_from_py(spectrum)},
                             {"velocity", {{"kind", "constant"}, {"v", {0.0, 0.0}}}},
                             {"method", "spectral3d"}};
            const tfld::ScenarioConfig cfg = tfld::ScenarioConfig::from_json(cfg_json);
            const tfld::FreqGrid3 grid(n1, n2, nt);
            const std::vector<double> S = tfld::discretize_spectrum(cfg.spectrum, grid);
            py::array_t<double> arr({nt, n1, n2});
            std::copy(S.begin(), S.end(), arr.mutable_data());
            return arr;
        },
        py::arg("spectrum"), py::arg("n1"), py::arg("n2"), py::arg("nt"),
        "Space-time spectrum sampled on the DFT grid (time-major).");

    m.def(
        "periodogram3",
        [](const py::array_t<double, py::array::c_style>& frames) {
            const tfld::SpaceTimeField field = field_from_array(frames, 1.0);
            const std::vector<double> P = tfld::periodogram3(field);
            py::array_t<double> arr({static_cast<int>(frames.shape(0)),
                                     static_cast<int>(frames.shape(1)),
                                     static_cast<int>(frames.shape(2))});
            std::copy(P.begin(), P.end(), arr.mutable_data());
            return arr;
        },
        py::arg("frames"), "Squared-modulus 3-D DFT of a (T+1, n1, n2) frame stack.");

    m.def(
        "run_check",
        [](const std::string& name, const py::object& config, int ensemble) {
            const tfld::CheckVerdict v = tfld::run_check(name, config_from_py(config), ensemble);
            return py_from_json(v.to_json());
        },
        py::arg("name"), py::arg("config"), py::arg("ensemble") = 50,
        "Run a verification check (cov-match, taylor, periodogram, path).");

    m.attr("__version__") = "0.1.0";
}
