#include "kssim/constants.hpp"
#include "kssim/errors.hpp"
#include "kssim/harness.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kssim;

namespace {

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg = config_from_document(ConfigDocument::parse_string(text));
    cfg.validate();
    return cfg;
}

py::array_t<double> to_array(const Field& f) {
    const Grid& g = f.grid();
    std::vector<py::ssize_t> shape;
    if (g.dim == 1) {
        shape = {g.cells[0]};
    } else {
        shape = {g.cells[1], g.cells[0]};
    }
    py::array_t<double> out(shape);
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

Grid grid_for(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
              const std::vector<double>& extent) {
    if (a.ndim() == 1 && extent.size() == 1) return Grid::line(extent[0], int(a.shape(0)));
    if (a.ndim() == 2 && extent.size() == 2) return Grid::rect(extent[0], extent[1], int(a.shape(1)), int(a.shape(0)));
    throw InputError("array rank and extent length must agree (1 or 2)");
}

py::dict trajectory_columns(const std::vector<DiagnosticsRecord>& traj) {
    const std::size_t n = traj.size();
    auto column = [&](auto get) {
        py::array_t<double> a{py::ssize_t(n)};
        double* p = a.mutable_data();
        for (std::size_t i = 0; i < n; ++i) p[i] = get(traj[i]);
        return a;
    };
    py::dict d;
    d["t"] = column([](const auto& r) { return r.t; });
    d["mass"] = column([](const auto& r) { return r.mass; });
    d["u_max"] = column([](const auto& r) { return r.u_max; });
    d["u_min"] = column([](const auto& r) { return r.u_min; });
    d["v_max"] = column([](const auto& r) { return r.v_max; });
    d["entropy"] = column([](const auto& r) { return r.entropy; });
    d["dirichlet"] = column([](const auto& r) { return r.dirichlet; });
    d["uf_int"] = column([](const auto& r) { return r.uf_int; });
    d["ki_residual"] = column([](const auto& r) { return r.ki_residual.value_or(std::nan("")); });
    d["dt"] = column([](const auto& r) { return r.dt; });
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-difference chemotaxis simulator with signal-dependent motility.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<BranchError>(m, "BranchError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<StepError>(m, "StepError", PyExc_RuntimeError);
    py::register_exception<RunFailure>(m, "RunFailure", PyExc_RuntimeError);

    m.def("presets", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& n : preset_names()) out.emplace_back(n, preset_description(n));
        return out;
    });

    m.def("preset_config", [](const std::string& name) { return config_to_string(preset(name)); }, py::arg("name"),
          "The preset as config text.");

    m.def("normalize_config", [](const std::string& text) { return config_to_string(parse_config(text)); },
          py::arg("text"), "Parses, validates and echoes a config.");

    m.def(
        "constants", [](const std::string& text) { return to_python(cmd_constants(parse_config(text)).to_json()); },
        py::arg("config"), "Assumption flags and constructive constants as a dict.");

    m.def(
        "run",
        [](const std::string& text, const std::string& out_dir) {
            const RunConfig cfg = parse_config(text);
            RunReport rep;
            {
                py::gil_scoped_release release;
                rep = cmd_run(cfg, out_dir);
            }
            py::dict d;
            d["summary"] = to_python(rep.summary());
            d["trajectory"] = trajectory_columns(rep.result.trajectory);
            d["u"] = to_array(rep.result.final_state.u);
            d["v"] = to_array(rep.result.final_state.v);
            return d;
        },
        py::arg("config"), py::arg("out_dir") = "", "Runs one simulation; returns summary, trajectory and final fields.");

    m.def(
        "sweep",
        [](const std::string& text, const std::string& out_dir, int threads) {
            const RunConfig cfg = parse_config(text);
            SweepReport rep;
            {
                py::gil_scoped_release release;
                rep = cmd_sweep(cfg, out_dir, threads);
            }
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["index"] = r.index;
                py::dict axes;
                for (std::size_t k = 0; k < rep.axes.size(); ++k) axes[py::str(rep.axes[k])] = r.axis_values[k];
                d["axes"] = axes;
                d["ok"] = r.ok;
                d["error"] = r.error;
                d["classification"] = to_string(r.classification);
                d["termination"] = r.termination;
                d["peak_u_max"] = r.peak_u_max;
                d["peak_v_max"] = r.peak_v_max;
                d["v_bound_margin"] = r.v_margin ? py::object(py::float_(*r.v_margin)) : py::object(py::none());
                d["u_bound_margin"] = r.u_margin ? py::object(py::float_(*r.u_margin)) : py::object(py::none());
                rows.append(d);
            }
            return rows;
        },
        py::arg("config"), py::arg("out_dir") = "", py::arg("threads") = 1);

    m.def(
        "beta1", [](double lambda, double alpha, double mu) { return compute_beta1(SourceSpec::log_power(lambda, alpha, mu)); },
        py::arg("lam") = 1.0, py::arg("alpha") = 1.0, py::arg("mu") = 0.0,
        "sup over s >= 0 of s - s f(s) for f(s) = lam log^alpha(1+s) - mu.");

    m.def(
        "helmholtz_solve",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> rhs, std::vector<double> extent) {
            const Grid g = grid_for(rhs, extent);
            Field f(g, std::vector<double>(rhs.data(), rhs.data() + rhs.size()));
            return to_array(helmholtz_solve(g, f));
        },
        py::arg("rhs"), py::arg("extent"), "Solves z - Δz = rhs with Neumann boundaries on a cell-centered grid.");

    m.def(
        "laplacian",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x, std::vector<double> extent) {
            const Grid g = grid_for(x, extent);
            return to_array(laplacian_neumann(Field(g, std::vector<double>(x.data(), x.data() + x.size()))));
        },
        py::arg("x"), py::arg("extent"));
}
