#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsac/diagnostics.hpp"
#include "nsac/io.hpp"
#include "nsac/stepper.hpp"

namespace py = pybind11;
using namespace nsac;

namespace {

py::array_t<double> field_array(const ScalarField& f) {
    py::array_t<double> out({f.grid.ny, f.grid.nx});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

py::array_t<double> records_array(const std::vector<DiagRecord>& recs) {
    const size_t ncol = 19;
    py::array_t<double> out({recs.size(), ncol});
    double* p = out.mutable_data();
    for (const auto& r : recs) {
        const double row[ncol] = {r.t, r.E0, r.visc_diss, r.chem_diss, r.mass_rho,
                                  r.mass_rhochi, r.int_m_mu, r.rho_min, r.rho_max,
                                  r.chi_min, r.chi_max, r.div_inf, r.u_l2sq,
                                  r.gradchi_l2sq, r.chi2m1_l2sq, r.Ecal, r.Dcal,
                                  r.Acal, r.H_higher};
        p = std::copy(row, row + ncol, p);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(nsacpy, m) {
    m.doc() = "two-phase incompressible flow solver bindings";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<CflError>(m, "CflError", PyExc_RuntimeError);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_readwrite("nx", &Config::nx)
        .def_readwrite("ny", &Config::ny)
        .def_readwrite("lx", &Config::lx)
        .def_readwrite("ly", &Config::ly)
        .def_readwrite("eta_star", &Config::eta_star)
        .def_readwrite("eta_upper", &Config::eta_upper)
        .def_readwrite("m_star", &Config::m_star)
        .def_readwrite("m_upper", &Config::m_upper)
        .def_readwrite("rho_init", &Config::rho_init)
        .def_readwrite("chi_init", &Config::chi_init)
        .def_readwrite("u_init", &Config::u_init)
        .def_readwrite("t_end", &Config::t_end)
        .def_readwrite("cfl", &Config::cfl)
        .def_readwrite("dt_max", &Config::dt_max)
        .def_readwrite("cg_tol", &Config::cg_tol)
        .def_readwrite("diag_every", &Config::diag_every)
        .def_property(
            "bc", [](const Config& c) { return c.bc == Bc::PeriodicTorus ? "torus" : "box"; },
            [](Config& c, const std::string& s) {
                if (s == "torus") c.bc = Bc::PeriodicTorus;
                else if (s == "box") c.bc = Bc::NoSlipBox;
                else throw ConfigError("bc must be 'torus' or 'box'");
            });

    py::class_<State>(m, "State")
        .def_property_readonly("t", [](const State& s) { return s.t; })
        .def_property_readonly("rho", [](const State& s) { return field_array(s.rho); })
        .def_property_readonly("chi", [](const State& s) { return field_array(s.chi); })
        .def_property_readonly("p", [](const State& s) { return field_array(s.p); })
        .def_property_readonly("mu", [](const State& s) { return field_array(s.mu); });

    m.def("parse_config", &parse_config);
    m.def("parse_config_file", &parse_config_file);
    m.def("serialize_config", &serialize_config);
    m.def("initial_state", &initial_state);
    m.def("csv_header", [] { return std::string(kCsvHeader); });
    m.def("energy", [](const State& s, const Config& c) { return energy_E0(s, c.laws()); });

    m.def("run", [](const Config& cfg) {
        RunResult rr = run_simulation(cfg);
        py::dict out;
        out["records"] = records_array(rr.records);
        out["columns"] = std::string(kCsvHeader);
        out["final"] = rr.final_state;
        out["steps"] = rr.steps;
        return out;
    });

    m.def("decay_fit", [](const std::vector<double>& t, const std::vector<double>& v,
                          double lo, double hi) {
        DecayFit f = decay_fit(t, v, lo, hi);
        return py::make_tuple(f.sigma, f.r_squared, f.degenerate);
    });

    m.def("distance", [](const State& a, const State& b) { return ws_distance(a, b).value; });
}
