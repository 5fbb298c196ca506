#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "inflation/analytic.hpp"
#include "inflation/applications.hpp"
#include "inflation/density.hpp"
#include "inflation/errors.hpp"
#include "inflation/matrix.hpp"
#include "inflation/pdmp.hpp"
#include "inflation/switched.hpp"

namespace py = pybind11;
using namespace inflation;

namespace {

py::dict report_dict(const GrowthReport& r)
{
    py::dict d;
    d["value"] = r.value;
    d["method"] = std::string(to_string(r.method));
    d["stderr"] = r.std_error ? py::cast(*r.std_error) : py::none();
    d["horizon"] = r.horizon;
    d["samples"] = r.samples;
    d["seed"] = r.seed ? py::cast(*r.seed) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Growth exponents of two-patch populations in switching environments";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    auto numerical = py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
    py::register_exception<NoRoot>(m, "NoRoot", numerical.ptr());

    m.def("v_star", &v_star, py::arg("m"));
    m.def("a_plus", &a_plus, py::arg("epsilon"), py::arg("m"));
    m.def("critical_migration", &critical_migration, py::arg("epsilon"));
    m.def("no_inflation_T_bound", &no_inflation_T_bound, py::arg("epsilon"));
    m.def("p_plus", &p_plus, py::arg("m"), py::arg("T"));
    m.def("delta_closed", &delta_closed, py::arg("epsilon"), py::arg("m"), py::arg("T"));
    m.def("delta_spectral", &delta_spectral, py::arg("epsilon"), py::arg("m"), py::arg("T"));
    m.def(
        "delta_quadrature",
        [](double eps, double mm, double T, std::size_t nodes) { return delta_quadrature(eps, mm, T, nodes).value; },
        py::arg("epsilon"), py::arg("m"), py::arg("T"), py::arg("nodes") = 64);
    m.def("delta_limit_T_inf", &delta_limit_T_inf, py::arg("epsilon"), py::arg("m"));
    m.def("threshold_T_star", &threshold_T_star, py::arg("epsilon"), py::arg("m"), py::arg("T_max") = 1e9);
    m.def(
        "threshold_m_star", [](double eps, double T) { return threshold_m_star(eps, T).m_star; },
        py::arg("epsilon"), py::arg("T"));
    m.def("flow_exact", &flow_exact, py::arg("v0"), py::arg("sign"), py::arg("m"), py::arg("t"));
    m.def(
        "periodic_orbit",
        [](double mm, double T) {
            const auto o = periodic_orbit(mm, T);
            return py::make_tuple(o.p_minus, o.p_plus);
        },
        py::arg("m"), py::arg("T"), "(P-, P+) of the periodic V-orbit");
    m.def(
        "period_map",
        [](double eps, double mm, double T) {
            const Mat2 a = period_map(eps, mm, T).matrix;
            return py::make_tuple(py::make_tuple(a.a11, a.a12), py::make_tuple(a.a21, a.a22));
        },
        py::arg("epsilon"), py::arg("m"), py::arg("T"));

    py::class_<InvariantDensity>(m, "InvariantDensity")
        .def(py::init<double, double>(), py::arg("m"), py::arg("T"))
        .def_property_readonly("v_plus", &InvariantDensity::v_plus)
        .def_property_readonly("exponent", &InvariantDensity::exponent)
        .def_property_readonly("bounded_at_endpoints", &InvariantDensity::bounded_at_endpoints)
        .def("rho", &InvariantDensity::rho, py::arg("v"))
        .def("rho_plus", &InvariantDensity::rho_plus, py::arg("v"))
        .def("rho_minus", &InvariantDensity::rho_minus, py::arg("v"))
        .def("mass", &InvariantDensity::mass, py::arg("lo"), py::arg("hi"))
        .def("__call__", &InvariantDensity::rho, py::arg("v"))
        .def("to_csv", [](const InvariantDensity& d, std::size_t n) {
            std::ostringstream os;
            d.write_csv(os, n);
            return os.str();
        }, py::arg("points") = 2001);

    m.def(
        "delta_pdmp_quadrature", [](double eps, double mm, double T) { return delta_pdmp_quadrature(eps, mm, T).value; },
        py::arg("epsilon"), py::arg("m"), py::arg("T"));
    m.def(
        "simulate_pdmp",
        [](double eps, double mm, double rate, double horizon, std::uint64_t seed, std::uint64_t stream) {
            PdmpOptions o;
            o.stream = stream;
            GrowthReport r;
            {
                py::gil_scoped_release release;
                r = simulate_pdmp(eps, mm, rate, horizon, seed, o).report;
            }
            return report_dict(r);
        },
        py::arg("epsilon"), py::arg("m"), py::arg("rate"), py::arg("horizon"), py::arg("seed"),
        py::arg("stream") = 0);
    m.def(
        "lyapunov_polar",
        [](double eps, double mm, double rate, double horizon, std::uint64_t seed) {
            GrowthReport r;
            {
                py::gil_scoped_release release;
                r = lyapunov_polar(eps, mm, rate, horizon, seed);
            }
            return report_dict(r);
        },
        py::arg("epsilon"), py::arg("m"), py::arg("rate"), py::arg("horizon"), py::arg("seed"));
    m.def(
        "simulate_sape",
        [](double eps, double mm, double T, double eta, double horizon, std::uint64_t seed) {
            GrowthReport r;
            {
                py::gil_scoped_release release;
                r = simulate_sape(eps, mm, T, eta, horizon, seed);
            }
            return report_dict(r);
        },
        py::arg("epsilon"), py::arg("m"), py::arg("T"), py::arg("eta"), py::arg("horizon"), py::arg("seed"));

    m.def(
        "predict_persistence",
        [](double eps, double mm, double T, bool markov) {
            return std::string(
                to_string(predict_persistence(eps, mm, T, markov ? SwitchingMode::Markov : SwitchingMode::Periodic)));
        },
        py::arg("epsilon"), py::arg("m"), py::arg("T"), py::arg("markov") = false);
    m.def(
        "holt_linear_growth", [](double mm) { return holt_linear_growth(HoltParams{}, mm); }, py::arg("m"),
        "growth per day of the linearized SIR model with default rates");
    m.def(
        "cumulative_cases",
        [](const std::vector<double>& ms, double horizon) {
            std::vector<double> out;
            for (const auto& r : cumulative_cases_sweep(HoltParams{}, ms, horizon)) out.push_back(r.cumulative_cases);
            return out;
        },
        py::arg("m"), py::arg("horizon_days") = 1500.0);
}
