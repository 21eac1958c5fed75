#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ifp/checks.hpp"
#include "ifp/consumption.hpp"
#include "ifp/depletion.hpp"
#include "ifp/errors.hpp"
#include "ifp/lambert_w.hpp"
#include "ifp/model.hpp"
#include "ifp/validation.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form consumption functions for the deterministic income-fluctuation problem";

  py::register_exception<ifp::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ifp::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ifp::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ifp::ModelParams>(m, "ModelParams")
      .def(py::init([](double rho, double r, double gamma, double y) { return ifp::ModelParams{rho, r, gamma, y}; }),
           py::arg("rho"), py::arg("r"), py::arg("gamma"), py::arg("y"))
      .def_readwrite("rho", &ifp::ModelParams::rho)
      .def_readwrite("r", &ifp::ModelParams::r)
      .def_readwrite("gamma", &ifp::ModelParams::gamma)
      .def_readwrite("y", &ifp::ModelParams::y)
      .def("__repr__", [](const ifp::ModelParams& p) {
        return "ModelParams(rho=" + py::repr(py::float_(p.rho)).cast<std::string>() +
               ", r=" + py::repr(py::float_(p.r)).cast<std::string>() +
               ", gamma=" + py::repr(py::float_(p.gamma)).cast<std::string>() +
               ", y=" + py::repr(py::float_(p.y)).cast<std::string>() + ")";
      });
  m.attr("FIGURE_PARAMS") = ifp::kFigureParams;

  m.def("validate", &ifp::validate, py::arg("params"));
  m.def("crra_utility", &ifp::crra_utility, py::arg("c"), py::arg("gamma"));
  m.def("value_upper_bound", &ifp::value_upper_bound, py::arg("params"), py::arg("a"));

  m.def("lambert_wm1", &ifp::lambert_wm1<double>, py::arg("x"));
  m.def("lambert_w0", &ifp::lambert_w0<double>, py::arg("x"));

  m.def("mu", &ifp::mu, py::arg("params"), py::arg("T"));
  m.def("mu_prime", &ifp::mu_prime, py::arg("params"), py::arg("T"));
  m.def("h_numeric", [](const ifp::ModelParams& p, double a) { return ifp::h_numeric(p, a).T; },
        py::arg("params"), py::arg("a"));
  m.def("h_closed_r0", [](const ifp::ModelParams& p, double a) { return ifp::h_closed_r0(p, a).T; },
        py::arg("params"), py::arg("a"));
  m.def("h_approx_small_r", [](const ifp::ModelParams& p, double a) { return ifp::h_approx_small_r(p, a).T; },
        py::arg("params"), py::arg("a"));
  m.def(
      "mu_discrete",
      [](const ifp::ModelParams& p, double delta, int n_knots, bool budget_consistent) {
        const auto rule = budget_consistent ? ifp::KnotRule::budget_consistent : ifp::KnotRule::implicit_sequence;
        const ifp::KnotSequence seq = ifp::mu_discrete(p, delta, n_knots, rule);
        std::vector<double> out;
        for (const auto& k : seq.knots()) out.push_back(k.mu);
        return out;
      },
      py::arg("params"), py::arg("delta"), py::arg("n_knots"), py::arg("budget_consistent") = false);

  m.def("consumption_path", &ifp::consumption_path, py::arg("params"), py::arg("a"), py::arg("t") = 0.0);
  m.def("consumption_now_r0", &ifp::consumption_now_r0, py::arg("params"), py::arg("a"));
  m.def("consumption_approx_small_r", &ifp::consumption_approx_small_r, py::arg("params"), py::arg("a"),
        py::arg("t") = 0.0);
  m.def("consumption_unconstrained", &ifp::consumption_unconstrained, py::arg("params"), py::arg("a"));
  m.def(
      "jacobian_closed",
      [](const ifp::ModelParams& p, double a) {
        const auto j = ifp::jacobian_closed(p, a);
        return py::make_tuple(j.dc_da, j.dc_dy);
      },
      py::arg("params"), py::arg("a"));
  m.def(
      "hessian_closed",
      [](const ifp::ModelParams& p, double a) {
        const auto h = ifp::hessian_closed(p, a);
        return py::make_tuple(h.d2c_da2, h.d2c_dady, h.d2c_dy2);
      },
      py::arg("params"), py::arg("a"));

  py::class_<ifp::PiecewiseLinearPolicy>(m, "PiecewiseLinearPolicy")
      .def("__call__", &ifp::PiecewiseLinearPolicy::operator(), py::arg("a"))
      .def_property_readonly("a_max", &ifp::PiecewiseLinearPolicy::a_max)
      .def_property_readonly("delta", &ifp::PiecewiseLinearPolicy::delta)
      .def_property_readonly("knot_assets",
                             [](const ifp::PiecewiseLinearPolicy& p) {
                               std::vector<double> out;
                               for (const auto& k : p.knots()) out.push_back(k.mu);
                               return out;
                             })
      .def_property_readonly("knot_consumption", [](const ifp::PiecewiseLinearPolicy& p) {
        std::vector<double> out;
        for (const auto& k : p.knots()) out.push_back(k.consumption);
        return out;
      });
  m.def(
      "discrete_policy",
      [](const ifp::ModelParams& p, double delta, double a_max, bool budget_consistent) {
        const auto rule = budget_consistent ? ifp::KnotRule::budget_consistent : ifp::KnotRule::implicit_sequence;
        return ifp::discrete_policy(p, delta, a_max, rule);
      },
      py::arg("params"), py::arg("delta"), py::arg("a_max"), py::arg("budget_consistent") = true);

  m.def("pdv_utility", [](const ifp::ModelParams& p, double a0) { return ifp::pdv_utility(p, a0); },
        py::arg("params"), py::arg("a0"));
  m.def(
      "approximation_error_report",
      [](const ifp::ModelParams& p, const std::vector<double>& r_list, const std::vector<double>& a_grid) {
        py::list rows;
        for (const auto& row : ifp::approximation_error_report(p, r_list, a_grid)) {
          py::dict d;
          d["r"] = row.r;
          d["max_rel_gap"] = row.max_rel_gap;
          d["mean_rel_gap"] = row.mean_rel_gap;
          d["a_at_max"] = row.a_at_max;
          rows.append(d);
        }
        return rows;
      },
      py::arg("params"), py::arg("r_list"), py::arg("a_grid"));

  m.def(
      "run_checks",
      [](const ifp::ModelParams& p, bool full) {
        ifp::checks::Options options;
        options.level = full ? ifp::checks::Level::full : ifp::checks::Level::quick;
        py::list out;
        for (const auto& r : ifp::checks::run_all(p, options)) {
          out.append(py::make_tuple(r.criterion, r.name, r.measured, r.tolerance, r.passed));
        }
        return out;
      },
      py::arg("params") = ifp::kFigureParams, py::arg("full") = false,
      "Runs the verification suites; returns (criterion, name, measured, tolerance, passed) tuples.");
}
