#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "liouville/config.hpp"
#include "liouville/diophantine.hpp"
#include "liouville/ebk.hpp"
#include "liouville/errors.hpp"
#include "liouville/lattice.hpp"
#include "liouville/metric.hpp"
#include "liouville/sturm.hpp"
#include "liouville/weyl.hpp"

namespace py = pybind11;
using namespace liouville;

namespace {

py::int_ to_python(const BigInt& v) { return py::int_(py::str(v.str())); }

py::dict solution_dict(const QuantizationSolution& s) {
  py::dict d;
  d["m1"] = s.m1;
  d["m2"] = s.m2;
  d["lambda"] = s.lambda;
  d["c"] = s.c;
  d["region"] = to_string(s.region);
  d["transition_flag"] = s.transition_flag;
  d["asymptotic_regime"] = s.asymptotic_regime;
  d["pinned"] = s.pinned;
  d["uncertainty"] = s.uncertainty;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the liouville C++ core";

  static py::exception<Error> error(m, "LiouvilleError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = type(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<MetricSpec>(m, "MetricSpec")
      .def_property_readonly("kind", [](const MetricSpec& s) { return to_string(s.kind); })
      .def("dump", &dump_metric)
      .def("__eq__", [](const MetricSpec& a, const MetricSpec& b) { return a == b; });

  py::class_<CriticalConstants>(m, "CriticalConstants")
      .def_readonly("c1", &CriticalConstants::c1)
      .def_readonly("c2", &CriticalConstants::c2)
      .def_readonly("c3", &CriticalConstants::c3)
      .def_readonly("c4", &CriticalConstants::c4);

  m.def("parse_metric", &parse_metric, py::arg("text"));
  m.def("load_metric", &load_metric, py::arg("path"));
  m.def("critical_constants", &critical_constants, py::arg("metric"));
  m.def(
      "validate",
      [](const MetricSpec& s) {
        std::vector<std::pair<bool, std::string>> out;
        for (const auto& c : validate_omega(s).conditions) out.emplace_back(c.passed, c.detail);
        return out;
      },
      py::arg("metric"), "Per-condition (passed, detail) pairs.");

  py::class_<ActionCurve, std::shared_ptr<ActionCurve>>(m, "ActionCurve")
      .def(py::init<MetricSpec>(), py::arg("metric"))
      .def_property_readonly("constants", &ActionCurve::constants)
      .def("F", &ActionCurve::F, py::arg("c"), py::arg("which"))
      .def("dF", &ActionCurve::dF, py::arg("c"), py::arg("which"))
      .def("kappa", &ActionCurve::kappa, py::arg("c"));

  m.def("area_torus", &area_torus, py::arg("metric"));
  m.def("area_action_domain", &area_action_domain, py::arg("curve"));

  m.def(
      "hill_spectrum", [](double mean, int N, int count) { return hill_spectrum(PotentialSpec::constant(mean), N, count).values; },
      py::arg("mean"), py::arg("N"), py::arg("count"), "Spectrum of -d^2/dq^2 + mean on the circle.");
  m.def("direct_spectrum", &direct_2d_spectrum, py::arg("metric"), py::arg("count"), py::arg("N") = 64);
  m.def("counting_function", &counting_function, py::arg("spectrum"), py::arg("lam"));

  m.def(
      "ebk_spectrum",
      [](const ActionCurve& ac, double lambda_max) {
        py::list out;
        for (const auto& s : ebk_spectrum(ac, lambda_max).solutions) out.append(solution_dict(s));
        return out;
      },
      py::arg("curve"), py::arg("lambda_max"));

  m.def(
      "count_disk", [](double r, double ax, double ay) { return count_exact(StarDomain::disk(), {ax, ay}, r).weighted(); },
      py::arg("r"), py::arg("ax") = 0.0, py::arg("ay") = 0.0);
  m.def(
      "count_quarter_disk",
      [](double r, double ax, double ay) { return count_exact(StarDomain::quarter_disk(), {ax, ay}, r).weighted(); },
      py::arg("r"), py::arg("ax") = 0.0, py::arg("ay") = 0.0);

  m.def(
      "remainder_series",
      [](const std::string& source, const MetricSpec& s, const std::vector<double>& lambdas) {
        const auto series = remainder_series(parse_source(source), s, lambdas);
        py::dict d;
        py::list rows;
        for (const auto& p : series.samples) rows.append(py::make_tuple(p.lambda, p.N, p.N_min, p.N_max, p.R));
        d["samples"] = rows;
        d["fitted"] = series.fitted;
        d["exponent"] = series.exponent;
        return d;
      },
      py::arg("source"), py::arg("metric"), py::arg("lambdas"));

  m.def(
      "continued_fraction",
      [](double alpha, int depth) {
        py::list out;
        for (const auto& a : continued_fraction(alpha, depth).partial_quotients) out.append(to_python(a));
        return out;
      },
      py::arg("alpha"), py::arg("depth"));
  m.def(
      "typicality_test",
      [](double alpha, double tau, std::int64_t kmax) {
        const auto r = typicality_test(alpha, tau, kmax);
        py::dict d;
        d["delta_est"] = r.delta_est;
        d["worst_k"] = r.worst_pair.second;
        d["passed"] = r.passed;
        return d;
      },
      py::arg("alpha"), py::arg("tau"), py::arg("kmax"));
  m.def(
      "nondegeneracy_passed", [](const MetricSpec& s) { return nondegeneracy_report(s).passed(); }, py::arg("metric"));
}
