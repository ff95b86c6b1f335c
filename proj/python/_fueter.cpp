#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fueter/cauchy.hpp"
#include "fueter/error.hpp"
#include "fueter/extension.hpp"
#include "fueter/json_io.hpp"
#include "fueter/series.hpp"
#include "fueter/suites.hpp"

namespace py = pybind11;
using namespace fueter;

namespace {

ZooParams params(const Quaternion& center, const Quaternion& value, int index, double p_weight, double q_weight) {
  ZooParams zp;
  zp.center = center;
  zp.value = value;
  zp.index = index;
  zp.p_weight = p_weight;
  zp.q_weight = q_weight;
  return zp;
}

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string check_regular(const QFunction& f, double radius, std::size_t samples, std::uint64_t seed, double tol) {
  const auto pts = sample_region(SampleRegion::ball(radius, f.nvars()), samples, seed);
  const auto r = is_regular(f, pts, tol);
  Json worst = Json::array();
  for (const auto& q : r.worst_point) worst.push_back(to_json(q));
  return Json{{"max_residual", r.max_residual}, {"worst_point", worst}, {"samples", r.samples}, {"passed", r.passed}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_fueter, m) {
  m.doc() = "Quaternionic regular functions: integral formulas, Taylor radii, boundary extension";

  py::register_exception<Error>(m, "FueterError");

  py::class_<Quaternion>(m, "Quaternion")
      .def(py::init<double, double, double, double>(), py::arg("x0") = 0.0, py::arg("x1") = 0.0,
           py::arg("x2") = 0.0, py::arg("x3") = 0.0)
      .def_readwrite("x0", &Quaternion::x0)
      .def_readwrite("x1", &Quaternion::x1)
      .def_readwrite("x2", &Quaternion::x2)
      .def_readwrite("x3", &Quaternion::x3)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self * double())
      .def("conj", [](const Quaternion& q) { return conj(q); })
      .def("norm", [](const Quaternion& q) { return norm(q); })
      .def("inverse", [](const Quaternion& q) { return inverse(q); })
      .def("tolist", [](const Quaternion& q) { return std::vector<double>{q.x0, q.x1, q.x2, q.x3}; })
      .def("__repr__", [](const Quaternion& q) {
        return "Quaternion(" + std::to_string(q.x0) + ", " + std::to_string(q.x1) + ", " + std::to_string(q.x2) +
               ", " + std::to_string(q.x3) + ")";
      });

  py::class_<QFunction>(m, "QFunction")
      .def_property_readonly("nvars", &QFunction::nvars)
      .def_property_readonly("name", &QFunction::name)
      .def_property_readonly("scale", &QFunction::scale)
      .def("__call__", [](const QFunction& f, const std::vector<Quaternion>& x) {
        if (static_cast<int>(x.size()) != f.nvars()) throw Error(ErrorKind::InvalidArgument, "wrong arity");
        return f.evaluate(x);
      });

  m.def(
      "zoo",
      [](const std::string& name, const Quaternion& center, const Quaternion& value, int index, double p_weight,
         double q_weight) { return zoo(name, params(center, value, index, p_weight, q_weight)); },
      py::arg("name"), py::arg("center") = Quaternion{}, py::arg("value") = Quaternion(1.0), py::arg("index") = 1,
      py::arg("p_weight") = 1.0, py::arg("q_weight") = 1.0);
  m.def("zoo_names", &zoo_names);
  m.def("polynomial_from_json", [](const std::string& text) { return QFunction(poly_from_json(Json::parse(text))); });

  m.def("_check_regular", &check_regular, py::arg("f"), py::arg("radius") = 1.0, py::arg("samples") = 1000,
        py::arg("seed") = 1, py::arg("tol") = 1e-6);
  m.def(
      "cf_integral",
      [](const QFunction& f, const Quaternion& p0, int resolution, double radius) {
        return cf_integral(f, sphere_grid(Quaternion{}, radius, resolution), p0);
      },
      py::arg("f"), py::arg("p0"), py::arg("resolution") = 32, py::arg("radius") = 1.0);
  m.def(
      "_taylor",
      [](const QFunction& f, const Quaternion& center, int order) {
        Point base(static_cast<std::size_t>(f.nvars()), Quaternion{});
        base[0] = center;
        auto s = taylor_coeffs(f, base, order);
        if (order >= 8) s.radius_estimate = radius_estimate(s);
        return to_json(s).dump();
      },
      py::arg("f"), py::arg("center") = Quaternion{}, py::arg("order") = 10);
  m.def("kernel_series_partial_sum", &kernel_series_partial_sum, py::arg("p"), py::arg("p0"), py::arg("N"));

  m.def("radius_certificate", &radius_certificate, py::arg("eps"), py::arg("delta"));
  m.def("choose_epsilon", &choose_epsilon, py::arg("delta"), py::arg("margin") = 0.1);
  m.def("epsilon_threshold", &epsilon_threshold, py::arg("delta"), py::arg("margin") = 0.1);
  m.def(
      "_extend",
      [](const QFunction& f, double delta, double kappa, double c, double u_radius, int order, std::uint64_t seed) {
        PipelineOptions opt;
        opt.order = order;
        opt.seed = seed;
        py::gil_scoped_release release;
        return to_json(hanges_treves_pipeline(f, model_domain(kappa, c, u_radius), delta, opt)).dump();
      },
      py::arg("f"), py::arg("delta") = 0.3, py::arg("kappa") = 0.1, py::arg("c") = 1.0, py::arg("u_radius") = 0.7,
      py::arg("order") = 10, py::arg("seed") = 1);
  m.def("extension_truth", &extension_truth, py::arg("name"));
}
