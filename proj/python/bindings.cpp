#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "instab/contfrac.hpp"
#include "instab/dispersion.hpp"
#include "instab/eigensystem.hpp"
#include "instab/error.hpp"
#include "instab/lattice.hpp"
#include "instab/models.hpp"
#include "instab/spectral.hpp"

namespace py = pybind11;
using namespace instab;

namespace {

LatticeVector vec(const std::pair<std::int64_t, std::int64_t>& v) { return {v.first, v.second}; }
std::pair<std::int64_t, std::int64_t> tup(LatticeVector v) { return {v.x, v.y}; }

FlowParams params(const std::string& model, std::pair<std::int64_t, std::int64_t> p,
                  std::pair<std::int64_t, std::int64_t> q, double nu, std::optional<double> alpha) {
  return make_flow_params(parse_model(model), vec(p), vec(q), nu, alpha);
}

}  // namespace

PYBIND11_MODULE(_instab, m) {
  m.doc() = "Continued-fraction instability solver for unidirectional flows";

  static py::exception<Error> error_type(m, "InstabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      const py::object cls = py::reinterpret_borrow<py::object>(error_type.ptr());
      py::object exc = cls(std::string(to_string(e.code())) + ": " + e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("classify", [](std::pair<std::int64_t, std::int64_t> q, std::pair<std::int64_t, std::int64_t> p) {
    return std::string(to_string(classify(vec(q), vec(p))));
  }, py::arg("q"), py::arg("p"));

  m.def("canonical_rep", [](std::pair<std::int64_t, std::int64_t> q, std::pair<std::int64_t, std::int64_t> p) {
    const OrbitRep r = canonical_rep(vec(q), vec(p));
    return py::make_tuple(tup(r.rep), r.shift);
  }, py::arg("q"), py::arg("p"));

  m.def("enumerate_classes", [](std::pair<std::int64_t, std::int64_t> p, double radius) {
    py::list out;
    for (const auto& [r, c] : enumerate_classes(vec(p), radius))
      out.append(py::make_tuple(tup(r.rep), std::string(to_string(c))));
    return out;
  }, py::arg("p"), py::arg("radius"));

  py::class_<FlowParams>(m, "FlowParams")
      .def(py::init(&params), py::arg("model"), py::arg("p"), py::arg("q"), py::arg("nu"),
           py::arg("alpha") = py::none())
      .def_property_readonly("model", [](const FlowParams& f) { return std::string(to_string(f.model)); })
      .def_property_readonly("p", [](const FlowParams& f) { return tup(f.p); })
      .def_property_readonly("q", [](const FlowParams& f) { return tup(f.q); })
      .def_readonly("nu", &FlowParams::nu)
      .def_readonly("alpha", &FlowParams::alpha)
      .def_property_readonly("point_class", [](const FlowParams& f) { return std::string(to_string(f.point_class)); })
      .def("rho", [](const FlowParams& f, std::int64_t n) { return rho(n, f); }, py::arg("n"))
      .def("coeff", [](const FlowParams& f, std::int64_t n, double lam) { return recurrence_coeff(n, lam, f); },
           py::arg("n"), py::arg("lam"));

  m.def("eval_trunc", [](const std::vector<double>& a) { return eval_trunc(a); }, py::arg("coeffs"));

  py::class_<RootResult>(m, "RootResult")
      .def_readonly("found", &RootResult::found)
      .def_readonly("lam", &RootResult::lambda)
      .def_readonly("bracket_lo", &RootResult::bracket_lo)
      .def_readonly("bracket_hi", &RootResult::bracket_hi)
      .def_readonly("dispersion_residual", &RootResult::dispersion_residual)
      .def_readonly("cf_depth", &RootResult::cf_depth)
      .def_readonly("diagnostic", &RootResult::diagnostic);

  m.def("dispersion", [](const FlowParams& f, double lam, double tol, std::optional<std::int64_t> depth) {
    return value(lam, make_dispersion_spec(f, depth), tol);
  }, py::arg("params"), py::arg("lam"), py::arg("tol") = 1e-12, py::arg("depth") = py::none());

  m.def("find_root", [](const FlowParams& f, double tol, std::optional<std::int64_t> depth) {
    return find_root(make_dispersion_spec(f, depth), tol);
  }, py::arg("params"), py::arg("tol") = 1e-10, py::arg("depth") = py::none());

  m.def("nu0_estimate", [](const FlowParams& f, double tol) { return nu0_estimate(f, tol); },
        py::arg("params"), py::arg("tol") = 1e-8);

  py::class_<EigenvectorResult>(m, "EigenvectorResult")
      .def_readonly("lam", &EigenvectorResult::lambda)
      .def_readonly("window", &EigenvectorResult::window)
      .def_readonly("w", &EigenvectorResult::w)
      .def_readonly("residual", &EigenvectorResult::residual)
      .def_readonly("decay_rate", &EigenvectorResult::decay_rate)
      .def_readonly("decay_r_squared", &EigenvectorResult::decay_r_squared)
      .def_readonly("sign_ok", &EigenvectorResult::sign_ok);

  m.def("build_w", [](const FlowParams& f, double lam, std::int64_t window, double root_tol) {
    EigenOptions eo;
    eo.root_tol = root_tol;
    return build_w(lam, f, window, eo);
  }, py::arg("params"), py::arg("lam"), py::arg("window") = 128, py::arg("root_tol") = 1e-10);

  m.def("max_real_eig", [](const FlowParams& f, std::int64_t window) { return max_real_eig(f, window); },
        py::arg("params"), py::arg("window") = 128);
  m.def("det_I_plus_K", [](const FlowParams& f, double lam, std::int64_t window) {
    return det_I_plus_K(lam, f, window).value;
  }, py::arg("params"), py::arg("lam"), py::arg("window") = 128);
  m.def("det_root", [](const FlowParams& f, double lo, double hi, std::int64_t window, double tol) {
    return det_root(f, window, {lo, hi}, tol);
  }, py::arg("params"), py::arg("lo"), py::arg("hi"), py::arg("window") = 128, py::arg("tol") = 1e-13);
  m.def("growth_rate", [](const FlowParams& f, std::int64_t window, double t_final, std::optional<double> dt,
                          std::uint64_t seed) {
    const double step = dt ? *dt : max_stable_dt(build_L(f, window));
    GrowthOptions go;
    go.seed = seed;
    return growth_rate(f, window, t_final, step, go);
  }, py::arg("params"), py::arg("window") = 32, py::arg("t_final") = 60.0, py::arg("dt") = py::none(),
        py::arg("seed") = 12345);
}
