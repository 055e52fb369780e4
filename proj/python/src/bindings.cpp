#include <sstream>

#include <nlohmann/json.hpp>
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entroframe/bounds.hpp"
#include "entroframe/cli.hpp"
#include "entroframe/entropy.hpp"
#include "entroframe/explorer.hpp"
#include "entroframe/frames.hpp"
#include "entroframe/measure.hpp"
#include "entroframe/pframes.hpp"

namespace py = pybind11;
using namespace entroframe;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Field field_arg(const std::string& s) { return field_from_string(s); }

OptimizerConfig make_cfg(int restarts, int max_iters, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = max_iters;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropic uncertainty bounds for discretized continuous Parseval frames";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<UnsupportedRefinement>(m, "UnsupportedRefinement", PyExc_ValueError);
  py::register_exception<PerturbationRequired>(m, "PerturbationRequired", PyExc_ArithmeticError);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def_static("counting", &DiscreteMeasure::counting, py::arg("n"))
      .def_static("uniform_circle", &DiscreteMeasure::uniform_circle, py::arg("n"), py::arg("offset") = 0.0)
      .def_static("midpoint_interval", &DiscreteMeasure::midpoint_interval, py::arg("lo"), py::arg("hi"), py::arg("n"))
      .def_property_readonly("kind", [](const DiscreteMeasure& d) { return to_string(d.kind()); })
      .def_property_readonly("atoms", &DiscreteMeasure::atoms)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def_property_readonly("total_mass", &DiscreteMeasure::total_mass)
      .def("__len__", &DiscreteMeasure::size)
      .def("to_json", [](const DiscreteMeasure& d) { return to_py(nlohmann::json(d)); });
  m.def("refine", &refine, py::arg("measure"), py::arg("factor"));

  py::class_<FrameFamily>(m, "FrameFamily")
      .def(py::init([](const Matrix& vectors, const DiscreteMeasure& measure, const std::string& field) {
             return FrameFamily(field_arg(field), vectors, std::make_shared<const DiscreteMeasure>(measure));
           }),
           py::arg("vectors"), py::arg("measure"), py::arg("field") = "C")
      .def_property_readonly("dim", &FrameFamily::dim)
      .def_property_readonly("field", [](const FrameFamily& f) { return to_string(f.field()); })
      .def_property_readonly("vectors", &FrameFamily::vectors)
      .def_property_readonly("measure", &FrameFamily::measure)
      .def("__len__", &FrameFamily::size)
      .def("to_json", [](const FrameFamily& f) { return to_py(nlohmann::json(f)); })
      .def_static("from_json", [](const py::object& o) { return frame_from_json(from_py(o)); });

  m.def("make_onb", [](Eigen::Index d, const std::string& field) { return make_onb(d, field_arg(field)); },
        py::arg("d"), py::arg("field") = "C");
  m.def("make_fourier", &make_fourier, py::arg("d"));
  m.def("make_circle_frame", &make_circle_frame, py::arg("n"), py::arg("offset") = 0.0);
  m.def("make_mercedes", &make_mercedes);
  m.def("make_random_parseval",
        [](Eigen::Index d, std::size_t n, std::uint64_t seed, const std::string& field) {
          return make_random_parseval(d, n, seed, field_arg(field));
        },
        py::arg("d"), py::arg("n"), py::arg("seed"), py::arg("field") = "C");
  m.def("refine_frame", &refine_frame, py::arg("frame"), py::arg("factor"));

  m.def("frame_operator", &frame_operator);
  m.def("parseval_defect", &parseval_defect);
  m.def("one_bounded_excess", &one_bounded_excess);
  m.def("coherence", &coherence);
  m.def("analysis", [](const FrameFamily& f, const Vector& h) {
    const auto c = analysis(f, h);
    return py::make_tuple(c.values, c.zero_mask);
  });

  m.def("shannon_entropy", [](const FrameFamily& f, const Vector& h) { return to_py(shannon_entropy(f, h)); });
  m.def("entropy_sum", [](const FrameFamily& f, const FrameFamily& g, const Vector& h) {
    const auto p = entropy_sum(f, g, h);
    return py::make_tuple(to_py(p.first), to_py(p.second), p.sum);
  });

  m.def("buzano_lhs", &buzano_lhs);
  m.def("buzano_rhs", &buzano_rhs);
  m.def("deutsch_upper", &deutsch_upper);
  m.def("deutsch_lower", &deutsch_lower, py::arg("c"));
  m.def("kraus_lower", [](double c) { return to_py(kraus_lower(c)); }, py::arg("c"));
  m.def("verify_sandwich",
        [](const FrameFamily& f, const FrameFamily& g, const Vector& h, double tol) {
          return to_py(verify_sandwich(f, g, h, tol));
        },
        py::arg("f"), py::arg("g"), py::arg("h"), py::arg("tol") = kDefaultVerifyTol);
  m.def("verify_batch",
        [](const FrameFamily& f, const FrameFamily& g, std::size_t n, std::uint64_t seed, double tol) {
          py::gil_scoped_release nogil;
          const auto r = verify_batch(f, g, n, seed, tol);
          py::gil_scoped_acquire gil;
          return to_py(r);
        },
        py::arg("f"), py::arg("g"), py::arg("n_samples"), py::arg("seed") = 0, py::arg("tol") = kDefaultVerifyTol);

  py::class_<PFrameBase>(m, "PFrame")
      .def_property_readonly("p", &PFrameBase::p)
      .def_property_readonly("q", &PFrameBase::q)
      .def_property_readonly("role", [](const PFrameBase& f) { return to_string(f.role()); })
      .def_property_readonly("dim", &PFrameBase::dim)
      .def_property_readonly("elements", &PFrameBase::elements)
      .def_property_readonly("measure", &PFrameBase::measure)
      .def_property_readonly("one_bounded", &PFrameBase::one_bounded)
      .def("__len__", &PFrameBase::size)
      .def("to_json", [](const PFrameBase& f) { return to_py(nlohmann::json(f)); });

  m.def("make_coordinate_pframe",
        [](Eigen::Index d, double p, const std::string& role) -> PFrameBase {
          if (role == "vectors") return make_coordinate_pvectors(d, p);
          return make_coordinate_pframe(d, p);
        },
        py::arg("d"), py::arg("p"), py::arg("role") = "functionals");
  m.def("make_split_coordinate_pframe",
        [](Eigen::Index d, double p, const std::vector<int>& splits, double lambda, const std::string& role) -> PFrameBase {
          if (role == "vectors") return make_split_coordinate_pvectors(d, p, splits, lambda);
          return make_split_coordinate_pframe(d, p, splits, lambda);
        },
        py::arg("d"), py::arg("p"), py::arg("splits"), py::arg("lambda_") = 1.0, py::arg("role") = "functionals");
  m.def("parseval_p_defect", &parseval_p_defect, py::arg("pframe"), py::arg("n_samples") = 1000,
        py::arg("seed") = 0);
  m.def("p_entropy", [](const PFrameBase& f, const Vector& x) {
    if (f.role() == PRole::Vectors) return to_py(p_entropy_dual(as_vectors(f), x));
    return to_py(p_entropy(as_functionals(f), x));
  });
  m.def("coupling_sup",
        [](const PFrameBase& a, const PFrameBase& b, int restarts, std::uint64_t seed) {
          return to_py(coupling_sup(a, b, make_cfg(restarts, 1000, seed)));
        },
        py::arg("a"), py::arg("b"), py::arg("restarts") = 32, py::arg("seed") = 0);

  m.def("entropy_sum_gradient", [](const FrameFamily& f, const FrameFamily& g, const Vector& h) {
    const auto r = entropy_sum_gradient(f, g, h);
    return py::make_tuple(r.value, r.gradient);
  });
  m.def("probe_kraus",
        [](const FrameFamily& f, const FrameFamily& g, int restarts, int max_iters, std::uint64_t seed) {
          const auto cfg = make_cfg(restarts, max_iters, seed);
          py::gil_scoped_release nogil;
          const auto r = probe_kraus(f, g, cfg);
          py::gil_scoped_acquire gil;
          return to_py(r);
        },
        py::arg("f"), py::arg("g"), py::arg("restarts") = 32, py::arg("max_iters") = 1000, py::arg("seed") = 0);

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
