#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arakelov/bundles.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/io.hpp"
#include "arakelov/size.hpp"
#include "arakelov/zeta.hpp"

namespace py = pybind11;
using namespace arakelov;

namespace {

py::object to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

// Round-trips through the json module; descriptors are small.
nlohmann::json from_py(const py::object& o) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return nlohmann::json::parse(dumps(o).cast<std::string>());
}

ThetaOptions theta_opts(double tol, std::uint64_t budget) { return {tol, budget, false}; }

py::dict theta_dict(const ThetaResult& t) { return to_py(theta_json(t)).cast<py::dict>(); }

// FieldPtr points at a const field, which pybind11 cannot hold directly.
struct Field {
  FieldPtr ptr;
};

ArakelovDivisor divisor_of(const FieldPtr& f, std::vector<double> x, const std::optional<std::string>& ideal) {
  return make_divisor(ideal ? parse_ideal(f, *ideal) : FractionalIdeal::ring_of_integers(f), std::move(x));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  auto base = py::register_exception<Error>(m, "ArakelovError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError", base.ptr());
  m.attr("__version__") = kCodeVersion;
  m.attr("DEFAULT_BUDGET") = kDefaultBudget;

  py::class_<Field>(m, "Field")
      .def_property_readonly("name", [](const Field& f) { return f.ptr->name(); })
      .def_property_readonly("degree", [](const Field& f) { return f.ptr->degree(); })
      .def_property_readonly("r1", [](const Field& f) { return f.ptr->r1(); })
      .def_property_readonly("r2", [](const Field& f) { return f.ptr->r2(); })
      .def_property_readonly("regulator", [](const Field& f) { return f.ptr->regulator(); })
      .def_property_readonly("class_number", [](const Field& f) { return f.ptr->class_number(); })
      .def("info", [](const Field& f) { return to_py(f.ptr->info()); })
      .def("__repr__", [](const Field& f) { return "<Field " + f.ptr->name() + ">"; });

  m.def("field", [](const std::string& name) { return Field{field_from_name(name)}; }, py::arg("name"),
        "\"Q\" or a squarefree integer m for Q(sqrt m).");
  m.def("field_from_descriptor", [](const py::object& d) { return Field{field_from_descriptor(from_py(d))}; });

  py::class_<ArakelovDivisor>(m, "Divisor")
      .def(py::init([](const Field& f, std::vector<double> x, const std::optional<std::string>& ideal) {
             return divisor_of(f.ptr, std::move(x), ideal);
           }), py::arg("field"), py::arg("x"), py::arg("ideal") = std::nullopt)
      .def_readonly("x", &ArakelovDivisor::x)
      .def_property_readonly("field", [](const ArakelovDivisor& d) { return Field{d.field()}; })
      .def_property_readonly("degree", [](const ArakelovDivisor& d) { return degree(d); })
      .def_property_readonly("chi", [](const ArakelovDivisor& d) { return chi(d); })
      .def("dual", &dual_divisor)
      .def("to_dict", [](const ArakelovDivisor& d) { return to_py(divisor_json(d)); });

  m.def("pic_point", [](const Field& f, double d, double x) { return pic_point(f.ptr, d, x); }, py::arg("field"), py::arg("d"), py::arg("x") = 0.0);
  m.def("pic_family_point", [](const Field& f, int cls, double d, double x) { return pic_family_point(f.ptr, cls, d, x); }, py::arg("field"), py::arg("cls"), py::arg("d"), py::arg("x"));

  m.def("h0", [](const ArakelovDivisor& d, double tol, std::uint64_t budget) { return theta_dict(h0(d, theta_opts(tol, budget)).theta); },
        py::arg("divisor"), py::arg("tol") = 1e-10, py::arg("budget") = kDefaultBudget);
  m.def("rr_defect", [](const ArakelovDivisor& d, double tol) { return rr_defect(d, theta_opts(tol, kDefaultBudget)); },
        py::arg("divisor"), py::arg("tol") = 1e-10);
  m.def("b0", [](const Field& f, double d, double x) { return b0(f.ptr, d, x); }, py::arg("field"), py::arg("d"), py::arg("x"));
  m.def("eta", [](const Field& f) {
    const auto r = eta_invariant(f.ptr);
    py::dict out;
    out["eta"] = r.eta;
    out["closed_form"] = r.closed_form_value;
    out["abs_error"] = r.abs_error;
    return out;
  });
  m.def("argmax", [](const Field& f, int grid) {
    const auto a = pic0_argmax(f.ptr, {}, grid);
    py::dict out;
    out["x_star"] = a.x_star;
    out["class_star"] = a.class_star;
    out["h0_star"] = a.h0_star;
    out["h0_at_zero"] = a.h0_at_zero;
    out["zero_dominates_grid"] = a.zero_dominates_grid;
    return out;
  }, py::arg("field"), py::arg("grid") = 2048);

  m.def("completed_zeta", [](const Field& f, std::complex<double> s, double tol) {
    const auto z = completed_zeta(f.ptr, s, tol);
    py::dict out;
    out["value"] = z.value;
    out["dirichlet"] = z.dirichlet;
    out["gamma_factor"] = z.gamma_factor;
    out["truncation_N"] = z.truncation_N;
    out["series_tail_bound"] = z.series_tail_bound;
    return out;
  }, py::arg("field"), py::arg("s"), py::arg("tol") = 1e-10);
  m.def("zeta_via_pic_integral", [](const Field& f, double s) { return zeta_via_pic_integral(f.ptr, s).value; },
        py::arg("field"), py::arg("s"));
  m.def("two_variable_zeta_Q", [](std::complex<double> s, std::complex<double> t) { return two_variable_zeta_Q(s, t); },
        py::arg("s"), py::arg("t"));
  m.def("curve_two_variable_zeta", [](int q, int g, int h, std::map<int, std::vector<double>> table, double s, double t) {
    return curve_two_variable_zeta(CurveZetaSpec{q, g, h, std::move(table)}, s, t);
  }, py::arg("q"), py::arg("g"), py::arg("h"), py::arg("k0_table"), py::arg("s"), py::arg("t"));

  py::class_<ArakelovBundle>(m, "Bundle")
      .def(py::init([](const Field& f, const py::object& desc) { return bundle_from_json(f.ptr, from_py(desc)); }),
           py::arg("field"), py::arg("descriptor"))
      .def_property_readonly("rank", &ArakelovBundle::rank)
      .def_property_readonly("degree", [](const ArakelovBundle& b) { return bundle_degree(b); })
      .def_property_readonly("chi", [](const ArakelovBundle& b) { return bundle_chi(b); })
      .def("h0", [](const ArakelovBundle& b, double tol) { return theta_dict(bundle_h0(b, theta_opts(tol, kDefaultBudget))); },
           py::arg("tol") = 1e-10)
      .def("dual", &bundle_dual)
      .def("rr_defect", [](const ArakelovBundle& b) { return bundle_rr_defect(b); })
      .def("to_dict", [](const ArakelovBundle& b) { return to_py(bundle_to_json(b)); });
  m.def("trivial_bundle", [](const Field& f, int r) { return trivial_bundle(f.ptr, r); }, py::arg("field"), py::arg("rank"));
  m.def("line_bundle", &line_bundle, py::arg("divisor"));
}
