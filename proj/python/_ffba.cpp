#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <sstream>

#include "ffba/badtarget.hpp"
#include "ffba/cantor.hpp"
#include "ffba/error.hpp"
#include "ffba/hankel.hpp"
#include "ffba/indices.hpp"
#include "ffba/verify.hpp"
#include "ffba/weights.hpp"

namespace py = pybind11;
using namespace ffba;

namespace {

std::vector<unsigned> codes(std::span<const Elem> v) {
  std::vector<unsigned> out;
  for (auto e : v) out.push_back(e.code);
  return out;
}

std::vector<Elem> elems(const std::vector<unsigned>& v) {
  std::vector<Elem> out;
  for (auto c : v) out.push_back(Elem{static_cast<std::uint16_t>(c)});
  return out;
}

py::object exponent(QVal v) { return v.is_zero() ? py::object(py::none()) : py::object(py::int_(v.exponent())); }

py::object fraction(const BigRational& r) {
  std::ostringstream num;
  std::ostringstream den;
  num << numerator(r);
  den << denominator(r);
  return py::module_::import("fractions").attr("Fraction")(py::int_(py::str(num.str())), py::int_(py::str(den.str())));
}

py::dict constant_dict(const DepthBoundedConstant& r) {
  py::dict d;
  d["exponent"] = exponent(r.value);
  d["witness"] = r.witness.codes();
  d["depth"] = r.depth;
  d["precision_limited"] = r.precision_limited;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ffba, m) {
  m.doc() = "Badly approximable targets over F_q((1/t))";

  static py::exception<Error> error_type(m, "FfbaError", PyExc_ValueError);
  static py::exception<InsufficientPrecision> precision_type(m, "InsufficientPrecision", error_type.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InsufficientPrecision& e) {
      precision_type(e.what());
    } catch (const Error& e) {
      error_type((std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Field>(m, "Field")
      .def(py::init([](unsigned q) { return Field::of_order(q); }), py::arg("q"))
      .def_static("make", &Field::make, py::arg("p"), py::arg("k"), py::arg("modulus") = py::none())
      .def_property_readonly("q", &Field::q)
      .def_property_readonly("p", &Field::p)
      .def_property_readonly("k", &Field::k)
      .def_property_readonly("modulus", &Field::modulus)
      .def("add", [](const Field& f, unsigned a, unsigned b) { return f.add(f.elem(a), f.elem(b)).code; })
      .def("mul", [](const Field& f, unsigned a, unsigned b) { return f.mul(f.elem(a), f.elem(b)).code; })
      .def("inv", [](const Field& f, unsigned a) { return f.inv(f.elem(a)).code; })
      .def("__repr__", [](const Field& f) { return "Field(q=" + std::to_string(f.q()) + ")"; });

  py::class_<LaurentSeries>(m, "Series")
      .def_static("parse", &parse_series, py::arg("field"), py::arg("text"))
      .def("digits", [](const LaurentSeries& s, std::size_t n) { return codes(s.frac().prefix(n)); }, py::arg("n"))
      .def_property_readonly("guarantee", [](const LaurentSeries& s) { return s.frac().guarantee(); })
      .def_property_readonly("poly", [](const LaurentSeries& s) { return s.poly_part().codes(); })
      .def("__str__", &format_series)
      .def("__repr__", [](const LaurentSeries& s) { return "Series('" + format_series(s) + "')"; });

  py::class_<GeneralizedWeight>(m, "Weight")
      .def_static("parse", &GeneralizedWeight::parse, py::arg("d"), py::arg("spec"))
      .def_property_readonly("d", &GeneralizedWeight::dim)
      .def("__call__", py::overload_cast<std::size_t>(&GeneralizedWeight::eval, py::const_), py::arg("h"))
      .def("__str__", &GeneralizedWeight::describe);

  m.def(
      "hankel",
      [](const SeriesVector& theta, const GeneralizedWeight& g, std::size_t i, std::size_t j) {
        const auto a = HankelView(theta, g).matrix(i, j);
        std::vector<std::vector<unsigned>> rows;
        for (std::size_t r = 0; r < a.rows; ++r) rows.push_back(codes(a.row(r)));
        return rows;
      },
      py::arg("theta"), py::arg("weight"), py::arg("i"), py::arg("j"));
  m.def("rank_profile", &rank_profile, py::arg("theta"), py::arg("weight"), py::arg("i"), py::arg("j_max"));
  m.def(
      "left_null_vector",
      [](const SeriesVector& theta, const GeneralizedWeight& g, std::size_t i, std::size_t j) {
        const auto b = left_null_vector(theta, g, i, j);
        return b ? py::object(py::cast(codes(*b))) : py::object(py::none());
      },
      py::arg("theta"), py::arg("weight"), py::arg("i"), py::arg("j"));
  m.def("invertibility_spectrum", &square_invertibility_spectrum, py::arg("theta"), py::arg("m_max"));

  m.def(
      "indices",
      [](const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell, std::size_t stages,
         std::size_t j_cutoff) {
        py::list out;
        for (const auto& s : indices_sequence(theta, g, ell, stages, j_cutoff).stages) {
          py::dict d;
          d["m"] = s.m;
          d["i"] = s.i;
          d["j"] = s.j;
          d["status"] = status_name(s.status);
          d["scanned_j"] = s.scanned_j;
          out.append(d);
        }
        return out;
      },
      py::arg("theta"), py::arg("weight"), py::arg("ell") = 1, py::arg("stages") = 8, py::arg("j_cutoff") = 4096);

  py::class_<Certificate>(m, "Certificate")
      .def_static(
          "build",
          [](const SeriesVector& theta, const GeneralizedWeight& g, std::size_t ell, std::size_t stages,
             std::size_t j_cutoff, const std::string& policy, std::uint64_t seed) {
            if (policy != "lexmin" && policy != "random") throw Error(Errc::InvalidArgument, "policy: lexmin or random");
            return gamma_prefix(theta, g, ell, stages, j_cutoff,
                                policy == "random" ? DigitPolicy::SeededRandom : DigitPolicy::LexMin, seed);
          },
          py::arg("theta"), py::arg("weight"), py::arg("ell") = 1, py::arg("stages") = 8, py::arg("j_cutoff") = 4096,
          py::arg("policy") = "lexmin", py::arg("seed") = 0)
      .def_static("from_json", [](const std::string& s) { return certificate_from_json(nlohmann::json::parse(s)); })
      .def("to_json", [](const Certificate& c) { return certificate_to_json(c).dump(); })
      .def("verify",
           [](const Certificate& c) {
             const auto r = verify_certificate(c);
             py::dict d;
             d["ok"] = r.ok();
             d["failures"] = r.failures;
             d["first_failing_stage"] = r.first_failing_stage;
             return d;
           })
      .def("gamma", &Certificate::gamma)
      .def("extension_counts",
           [](const Certificate& c, std::size_t stage) {
             const auto e = extension_counts(c, stage);
             return py::make_tuple(e.total, e.excluded, e.enumerated_excluded);
           })
      .def("schedule", &cantor_schedule)
      .def_property_readonly("gamma_prefix",
                             [](const Certificate& c) {
                               std::vector<std::vector<unsigned>> out;
                               for (const auto& v : c.gamma_prefix) out.push_back(codes(v));
                               return out;
                             })
      .def_property_readonly("stages", [](const Certificate& c) { return c.stages.size(); })
      .def_property_readonly("truncated", [](const Certificate& c) { return c.truncated; })
      .def_property_readonly("covered_j", &Certificate::covered_j)
      .def_property_readonly("theta", [](const Certificate& c) { return c.theta; })
      .def_property_readonly("weight", [](const Certificate& c) { return c.g; });

  m.def(
      "c_depth",
      [](const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_deg, std::size_t prec,
         unsigned threads) { return constant_dict(c_depth(theta, gamma, max_deg, prec, threads)); },
      py::arg("theta"), py::arg("gamma"), py::arg("max_deg"), py::arg("precision"), py::arg("threads") = 1);
  m.def(
      "c_depth_weighted",
      [](const SeriesVector& theta, const SeriesVector& gamma, const GeneralizedWeight& g, std::size_t max_deg,
         std::size_t prec, unsigned threads) {
        return constant_dict(c_depth_weighted(theta, gamma, g, max_deg, prec, threads));
      },
      py::arg("theta"), py::arg("gamma"), py::arg("weight"), py::arg("max_deg"), py::arg("precision"),
      py::arg("threads") = 1);
  m.def(
      "matrix_condition",
      [](const SeriesVector& theta, const SeriesVector& gamma, const GeneralizedWeight& g,
         const std::vector<unsigned>& n, std::size_t ell) {
        return matrix_condition_check(theta, gamma, g, Poly(theta.front().field(), elems(n)), ell);
      },
      py::arg("theta"), py::arg("gamma"), py::arg("weight"), py::arg("n"), py::arg("ell"));
  m.def(
      "witness",
      [](const LaurentSeries& theta, const LaurentSeries& gamma, std::size_t max_m) -> py::object {
        const auto w = find_witness_small(theta, gamma, max_m);
        if (!w) return py::none();
        py::dict d;
        d["n"] = w->n.codes();
        d["m"] = w->m;
        d["m_truncated"] = w->m_truncated;
        d["exponent"] = exponent(w->value);
        return d;
      },
      py::arg("theta"), py::arg("gamma"), py::arg("max_m"));
  m.def(
      "m0",
      [](const LaurentSeries& theta, std::size_t depth) {
        const auto s = m0_structure(theta, depth);
        py::dict d;
        d["m0"] = s.m0;
        d["pattern_consistent"] = s.pattern_consistent;
        d["violation"] = s.violation;
        return d;
      },
      py::arg("theta"), py::arg("depth"));
  m.def("liminf_theta", &make_liminf_theta, py::arg("field"));

  py::class_<ConstructionSchedule>(m, "Schedule")
      .def_static("constant", &ConstructionSchedule::constant, py::arg("ell"), py::arg("ell_prime"))
      .def_static("explicit", &ConstructionSchedule::explicit_stages, py::arg("ell"), py::arg("ell_prime"))
      .def_property_readonly("length", &ConstructionSchedule::length);
  m.def(
      "measure",
      [](const ConstructionSchedule& s, unsigned q, std::size_t stages) {
        return fraction(measure_after_stages(s, q, stages).measure);
      },
      py::arg("schedule"), py::arg("q"), py::arg("stages"));
  m.def(
      "dimension_bound",
      [](const ConstructionSchedule& s, unsigned q, std::size_t stages) {
        const auto b = dimension_lower_bound(s, q, stages);
        return py::make_tuple(b.at_m, b.limit);
      },
      py::arg("schedule"), py::arg("q"), py::arg("stages"));
  m.def("kappa", &kappa, py::arg("q"));
}
