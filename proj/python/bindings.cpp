#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cli.hpp"
#include "zipshoe/conjugacy.hpp"
#include "zipshoe/demo.hpp"
#include "zipshoe/error.hpp"
#include "zipshoe/horseshoe.hpp"
#include "zipshoe/io.hpp"
#include "zipshoe/stability.hpp"
#include "zipshoe/verify.hpp"

namespace py = pybind11;
using namespace zipshoe;

namespace {

py::object to_py(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

symbolic::Word parse_word(const symbolic::ZipSystem& sys, const std::vector<std::string>& names,
                          symbolic::Alphabet a) {
  symbolic::Word w;
  for (const auto& n : names) w.push_back(a == symbolic::Alphabet::S ? sys.parse_s(n) : sys.parse_z(n));
  return w;
}

/// Anchors left unset fall back to the defaults for N.
horseshoe::HorseshoeParams make_params(int N, double eps, std::optional<double> y_a, std::optional<double> y_b) {
  horseshoe::HorseshoeParams p = horseshoe::HorseshoeParams::with_defaults(N, eps);
  if (y_a) p.y_a = *y_a;
  if (y_b) p.y_b = *y_b;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zip shift horseshoe toolkit";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<AlphabetError>(m, "AlphabetError", base.ptr());
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<EscapeError>(m, "EscapeError", domain.ptr());
  py::register_exception<PerturbationTooLarge>(m, "PerturbationTooLarge", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<horseshoe::HorseshoeModel>(m, "HorseshoeModel")
      .def(py::init([](int N, double eps, std::optional<double> y_a, std::optional<double> y_b) {
             return horseshoe::HorseshoeModel::build(make_params(N, eps, y_a, y_b));
           }),
           py::arg("N") = 2, py::arg("eps") = 0.1, py::arg("y_a") = py::none(), py::arg("y_b") = py::none())
      .def_property_readonly("alpha", [](const horseshoe::HorseshoeModel& h) { return h.params().alpha(); })
      .def_property_readonly("labels", [](const horseshoe::HorseshoeModel& h) { return h.zip_system().s_names(); })
      .def("apply",
           [](const horseshoe::HorseshoeModel& h, double x, double y) {
             const auto s = h.apply({x, y});
             return py::make_tuple(s.point.x, s.point.y, h.zip_system().name(s.label));
           })
      .def("decode",
           [](const horseshoe::HorseshoeModel& h, const std::vector<std::string>& backward,
              const std::vector<std::string>& forward) {
             const auto& sys = h.zip_system();
             const Box b = horseshoe::decode(h, parse_word(sys, backward, symbolic::Alphabet::Z),
                                             parse_word(sys, forward, symbolic::Alphabet::S));
             return py::make_tuple(b.x.lo, b.x.hi, b.y.lo, b.y.hi);
           })
      .def("to_dict", [](const horseshoe::HorseshoeModel& h) { return to_py(io::to_json(h)); })
      .def("verify",
           [](const horseshoe::HorseshoeModel& h, std::optional<double> mu, double aperture) {
             horseshoe::ConeOptions c;
             c.mu = mu.value_or(h.params().beta());
             c.mu_h = c.mu_v = aperture;
             const Report a1 = horseshoe::verify_assumption1(h);
             const Report cones = horseshoe::verify_cones(h, c);
             return to_py({{"assumption1", io::to_json(a1)},
                           {"cones", io::to_json(cones)},
                           {"passed", a1.passed() && cones.passed()}});
           },
           py::arg("mu") = py::none(), py::arg("aperture") = 0.3)
      .def("entropy", [](const horseshoe::HorseshoeModel& h, std::size_t k) { return conjugacy::entropy_estimate(h, k); })
      .def("refine",
           [](const horseshoe::HorseshoeModel& h, std::size_t k) {
             return to_py(io::to_json(h.zip_system(), horseshoe::refine(h, k)));
           })
      .def("conjugacy_check",
           [](const horseshoe::HorseshoeModel& h, std::size_t depth, std::size_t samples, std::uint64_t seed) {
             return to_py(io::to_json(conjugacy::conjugacy_check(h, depth, samples, seed)));
           },
           py::arg("depth") = 8, py::arg("samples") = 1000, py::arg("seed") = 42)
      .def("periodic_points",
           [](const horseshoe::HorseshoeModel& h, std::size_t n) {
             const auto& sys = h.zip_system();
             py::list out;
             std::size_t count = 1;
             for (std::size_t j = 0; j < n; ++j) count *= sys.s_size();
             for (std::size_t i = 0; i < count; ++i) {
               const auto w = horseshoe::word_at(i, n, symbolic::Alphabet::S, sys.s_size());
               const Point p = conjugacy::periodic_orbit_solve(h, w);
               out.append(py::make_tuple(io::word_string(sys, w), p.x, p.y));
             }
             return out;
           })
      .def("perturbation_experiment",
           [](const horseshoe::HorseshoeModel& h, double eta, std::size_t depth, double mu, double aperture) {
             const auto pm = stability::perturb(h, eta);
             const auto vr = stability::verify_perturbed(pm, mu, aperture);
             io::json j = {{"verify", io::to_json(vr)}};
             if (vr.passed()) j["match"] = io::to_json(stability::match_conjugacy(h, pm, depth));
             return to_py(j);
           },
           py::arg("eta") = 1e-3, py::arg("depth") = 4, py::arg("mu") = 0.3, py::arg("aperture") = 0.3);

  m.def("doubling_code",
        [](std::uint64_t p, std::uint64_t q) {
          return symbolic::to_string(demo::doubling_system(), demo::doubling_code(p, q));
        });

  m.def("run",
        [](const std::vector<std::string>& args) {
          std::ostringstream out;
          std::ostringstream err;
          const int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line front end in-process and returns (exit_code, stdout, stderr).");
}
