// Python bindings for the core operations: spectra and error variances,
// fading synthesis, Wiener interpolation, rate lower bounds, the two-user
// pre-log regions, and the physical-scenario helpers.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pilotnn/codec.hpp"
#include "pilotnn/estimator.hpp"
#include "pilotnn/experiments.hpp"
#include "pilotnn/fading.hpp"
#include "pilotnn/gmi.hpp"
#include "pilotnn/mac.hpp"
#include "pilotnn/psd.hpp"
#include "pilotnn/runconfig.hpp"
#include "pilotnn/scenario.hpp"
#include "pilotnn/spectrum.hpp"

namespace py = pybind11;
using namespace pilotnn;

namespace {

PsdShape shape_from_string(const std::string& s) {
  if (s == "rectangular") return PsdShape::rectangular;
  if (s == "raised_cosine") return PsdShape::raised_cosine;
  throw std::invalid_argument("psd shape must be rectangular or raised_cosine");
}

// FadingPath samples as an (length, n_r, n_t) complex array.
py::array_t<std::complex<double>> path_array(const FadingPath& p) {
  py::array_t<std::complex<double>> arr(
      {static_cast<py::ssize_t>(p.length), static_cast<py::ssize_t>(p.n_r),
       static_cast<py::ssize_t>(p.n_t)});
  auto r = arr.mutable_unchecked<3>();
  for (py::ssize_t k = 0; k < r.shape(0); ++k)
    for (py::ssize_t i = 0; i < r.shape(1); ++i)
      for (py::ssize_t j = 0; j < r.shape(2); ++j)
        r(k, i, j) = p.at(static_cast<std::size_t>(k), static_cast<int>(i),
                          static_cast<int>(j));
  return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Pilot-aided channel estimation and nearest-neighbor decoding for "
      "bandlimited fading channels";

  py::class_<PsdModel>(m, "PsdModel")
      .def(py::init([](const std::string& shape, double lambda_d, int quad) {
             return PsdModel(shape_from_string(shape), lambda_d, quad);
           }),
           py::arg("shape"), py::arg("lambda_d"), py::arg("quad_points") = 2048)
      .def("__call__", &PsdModel::operator())
      .def("autocovariance_closed", &PsdModel::autocovariance_closed)
      .def_property_readonly("lambda_d", &PsdModel::lambda_d);

  m.def("undersampled_spectrum", &undersampled_spectrum, py::arg("model"),
        py::arg("L"), py::arg("ell"), py::arg("lam"));
  m.def("error_variance_no_alias", &error_variance_no_alias, py::arg("model"),
        py::arg("L"), py::arg("n_t"), py::arg("snr"));
  m.def("error_variance_general", &error_variance_general, py::arg("model"),
        py::arg("L"), py::arg("n_t"), py::arg("ell"), py::arg("t"),
        py::arg("snr"));
  m.def("aliased_error_lower_bound", &aliased_error_lower_bound,
        py::arg("model"), py::arg("L"), py::arg("ell"), py::arg("t"));

  m.def(
      "synthesize",
      [](const PsdModel& model, int n_r, int n_t, std::size_t length,
         std::uint64_t seed) {
        return path_array(synthesize(model, n_r, n_t, length, seed));
      },
      py::arg("model"), py::arg("n_r"), py::arg("n_t"), py::arg("length"),
      py::arg("seed"),
      "stationary fading samples with the model's autocovariance, shaped "
      "(length, n_r, n_t)");

  py::class_<PilotSchedule>(m, "PilotSchedule")
      .def_readonly("L", &PilotSchedule::L)
      .def_readonly("n_pilot", &PilotSchedule::n_pilot)
      .def_readonly("T", &PilotSchedule::T)
      .def_readonly("n", &PilotSchedule::n)
      .def_readonly("n_p", &PilotSchedule::n_p)
      .def_readonly("n_g", &PilotSchedule::n_g)
      .def_readonly("n_total", &PilotSchedule::n_total);
  m.def("build_schedule", &build_schedule, py::arg("L"), py::arg("n_t"),
        py::arg("T"), py::arg("n"));

  py::class_<InterpolatorWeights>(m, "InterpolatorWeights")
      .def("predicted_mse", &InterpolatorWeights::predicted_mse, py::arg("ell"),
           py::arg("t"))
      .def("residual", &InterpolatorWeights::residual);
  m.def("solve_weights", &solve_weights, py::arg("schedule"), py::arg("model"),
        py::arg("snr"));

  py::class_<GmiEstimate>(m, "GmiEstimate")
      .def_readonly("variant", &GmiEstimate::variant)
      .def_readonly("value", &GmiEstimate::value)
      .def_readonly("se", &GmiEstimate::se)
      .def_readonly("theta", &GmiEstimate::theta)
      .def_readonly("snr", &GmiEstimate::snr)
      .def_readonly("L", &GmiEstimate::L)
      .def_readonly("n_t", &GmiEstimate::n_t)
      .def_readonly("n_r", &GmiEstimate::n_r)
      .def_readonly("T", &GmiEstimate::T);

  m.def(
      "gmi_lb_finite_T",
      [](const PsdModel& model, int L, int n_t, int n_r, int T, double snr,
         std::size_t mc, std::uint64_t seed, bool refine) {
        const auto profile =
            T >= 1 ? profile_finite_T(
                         build_schedule(L, n_t, T,
                                        static_cast<std::size_t>(L - n_t)),
                         model, n_r, snr)
                   : profile_infinite_T(model, L, n_t, n_r, snr);
        return gmi_lb_finite_T(profile, mc, seed, refine);
      },
      py::arg("model"), py::arg("L"), py::arg("n_t"), py::arg("n_r"),
      py::arg("T"), py::arg("snr"), py::arg("mc") = 20000, py::arg("seed") = 1,
      py::arg("refine_theta") = false,
      "finite- or infinite-window (T = 0) rate lower bound in nats");
  m.def("gmi_lb_asymptotic", &gmi_lb_asymptotic, py::arg("model"),
        py::arg("L"), py::arg("n_t"), py::arg("snr"), py::arg("mc") = 20000,
        py::arg("seed") = 1);
  m.def("gmi_lb_digamma", &gmi_lb_digamma, py::arg("model"), py::arg("L"),
        py::arg("n_t"), py::arg("snr"));
  m.def("gmi_lb_general_input", &gmi_lb_general_input, py::arg("model"),
        py::arg("L"), py::arg("n_t"), py::arg("snr"), py::arg("log_k"),
        py::arg("e_norm_sq"), py::arg("mc") = 20000, py::arg("seed") = 1);
  m.def("digamma_closed_form", &digamma_closed_form, py::arg("n_t"),
        py::arg("eps2"));

  py::class_<PreLogFit>(m, "PreLogFit")
      .def_readonly("slope", &PreLogFit::slope)
      .def_readonly("intercept", &PreLogFit::intercept)
      .def_readonly("residual_rms", &PreLogFit::residual_rms)
      .def_readonly("points", &PreLogFit::points);
  m.def("prelog_fit", &prelog_fit, py::arg("snr_db"), py::arg("gmi_nats"));

  py::class_<Rational>(m, "Rational")
      .def_readonly("num", &Rational::num)
      .def_readonly("den", &Rational::den)
      .def("__float__", &Rational::value)
      .def("__str__", &Rational::str);

  py::class_<PreLogRegion>(m, "PreLogRegion")
      .def_property_readonly("vertices",
                             [](const PreLogRegion& r) {
                               std::vector<std::pair<double, double>> v;
                               for (const auto& [x, y] : r.vertices)
                                 v.emplace_back(x.value(), y.value());
                               return v;
                             })
      .def_property_readonly("vertices_exact",
                             [](const PreLogRegion& r) {
                               std::vector<std::pair<std::string, std::string>> v;
                               for (const auto& [x, y] : r.vertices)
                                 v.emplace_back(x.str(), y.str());
                               return v;
                             })
      .def_readonly("samples", &PreLogRegion::samples);
  m.def("jt_region", &jt_region, py::arg("n_r"), py::arg("n_t1"),
        py::arg("n_t2"), py::arg("l_star"));
  m.def("tdma_region", &tdma_region, py::arg("n_r"), py::arg("n_t1"),
        py::arg("n_t2"), py::arg("l_star"), py::arg("beta_steps") = 100);

  m.def(
      "corollary_verdict",
      [](int n_r, int n_t1, int n_t2, long long l_star) {
        const auto v = corollary1_verdict(n_r, n_t1, n_t2, l_star);
        py::dict d;
        d["verdict"] = v.verdict == Verdict::JT_superior
                           ? "JT_superior"
                           : (v.verdict == Verdict::TDMA_superior
                                  ? "TDMA_superior"
                                  : "indeterminate");
        d["jt_threshold"] =
            v.jt_infinite ? py::object(py::none())
                          : py::object(py::cast(v.jt_threshold.value()));
        d["tdma_threshold"] =
            v.tdma_infinite ? py::object(py::none())
                            : py::object(py::cast(v.tdma_threshold.value()));
        return d;
      },
      py::arg("n_r"), py::arg("n_t1"), py::arg("n_t2"), py::arg("l_star"),
      "exact joint-transmission vs TDMA comparison");

  py::class_<Environment>(m, "Environment")
      .def(py::init([](double delay_spread_s, double velocity_mps,
                       double carrier_hz) {
             return Environment{delay_spread_s, velocity_mps, carrier_hz};
           }),
           py::arg("delay_spread_s"), py::arg("velocity_mps"),
           py::arg("carrier_hz"));
  m.def("lambda_from_env", &lambda_from_env, py::arg("env"));
  m.def("l_star_from_lambda", &l_star_from_lambda, py::arg("lambda_d"));
  m.def("kmh_to_mps", &kmh_to_mps, py::arg("kmh"));

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& out_dir,
         int threads) {
        return run_experiment(RunConfig::parse_string(config_text), out_dir,
                              threads);
      },
      py::arg("config_text"), py::arg("out_dir"), py::arg("threads") = 1,
      "run one experiment from config text; returns the files written");

  m.def(
      "load_path",
      [](const std::string& file) { return path_array(load_path(file)); },
      py::arg("file"), "read a dumped fading path as a numpy array");
}
