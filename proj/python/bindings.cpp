#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sdeproj/circle_lab.hpp"
#include "sdeproj/embeddings.hpp"
#include "sdeproj/errors.hpp"
#include "sdeproj/experiment.hpp"
#include "sdeproj/gaussian_filters.hpp"
#include "sdeproj/ito_taylor.hpp"
#include "sdeproj/ks_solver.hpp"

namespace py = pybind11;
using namespace sdeproj;

namespace {

std::vector<std::vector<int>> to_lists(const std::vector<MultiIndex>& xs) {
  std::vector<std::vector<int>> out;
  for (const auto& x : xs) out.push_back(x.entries);
  return out;
}

std::vector<MultiIndex> from_lists(const std::vector<std::vector<int>>& xs) {
  std::vector<MultiIndex> out;
  for (const auto& x : xs) out.emplace_back(x);
  return out;
}

py::tuple coeff_tuple(const FilterCoefficients& c) {
  return py::make_tuple(Eigen::Vector2d(c.drift), Eigen::Vector2d(c.diffusion));
}

}  // namespace

PYBIND11_MODULE(_sdeproj, m) {
  m.doc() = "Projection of Ito SDEs onto submanifolds and Gaussian projection filters";

  py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", PyExc_ValueError);
  py::register_exception<UnsupportedOrderError>(m, "UnsupportedOrderError", PyExc_ValueError);
  py::register_exception<NumericalBlowupError>(m, "NumericalBlowupError", PyExc_ArithmeticError);
  py::register_exception<SingularMetricError>(m, "SingularMetricError", PyExc_ArithmeticError);
  py::register_exception<DegenerateStateError>(m, "DegenerateStateError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<NoiseSource>(m, "NoiseSource")
      .def(py::init([](std::uint64_t seed, std::uint64_t stream_id) { return NoiseSource{seed, stream_id}; }),
           py::arg("seed") = 0, py::arg("stream_id") = 0)
      .def_readwrite("seed", &NoiseSource::seed)
      .def_readwrite("stream_id", &NoiseSource::stream_id);
  m.def("brownian_increments", &brownian_increments, py::arg("noise"), py::arg("m"), py::arg("n_steps"),
        py::arg("dt"));

  py::class_<AmbientSde>(m, "AmbientSde")
      .def(py::init([](int r, int mm, DriftFn drift, DiffusionFn diffusion) {
             AmbientSde s;
             s.dim_state = r;
             s.dim_noise = mm;
             s.drift = std::move(drift);
             s.diffusion = std::move(diffusion);
             return s;
           }),
           py::arg("dim_state"), py::arg("dim_noise"), py::arg("drift"), py::arg("diffusion"))
      .def_readonly("dim_state", &AmbientSde::dim_state)
      .def_readonly("dim_noise", &AmbientSde::dim_noise)
      .def("drift", &AmbientSde::eval_drift)
      .def("diffusion", &AmbientSde::eval_diffusion);

  m.def(
      "euler_maruyama",
      [](const AmbientSde& sde, const Vector& x0, double t0, double dt, long n_steps, const NoiseSource& noise) {
        const SamplePath p = euler_maruyama(sde, x0, t0, dt, n_steps, noise);
        Matrix states(static_cast<Eigen::Index>(p.states.size()), sde.dim_state);
        for (std::size_t k = 0; k < p.states.size(); ++k) states.row(k) = p.states[k].transpose();
        return py::make_tuple(p.times, states);
      },
      py::arg("sde"), py::arg("x0"), py::arg("t0"), py::arg("dt"), py::arg("n_steps"), py::arg("noise"),
      "Returns (times, states) with one state per row.");
  m.def("ito_to_stratonovich_drift", &ito_to_stratonovich_drift);
  m.def("stratonovich_to_ito_drift", &stratonovich_to_ito_drift);

  m.def("lambda_set", [](int k, int mm) { return to_lists(lambda_set(k, mm)); });
  m.def("remainder_set", [](const std::vector<std::vector<int>>& a, int mm) {
    return to_lists(remainder_set(from_lists(a), mm));
  });
  m.def(
      "iterated_integral",
      [](const std::vector<int>& xi, const NoiseSource& noise, double t, long n) {
        return iterated_integral(MultiIndex(xi), noise, t, n);
      },
      py::arg("xi"), py::arg("noise"), py::arg("t"), py::arg("n_substeps") = 1000);

  py::class_<Embedding>(m, "Embedding")
      .def_readonly("dim_chart", &Embedding::dim_chart)
      .def_readonly("dim_ambient", &Embedding::dim_ambient)
      .def_readonly("name", &Embedding::name)
      .def("phi", [](const Embedding& e, const Vector& y) { return e.phi(y); })
      .def("d_phi", [](const Embedding& e, const Vector& y) { return e.d_phi(y); });
  auto emb = m.def_submodule("embeddings", "Shipped embeddings");
  emb.def("circle", &embeddings::circle, py::arg("radius") = 1.0);
  emb.def("flat", &embeddings::flat);
  emb.def("parabola", &embeddings::parabola);
  emb.def("sphere", &embeddings::sphere, py::arg("radius") = 1.0);
  emb.def("torus", &embeddings::torus, py::arg("major_radius") = 2.0, py::arg("minor_radius") = 1.0);

  m.def("induced_metric", [](const Embedding& e, const Vector& y) {
    const auto h = induced_metric(e, y);
    return py::make_tuple(h.metric, h.inverse);
  });
  m.def("tangent_projection", &tangent_projection);
  m.def("metric_projection_jet2", [](const Embedding& e, const Vector& y) {
    const auto j = metric_projection_jet2(e, y);
    return py::make_tuple(j.tangent_proj, j.hessian);
  }, "Returns (Pi, hessian slices).");

  py::enum_<ProjectionKind>(m, "ProjectionKind")
      .value("stratonovich", ProjectionKind::stratonovich)
      .value("ito_vector", ProjectionKind::ito_vector)
      .value("ito_jet", ProjectionKind::ito_jet);
  m.def(
      "project_coefficients",
      [](ProjectionKind kind, const AmbientSde& sde, const Embedding& e, const Vector& y, double t) {
        const auto c = project_coefficients(kind, sde, e, y, t);
        return py::make_tuple(c.drift, c.diffusion);
      },
      py::arg("kind"), py::arg("sde"), py::arg("embedding"), py::arg("y"), py::arg("t") = 0.0);

  m.def("cross_diffusion_sde", [](double sigma) { return cross_diffusion_sde(CrossDiffusionSpec{sigma, 1.0, 0.0}); },
        py::arg("sigma") = 1.0);
  m.def("generic_planar_sde", [] { return AffinePlanarSde{}.sde(); });
  m.def(
      "exact_solution",
      [](double sigma, double x0, double y0, double w, double t) {
        return exact_solution(CrossDiffusionSpec{sigma, x0, y0}, w, t);
      },
      py::arg("sigma"), py::arg("x0"), py::arg("y0"), py::arg("w"), py::arg("t"));
  m.def("exact_angular_coefficients", [](double theta, double sigma) {
    const auto c = exact_angular_coefficients(theta, sigma);
    return py::make_tuple(c.drift, c.diffusion);
  });
  m.def("bivariate_circle_closed_form", [](double theta, double a1, double a2, double b11, double b12) {
    const auto c = bivariate_circle_closed_form(theta, a1, a2, b11, b12);
    return py::make_tuple(c.drift, c.diffusion);
  });

  m.def("filter_kinds", [] {
    std::vector<std::string> out;
    for (auto k : all_filter_kinds()) out.push_back(to_string(k));
    return out;
  });
  m.def("gaussian_moment_b", [](double t1, double t2, double eps) { return gaussian_moment_b({t1, t2}, eps); });
  m.def(
      "closed_form_coefficients",
      [](const std::string& kind, double t1, double t2, double eps) {
        return coeff_tuple(closed_form_coefficients(parse_filter_kind(kind), {t1, t2}, eps));
      },
      py::arg("kind"), py::arg("theta1"), py::arg("theta2"), py::arg("epsilon"));
  m.def(
      "numeric_projection_coefficients",
      [](const std::string& metric, ProjectionKind kind, double t1, double t2, double eps, int nodes) {
        QuadratureSpec q;
        q.n_nodes = nodes;
        return coeff_tuple(numeric_projection_coefficients(parse_density_metric(metric), kind, {t1, t2},
                                                           FilterModel::cubic_sensor(eps), q));
      },
      py::arg("metric"), py::arg("kind"), py::arg("theta1"), py::arg("theta2"), py::arg("epsilon"),
      py::arg("n_nodes") = 40);
  m.def(
      "gaussian_residuals",
      [](const Vector& density, double x_min, double x_max, double t1, double t2) {
        DensityGrid g = DensityGrid::uniform(x_min, x_max, static_cast<int>(density.size()) - 1);
        g.values = density;
        const GaussianParams th{t1, t2};
        return py::make_tuple(l2_residual(g, th), hellinger_residual(g, th));
      },
      "(l2, hellinger) residuals of a grid density against a Gaussian.");

  m.def("validate_config", [](const std::string& text) { return validate(parse_config(text)); });
  m.def(
      "run_config",
      [](const std::string& text, const std::string& out_dir, int jobs) {
        RunOptions o;
        o.output_dir = out_dir;
        o.jobs = jobs;
        const auto r = run(parse_config(text), o);
        std::vector<std::string> files;
        for (const auto& f : r.files) files.push_back(f.string());
        return py::make_tuple(r.exit_code, files, r.message);
      },
      py::arg("config_text"), py::arg("out_dir"), py::arg("jobs") = 1);
}
