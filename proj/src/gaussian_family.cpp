#include "sdeproj/gaussian_family.hpp"

#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

std::string to_string(DensityMetric metric) {
  return metric == DensityMetric::l2 ? "l2" : "hellinger";
}

DensityMetric parse_density_metric(const std::string& name) {
  if (name == "l2") return DensityMetric::l2;
  if (name == "hellinger") return DensityMetric::hellinger;
  throw InvalidArgumentError("unknown metric '" + name + "'");
}

FunctionSpaceGrid FunctionSpaceGrid::around(const GaussianParams& base, const QuadratureSpec& spec) {
  base.validate();
  if (spec.n_nodes < 20) throw InvalidArgumentError("QuadratureSpec: need at least 20 nodes");
  if (!(spec.scale_factor > 0.0)) throw InvalidArgumentError("QuadratureSpec: scale_factor must be positive");
  FunctionSpaceGrid g;
  g.quad = line_quadrature(gauss_hermite(spec.n_nodes), base.theta1, base.theta2 * spec.scale_factor);
  g.sqrt_weights = g.quad.weights.cwiseSqrt();
  g.diff_z = polynomial_differentiation_matrix(g.quad.z);
  return g;
}

Vector FunctionSpaceGrid::to_ambient(const Vector& node_values) const {
  return sqrt_weights.cwiseProduct(node_values);
}

Vector FunctionSpaceGrid::to_nodes(const Vector& ambient) const {
  return ambient.cwiseQuotient(sqrt_weights);
}

void FunctionSpaceGrid::derivatives(const Vector& u, double kappa, Vector& d1, Vector& d2) const {
  const Eigen::ArrayXd z = quad.z.array();
  const Eigen::ArrayXd envelope = (-kappa * z.square()).exp();
  const Vector g = (u.array() / envelope).matrix();
  const Vector g1 = diff_z * g;
  const Vector g2 = diff_z * g1;
  const double h = quad.scale;
  d1 = (envelope * (g1.array() - 2.0 * kappa * z * g.array()) / h).matrix();
  d2 = (envelope *
        (g2.array() - 4.0 * kappa * z * g1.array() + (4.0 * kappa * kappa * z.square() - 2.0 * kappa) * g.array()) /
        (h * h))
           .matrix();
}

namespace {

// log f for f the density (power = 1) or its square root (power = 1/2):
// power * (-u^2 / (2 s^2) - log s) + const. Returns f and the first and
// second derivatives of log f in (mean, sd).
struct LogDerivs {
  double f, lm, ls, lmm, lms, lss;
};

LogDerivs log_derivs(double x, double m, double s, double power) {
  const double u = x - m;
  const double s2 = s * s;
  LogDerivs d;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);
  d.f = std::exp(power * (-0.5 * u * u / s2 - std::log(s) + log_norm));
  d.lm = power * u / s2;
  d.ls = power * (u * u / (s2 * s) - 1.0 / s);
  d.lmm = -power / s2;
  d.lms = -power * 2.0 * u / (s2 * s);
  d.lss = power * (-3.0 * u * u / (s2 * s2) + 1.0 / s2);
  return d;
}

double family_power(DensityMetric metric) { return metric == DensityMetric::l2 ? 1.0 : 0.5; }

void check_state(const Vector& f) {
  if (!f.allFinite() || (f.array() <= 0.0).any())
    throw DegenerateStateError("Gaussian family underflows on the quadrature grid");
}

}  // namespace

Embedding gaussian_family_embedding(DensityMetric metric, const FunctionSpaceGrid& grid) {
  const double power = family_power(metric);
  const int r = grid.size();
  Embedding e;
  e.dim_chart = 2;
  e.dim_ambient = r;
  e.name = metric == DensityMetric::l2 ? "gaussian_l2" : "gaussian_hellinger";
  auto check_theta = [](const Vector& y) {
    if (y.size() != 2 || !(y(1) > 0.0) || !y.allFinite())
      throw DegenerateStateError("Gaussian family: standard deviation must be positive");
  };
  e.phi = [grid, power, r, check_theta](const Vector& y) {
    check_theta(y);
    Vector v(r);
    for (int i = 0; i < r; ++i) v(i) = log_derivs(grid.quad.nodes(i), y(0), y(1), power).f;
    check_state(v);
    return grid.to_ambient(v);
  };
  e.d_phi = [grid, power, r, check_theta](const Vector& y) {
    check_theta(y);
    Matrix d(r, 2);
    for (int i = 0; i < r; ++i) {
      const auto ld = log_derivs(grid.quad.nodes(i), y(0), y(1), power);
      d(i, 0) = grid.sqrt_weights(i) * ld.f * ld.lm;
      d(i, 1) = grid.sqrt_weights(i) * ld.f * ld.ls;
    }
    return d;
  };
  e.d2_phi = [grid, power, r, check_theta](const Vector& y) {
    check_theta(y);
    Tensor3 out(r, Matrix(2, 2));
    for (int i = 0; i < r; ++i) {
      const auto ld = log_derivs(grid.quad.nodes(i), y(0), y(1), power);
      const double c = grid.sqrt_weights(i) * ld.f;
      out[i](0, 0) = c * (ld.lm * ld.lm + ld.lmm);
      out[i](0, 1) = out[i](1, 0) = c * (ld.lm * ld.ls + ld.lms);
      out[i](1, 1) = c * (ld.ls * ld.ls + ld.lss);
    }
    return out;
  };
  return e;
}

AmbientSde filter_ambient_sde(DensityMetric metric, const FilterModel& model, const FunctionSpaceGrid& grid) {
  const int r = grid.size();
  // Node values of the model coefficients, evaluated lazily per time.
  auto node_fn = [grid, r](const std::function<double(double, double)>& fn, double t) {
    Vector out(r);
    for (int i = 0; i < r; ++i) out(i) = fn(grid.quad.nodes(i), t);
    return out;
  };
  AmbientSde sde;
  sde.dim_state = r;
  sde.dim_noise = 1;
  const bool l2 = metric == DensityMetric::l2;
  sde.drift = [grid, model, node_fn, l2](const Vector& v, double t) -> Vector {
    const Vector u = grid.to_nodes(v);
    const Vector p = l2 ? u : Vector(u.cwiseProduct(u));
    const Vector b = node_fn(model.obs_b, t);
    const Vector f = node_fn(model.drift_f, t);
    const Vector sig = node_fn(model.sigma, t);
    const double eb = grid.quad.weights.dot(p.cwiseProduct(b));
    // Forward operator -(f p)' + 1/2 (sigma^2 p)''; p carries exp(-z^2).
    Vector fp1, fp2, sp1, sp2;
    grid.derivatives(f.cwiseProduct(p), 1.0, fp1, fp2);
    grid.derivatives(sig.cwiseProduct(sig).cwiseProduct(p), 1.0, sp1, sp2);
    const Eigen::ArrayXd lstar = -fp1.array() + 0.5 * sp2.array();
    const Eigen::ArrayXd innov = b.array() - eb;
    Eigen::ArrayXd mu;
    if (l2) {
      mu = lstar - p.array() * innov * eb;
    } else {
      mu = lstar / (2.0 * u.array()) - 0.125 * u.array() * innov * (b.array() + 3.0 * eb);
    }
    return grid.to_ambient(mu.matrix());
  };
  sde.diffusion = [grid, model, node_fn, l2](const Vector& v, double t) -> Matrix {
    const Vector b = node_fn(model.obs_b, t);
    const double eb = l2 ? grid.sqrt_weights.cwiseProduct(b).dot(v) : v.cwiseProduct(v).dot(b);
    Matrix out(v.size(), 1);
    out.col(0) = (l2 ? 1.0 : 0.5) * (v.array() * (b.array() - eb)).matrix();
    return out;
  };
  sde.diffusion_jacobian = [grid, model, node_fn, l2](const Vector& v, double t) -> Tensor3 {
    const Vector b = node_fn(model.obs_b, t);
    Matrix j(v.size(), v.size());
    if (l2) {
      const double eb = grid.sqrt_weights.cwiseProduct(b).dot(v);
      j = -v * grid.sqrt_weights.cwiseProduct(b).transpose();
      j.diagonal().array() += b.array() - eb;
    } else {
      const double eb = v.cwiseProduct(v).dot(b);
      j = -v * v.cwiseProduct(b).transpose();
      j.diagonal().array() += 0.5 * (b.array() - eb);
    }
    return Tensor3{j};
  };
  return sde;
}

FilterCoefficients numeric_projection_coefficients(DensityMetric metric, ProjectionKind kind,
                                                   const GaussianParams& theta, const FilterModel& model,
                                                   const QuadratureSpec& spec, double t) {
  theta.validate();
  const FunctionSpaceGrid grid = FunctionSpaceGrid::around(theta, spec);
  const Embedding emb = gaussian_family_embedding(metric, grid);
  const AmbientSde sde = filter_ambient_sde(metric, model, grid);
  const ChartCoefficients c = project_coefficients(kind, sde, emb, Vector{{theta.theta1, theta.theta2}}, t);
  if (!c.drift.allFinite() || !c.diffusion.allFinite())
    throw DegenerateStateError("numeric projection produced non-finite coefficients");
  FilterCoefficients out;
  out.drift = c.drift;
  out.diffusion = c.diffusion.col(0);
  return out;
}

}  // namespace sdeproj
