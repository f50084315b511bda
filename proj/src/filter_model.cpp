#include "sdeproj/filter_model.hpp"

#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

FilterModel FilterModel::cubic_sensor(double eps) {
  if (!std::isfinite(eps)) throw InvalidArgumentError("cubic_sensor: epsilon must be finite");
  FilterModel m;
  m.drift_f = [](double, double) { return 0.0; };
  m.sigma = [](double, double) { return 1.0; };
  m.obs_b = [eps](double x, double) { return x + eps * x * x * x; };
  m.epsilon = eps;
  m.name = "cubic_sensor";
  return m;
}

void GaussianParams::validate(double theta_min) const {
  if (!std::isfinite(theta1) || !std::isfinite(theta2))
    throw InvalidArgumentError("GaussianParams: non-finite parameter");
  if (!(theta2 > theta_min))
    throw InvalidArgumentError("GaussianParams: theta2 must exceed " + std::to_string(theta_min));
}

double GaussianParams::density(double x) const {
  const double u = (x - theta1) / theta2;
  return std::exp(-0.5 * u * u) / (theta2 * std::sqrt(2.0 * std::numbers::pi));
}

DensityGrid DensityGrid::uniform(double x_min, double x_max, int n_cells) {
  if (!(x_max > x_min) || n_cells < 2) throw InvalidArgumentError("DensityGrid: bad grid");
  DensityGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n_cells = n_cells;
  g.values = Vector::Zero(n_cells + 1);
  return g;
}

DensityGrid DensityGrid::from_gaussian(double x_min, double x_max, int n_cells, const GaussianParams& theta) {
  theta.validate();
  DensityGrid g = uniform(x_min, x_max, n_cells);
  for (int i = 0; i <= n_cells; ++i) g.values(i) = theta.density(g.node(i));
  g.normalize();
  return g;
}

Vector DensityGrid::nodes() const {
  return Vector::LinSpaced(n_cells + 1, x_min, x_max);
}

double DensityGrid::integrate(const Vector& g) const {
  if (g.size() != values.size()) throw InvalidArgumentError("DensityGrid::integrate: size mismatch");
  const Vector prod = g.cwiseProduct(values);
  return dx() * (prod.sum() - 0.5 * (prod(0) + prod(n_cells)));
}

double DensityGrid::mass() const {
  return dx() * (values.sum() - 0.5 * (values(0) + values(n_cells)));
}

void DensityGrid::normalize() {
  const double m = mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw DegenerateStateError("DensityGrid: mass is not positive");
  values /= m;
}

double DensityGrid::mean() const { return integrate(nodes()); }

double DensityGrid::variance() const {
  const double mu = mean();
  return integrate((nodes().array() - mu).square().matrix());
}

void ObservationRecord::validate() const {
  if (!(dt > 0.0)) throw InvalidArgumentError("ObservationRecord: dt must be positive");
  if (signal && signal->states.size() != increments.size() + 1)
    throw InvalidArgumentError("ObservationRecord: signal length does not match increments");
}

ObservationRecord simulate_signal_observation(const FilterModel& model, double x0, double horizon,
                                              double dt, const NoiseSource& noise) {
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw InvalidArgumentError("simulate_signal_observation: dt and horizon must be positive");
  const double ratio = horizon / dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgumentError("simulate_signal_observation: dt must divide the horizon");
  const Matrix inc = brownian_increments(noise, 2, n, dt);
  AmbientSde signal;
  signal.dim_state = 1;
  signal.dim_noise = 1;
  signal.drift = [&model](const Vector& x, double t) { return Vector::Constant(1, model.drift_f(x(0), t)); };
  signal.diffusion = [&model](const Vector& x, double t) { return Matrix::Constant(1, 1, model.sigma(x(0), t)); };
  ObservationRecord rec;
  rec.dt = dt;
  rec.signal = euler_maruyama(signal, Vector::Constant(1, x0), 0.0, dt, Matrix(inc.col(0)));
  rec.increments.resize(n);
  for (long k = 0; k < n; ++k) {
    const double b = model.obs_b(rec.signal->states[k](0), rec.signal->times[k]);
    if (!std::isfinite(b))
      throw NumericalBlowupError("simulate_signal_observation: non-finite observation", static_cast<std::size_t>(k));
    rec.increments[k] = b * dt + inc(k, 1);
  }
  return rec;
}

double gaussian_moment_b(const GaussianParams& theta, double eps) {
  const double m = theta.theta1, s = theta.theta2;
  return m + eps * (m * m * m + 3.0 * m * s * s);
}

const std::vector<FilterKind>& all_filter_kinds() {
  static const std::vector<FilterKind> kinds = {
      FilterKind::vec_l2,   FilterKind::vec_hellinger,   FilterKind::jet_l2, FilterKind::jet_hellinger,
      FilterKind::strat_l2, FilterKind::strat_hellinger, FilterKind::ekf,    FilterKind::ito_adf};
  return kinds;
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::vec_l2: return "vec_l2";
    case FilterKind::vec_hellinger: return "vec_hellinger";
    case FilterKind::jet_l2: return "jet_l2";
    case FilterKind::jet_hellinger: return "jet_hellinger";
    case FilterKind::strat_l2: return "strat_l2";
    case FilterKind::strat_hellinger: return "strat_hellinger";
    case FilterKind::ekf: return "ekf";
    case FilterKind::ito_adf: return "ito_adf";
  }
  throw InvalidArgumentError("unknown filter kind");
}

FilterKind parse_filter_kind(const std::string& name) {
  for (FilterKind k : all_filter_kinds())
    if (to_string(k) == name) return k;
  if (name == "strat_adf") return FilterKind::strat_hellinger;
  throw InvalidArgumentError("unknown filter kind '" + name + "'");
}

FilterCoefficients closed_form_coefficients(FilterKind kind, const GaussianParams& theta, double eps) {
  theta.validate();
  const double m = theta.theta1, s = theta.theta2, e = eps;
  const double m2 = m * m, m4 = m2 * m2;
  const double s2 = s * s, s4 = s2 * s2, s6 = s4 * s2, s8 = s4 * s4;
  const double e2 = e * e;
  FilterCoefficients c;
  // The dY coefficient of the standard deviation is shared by every
  // projection filter and by both density filters.
  const double b2 = 3.0 * e * m * s * s2;
  const double b1_l2 = 0.5 * s2 * (3.0 * e * (2.0 * m2 + s2) + 2.0);
  const double b1_hel = s2 * (3.0 * e * (m2 + s2) + 1.0);
  switch (kind) {
    case FilterKind::vec_l2:
      c.drift(0) = -0.25 * m * s2 * (3.0 * e2 * (4.0 * m4 - 4.0 * s2 * m2 - 3.0 * s4) + 16.0 * e * m2 + 4.0);
      c.drift(1) = -(9.0 * e2 * s8 + s4 * (60.0 * e2 * m4 + 48.0 * e * m2 + 4.0) +
                     6.0 * e * s6 * (9.0 * e * m2 + 2.0) - 4.0) / (8.0 * s);
      c.diffusion = {b1_l2, b2};
      break;
    case FilterKind::vec_hellinger:
      c.drift(0) = -m * s2 * (3.0 * e2 * (m4 + 4.0 * s2 * m2 + 6.0 * s4) + e * (4.0 * m2 + 6.0 * s2) + 1.0);
      c.drift(1) = -(27.0 * e2 * s8 + s4 * (15.0 * e2 * m4 + 12.0 * e * m2 + 1.0) +
                     9.0 * e * s6 * (6.0 * e * m2 + 1.0) - 1.0) / (2.0 * s);
      c.diffusion = {b1_hel, b2};
      break;
    case FilterKind::jet_l2:
      c.drift(0) = -0.25 * m * s2 * (3.0 * e2 * (4.0 * m4 - 4.0 * s2 * m2 - 9.0 * s4) + 16.0 * e * m2 + 4.0);
      c.drift(1) = (3.0 * e2 * s8 - 4.0 * s4 * (15.0 * e2 * m4 + 12.0 * e * m2 + 1.0) -
                    2.0 * e * s6 * (15.0 * e * m2 + 2.0) + 4.0) / (8.0 * s);
      c.diffusion = {b1_l2, b2};
      break;
    case FilterKind::jet_hellinger:
      c.drift(0) = -m * s2 * (3.0 * e2 * (m4 + 4.0 * s2 * m2 + 3.0 * s4) + e * (4.0 * m2 + 6.0 * s2) + 1.0);
      c.drift(1) = -(18.0 * e2 * s8 + s4 * (15.0 * e2 * m4 + 12.0 * e * m2 + 1.0) +
                     3.0 * e * s6 * (15.0 * e * m2 + 2.0) - 1.0) / (2.0 * s);
      c.diffusion = {b1_hel, b2};
      break;
    case FilterKind::strat_l2:
      c.drift(0) = -0.25 * m * s2 * (3.0 * e2 * (4.0 * m4 - 4.0 * s2 * m2 - 3.0 * s4) + 16.0 * e * m2 + 4.0);
      c.drift(1) = -(47.0 * e2 * s8 + s4 * (60.0 * e2 * m4 + 48.0 * e * m2 + 4.0) +
                     2.0 * e * s6 * (33.0 * e * m2 + 8.0) - 4.0) / (8.0 * s);
      c.diffusion = {b1_l2, b2};
      break;
    case FilterKind::strat_hellinger:
      c.drift(0) = -m * s2 * (3.0 * e2 * (m4 + 4.0 * s2 * m2 + 6.0 * s4) + e * (4.0 * m2 + 6.0 * s2) + 1.0);
      c.drift(1) = -(36.0 * e2 * s8 + s4 * (15.0 * e2 * m4 + 12.0 * e * m2 + 1.0) +
                     9.0 * e * s6 * (6.0 * e * m2 + 1.0) - 1.0) / (2.0 * s);
      c.diffusion = {b1_hel, b2};
      break;
    case FilterKind::ito_adf:
      c.drift(0) = -m * s2 * (3.0 * e2 * (m4 + 4.0 * s2 * m2 + 3.0 * s4) + e * (4.0 * m2 + 6.0 * s2) + 1.0);
      c.drift(1) = -(9.0 * e2 * s8 + s4 * (15.0 * e2 * m4 + 12.0 * e * m2 + 1.0) +
                     3.0 * e * s6 * (15.0 * e * m2 + 2.0) - 1.0) / (2.0 * s);
      c.diffusion = {b1_hel, b2};
      break;
    case FilterKind::ekf: {
      const double slope = 3.0 * e * m2 + 1.0;  // b'(mean)
      c.drift(0) = -s2 * slope * (m + e * m2 * m);
      c.drift(1) = (1.0 - s4 * slope * slope) / (2.0 * s);
      c.diffusion = {s2 * slope, 0.0};
      break;
    }
    default:
      throw InvalidArgumentError("closed_form_coefficients: unknown filter kind");
  }
  return c;
}

}  // namespace sdeproj
