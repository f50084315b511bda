#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdeproj/noise.hpp"
#include "sdeproj/sde.hpp"

namespace sdeproj {

/// Scalar signal dX = f dt + sigma dW observed through dY = b(X) dt + dV.
struct FilterModel {
  std::function<double(double x, double t)> drift_f;
  std::function<double(double x, double t)> sigma;
  std::function<double(double x, double t)> obs_b;
  /// Cubic-sensor nonlinearity; the closed-form filters exist only for the
  /// cubic sensor.
  std::optional<double> epsilon;
  std::string name;

  /// f = 0, sigma = 1, b(x) = x + eps x^3.
  static FilterModel cubic_sensor(double eps);
  bool is_cubic_sensor() const { return epsilon.has_value(); }
};

/// Gaussian family member: mean theta1 and standard deviation theta2.
struct GaussianParams {
  double theta1 = 0.0;
  double theta2 = 1.0;

  /// Throws InvalidArgumentError unless theta2 > theta_min and both finite.
  void validate(double theta_min = 0.0) const;
  double density(double x) const;
};

/// Node values of a density on a uniform grid.
struct DensityGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  int n_cells = 1000;
  Vector values;  // n_cells + 1 entries

  static DensityGrid uniform(double x_min, double x_max, int n_cells);
  static DensityGrid from_gaussian(double x_min, double x_max, int n_cells, const GaussianParams& theta);

  double dx() const { return (x_max - x_min) / n_cells; }
  double node(int i) const { return x_min + i * dx(); }
  Vector nodes() const;
  /// Trapezoidal integral of g(x) p(x).
  double integrate(const Vector& g) const;
  double mass() const;
  void normalize();
  double mean() const;
  double variance() const;
};

struct ObservationRecord {
  double dt = 0.0;
  std::vector<double> increments;
  std::optional<SamplePath> signal;

  void validate() const;
  std::size_t n_steps() const { return increments.size(); }
};

/// Euler-Maruyama signal and its observation increments. Noise component 0
/// drives the signal, component 1 the observation.
ObservationRecord simulate_signal_observation(const FilterModel& model, double x0, double horizon,
                                              double dt, const NoiseSource& noise);

/// E b(X) for X ~ N(theta1, theta2^2) under the cubic sensor.
double gaussian_moment_b(const GaussianParams& theta, double eps);

enum class FilterKind {
  vec_l2,
  vec_hellinger,
  jet_l2,
  jet_hellinger,
  strat_l2,
  strat_hellinger,
  ekf,
  ito_adf,
};

const std::vector<FilterKind>& all_filter_kinds();
std::string to_string(FilterKind kind);
FilterKind parse_filter_kind(const std::string& name);

/// Coefficients of the filter SDE d theta = A dt + B dY.
struct FilterCoefficients {
  Eigen::Vector2d drift;
  Eigen::Vector2d diffusion;
};

/// Hand-derived cubic-sensor filters. strat_hellinger also serves as the
/// Stratonovich assumed-density filter, which coincides with it.
FilterCoefficients closed_form_coefficients(FilterKind kind, const GaussianParams& theta, double eps);

}  // namespace sdeproj
