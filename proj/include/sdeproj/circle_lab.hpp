#pragma once

#include <utility>
#include <vector>

#include "sdeproj/projection.hpp"

namespace sdeproj {

/// dX = sigma Y dW, dY = sigma X dW started at (x0, y0).
struct CrossDiffusionSpec {
  double sigma = 1.0;
  double x0 = 1.0;
  double y0 = 0.0;

  void validate(bool angular = false) const;
};

AmbientSde cross_diffusion_sde(const CrossDiffusionSpec& spec);

/// Closed-form state at time t given the Brownian value w = W_t.
Eigen::Vector2d exact_solution(const CrossDiffusionSpec& spec, double w, double t);

struct ScalarCoefficients {
  double drift = 0.0;
  double diffusion = 0.0;
};

/// Drift and diffusion of the angle of the cross-diffusion.
ScalarCoefficients exact_angular_coefficients(double theta, double sigma);

/// Ito-jet projection onto the unit circle of dX = a dt + b dW in the plane
/// with a single noise, at angle theta.
ScalarCoefficients bivariate_circle_closed_form(double theta, double a1, double a2, double b11, double b12);

/// Planar SDE with constant-coefficient affine drift and diffusion, one noise:
/// a = a0 + a_lin x, b = b0 + b_lin x.
struct AffinePlanarSde {
  Eigen::Vector2d a0{0.3, 0.2};
  Eigen::Matrix2d a_lin{{-0.5, 0.0}, {0.0, -0.4}};
  Eigen::Vector2d b0{0.6, 0.4};
  Eigen::Matrix2d b_lin{{0.0, 0.2}, {-0.3, 0.0}};

  AmbientSde sde() const;
};

/// Angle of (x, y) continued from a reference angle, so successive values
/// never jump by 2 pi.
double unwrap_angle(double x, double y, double reference);

struct MseRow {
  double t = 0.0;
  double ambient_mse = 0.0;   // E|X_t - phi(Y_t)|^2
  double tracking_mse = 0.0;  // E|nearest chart point of X_t - Y_t|^2
  long n_paths = 0;
  long n_blowups = 0;
};

struct MseGrowthResult {
  std::vector<MseRow> rows;
  double ambient_slope = 0.0;
  double tracking_slope = 0.0;
  long total_blowups = 0;
};

struct MseGrowthOptions {
  std::vector<double> t_levels;
  long n_paths = 10000;
  long substeps = 64;  // Euler steps per horizon
  std::uint64_t seed = 0;
  double theta0 = 0.3;
  int jobs = 1;
};

/// Starts X on the unit circle at angle theta0 and Y at theta0, drives both
/// with the same noise and measures how fast they drift apart. Each horizon
/// is simulated afresh with dt = t / substeps so time-discretization error
/// shrinks with t.
MseGrowthResult mse_growth_experiment(ProjectionKind kind, const AmbientSde& planar,
                                      const MseGrowthOptions& options);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sdeproj
