#pragma once

#include "sdeproj/filter_model.hpp"

namespace sdeproj {

/// Largest time step the explicit scheme accepts on this grid: dx^2 / max sigma^2.
double ks_stable_dt(const DensityGrid& p, const FilterModel& model, double t);

/// How the observation term enters the step.
enum class KsCorrection {
  /// p (1 + c (dY - E b dt)) with c = b - E b: the plain Euler increment.
  euler,
  /// p exp(c (dY - E b dt) - 1/2 c^2 dt): same first-order increment with
  /// the Ito correction folded in, so its quadratic part does not random
  /// walk. Positive by construction.
  exponential,
};

struct KsStepReport {
  DensityGrid density;
  double mass_before_normalization = 0.0;
  int clamped_nodes = 0;
};

/// One explicit step of the conditional-density equation
///   dp = L* p dt + p (b - E b)(dY - E b dt)
/// with L* p = -(f p)' + 1/2 (sigma^2 p)'' by central differences, zero
/// boundary values, negative values clamped and the result renormalized.
/// Prediction and correction are evaluated on the same input density and
/// summed.
KsStepReport ks_fd_step_detailed(const DensityGrid& p, const FilterModel& model, double t, double dt,
                                 double dY, KsCorrection correction = KsCorrection::exponential);
DensityGrid ks_fd_step(const DensityGrid& p, const FilterModel& model, double t, double dt, double dY,
                       KsCorrection correction = KsCorrection::exponential);

/// Trapezoidal L2 distance between p and the Gaussian at theta.
double l2_residual(const DensityGrid& p, const GaussianParams& theta);
/// Same for the square roots (no 1/2 factor).
double hellinger_residual(const DensityGrid& p, const GaussianParams& theta);

}  // namespace sdeproj
