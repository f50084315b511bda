#pragma once

#include <functional>
#include <vector>

#include "sdeproj/linalg.hpp"
#include "sdeproj/noise.hpp"

namespace sdeproj {

using DriftFn = std::function<Vector(const Vector& x, double t)>;
using DiffusionFn = std::function<Matrix(const Vector& x, double t)>;
/// Returns m matrices; entry alpha holds d b_alpha^i / d x^j at (i, j).
using DiffusionJacobianFn = std::function<Tensor3(const Vector& x, double t)>;

/// Ito SDE dX = a(X,t) dt + b_alpha(X,t) dW^alpha in R^r.
struct AmbientSde {
  int dim_state = 0;
  int dim_noise = 0;
  DriftFn drift;
  DiffusionFn diffusion;  // r x m, column alpha is b_alpha
  DiffusionJacobianFn diffusion_jacobian;  // optional

  Vector eval_drift(const Vector& x, double t) const;
  Matrix eval_diffusion(const Vector& x, double t) const;
  /// Analytic Jacobian when present, otherwise central differences.
  Tensor3 eval_diffusion_jacobian(const Vector& x, double t) const;
  void validate() const;
};

struct SamplePath {
  std::vector<double> times;
  std::vector<Vector> states;
};

/// Central-difference Jacobian of the diffusion field.
Tensor3 fd_diffusion_jacobian(const DiffusionFn& diffusion, int m, const Vector& x, double t);

/// Euler-Maruyama driven by a NoiseSource.
SamplePath euler_maruyama(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                          long n_steps, const NoiseSource& noise);

/// Euler-Maruyama driven by explicit increments (n_steps x m). Used when
/// several integrators must share one Brownian path.
SamplePath euler_maruyama(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                          const Matrix& increments);

/// Terminal state only; avoids storing the path in Monte Carlo loops.
Vector euler_maruyama_terminal(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                               const Matrix& increments);

/// a - 1/2 sum_alpha (Db_alpha) b_alpha
Vector ito_to_stratonovich_drift(const AmbientSde& sde, const Vector& x, double t);
/// abar + 1/2 sum_alpha (Db_alpha) b_alpha, with abar taken from sde.drift.
Vector stratonovich_to_ito_drift(const AmbientSde& sde, const Vector& x, double t);

/// The SDE with its drift replaced by the Stratonovich drift; used by the
/// round-trip check and by callers that want a Stratonovich-form record.
AmbientSde with_stratonovich_drift(const AmbientSde& sde);

}  // namespace sdeproj
