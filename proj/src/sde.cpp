#include "sdeproj/sde.hpp"

#include <string>

#include "sdeproj/errors.hpp"

namespace sdeproj {

Vector AmbientSde::eval_drift(const Vector& x, double t) const {
  Vector a = drift(x, t);
  if (a.size() != dim_state)
    throw InvalidArgumentError("drift returned " + std::to_string(a.size()) +
                               " components, expected " + std::to_string(dim_state));
  return a;
}

Matrix AmbientSde::eval_diffusion(const Vector& x, double t) const {
  Matrix b = diffusion(x, t);
  if (b.rows() != dim_state || b.cols() != dim_noise)
    throw InvalidArgumentError("diffusion returned a " + std::to_string(b.rows()) + "x" +
                               std::to_string(b.cols()) + " matrix, expected " +
                               std::to_string(dim_state) + "x" + std::to_string(dim_noise));
  return b;
}

Tensor3 AmbientSde::eval_diffusion_jacobian(const Vector& x, double t) const {
  if (!diffusion_jacobian) return fd_diffusion_jacobian(diffusion, dim_noise, x, t);
  Tensor3 j = diffusion_jacobian(x, t);
  if (static_cast<int>(j.size()) != dim_noise)
    throw InvalidArgumentError("diffusion_jacobian returned the wrong number of slices");
  for (const auto& s : j)
    if (s.rows() != dim_state || s.cols() != dim_state)
      throw InvalidArgumentError("diffusion_jacobian slice has the wrong shape");
  return j;
}

void AmbientSde::validate() const {
  if (dim_state < 1 || dim_noise < 1)
    throw InvalidArgumentError("AmbientSde: dimensions must be positive");
  if (!drift || !diffusion) throw InvalidArgumentError("AmbientSde: drift and diffusion required");
}

Tensor3 fd_diffusion_jacobian(const DiffusionFn& diffusion, int m, const Vector& x, double t) {
  const int r = static_cast<int>(x.size());
  Tensor3 out(m, Matrix::Zero(r, r));
  Vector xp = x, xm = x;
  for (int j = 0; j < r; ++j) {
    const double h = fd_step(x(j));
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    const Matrix diff = (diffusion(xp, t) - diffusion(xm, t)) / (xp(j) - xm(j));
    for (int a = 0; a < m; ++a) out[a].col(j) = diff.col(a);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return out;
}

namespace {

template <class Visit>
Vector integrate(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                 const Matrix& increments, Visit&& visit) {
  sde.validate();
  if (!(dt > 0.0)) throw InvalidArgumentError("euler_maruyama: dt must be positive");
  if (x0.size() != sde.dim_state) throw InvalidArgumentError("euler_maruyama: x0 has wrong size");
  if (increments.cols() != sde.dim_noise)
    throw InvalidArgumentError("euler_maruyama: increments have wrong width");
  Vector x = x0;
  for (long k = 0; k < increments.rows(); ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const Vector a = sde.eval_drift(x, t);
    const Matrix b = sde.eval_diffusion(x, t);
    if (!a.allFinite() || !b.allFinite())
      throw NumericalBlowupError("euler_maruyama: non-finite coefficient", static_cast<std::size_t>(k));
    x += a * dt + b * increments.row(k).transpose();
    if (!x.allFinite())
      throw NumericalBlowupError("euler_maruyama: non-finite state", static_cast<std::size_t>(k));
    visit(t0 + static_cast<double>(k + 1) * dt, x);
  }
  return x;
}

}  // namespace

SamplePath euler_maruyama(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                          const Matrix& increments) {
  SamplePath path;
  path.times.reserve(increments.rows() + 1);
  path.states.reserve(increments.rows() + 1);
  path.times.push_back(t0);
  path.states.push_back(x0);
  integrate(sde, x0, t0, dt, increments, [&](double t, const Vector& x) {
    path.times.push_back(t);
    path.states.push_back(x);
  });
  return path;
}

SamplePath euler_maruyama(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                          long n_steps, const NoiseSource& noise) {
  if (!(dt > 0.0)) throw InvalidArgumentError("euler_maruyama: dt must be positive");
  sde.validate();
  return euler_maruyama(sde, x0, t0, dt, brownian_increments(noise, sde.dim_noise, n_steps, dt));
}

Vector euler_maruyama_terminal(const AmbientSde& sde, const Vector& x0, double t0, double dt,
                               const Matrix& increments) {
  return integrate(sde, x0, t0, dt, increments, [](double, const Vector&) {});
}

namespace {

Vector ito_correction(const AmbientSde& sde, const Vector& x, double t) {
  const Matrix b = sde.eval_diffusion(x, t);
  const Tensor3 db = sde.eval_diffusion_jacobian(x, t);
  Vector c = Vector::Zero(sde.dim_state);
  for (int a = 0; a < sde.dim_noise; ++a) c += db[a] * b.col(a);
  return 0.5 * c;
}

}  // namespace

Vector ito_to_stratonovich_drift(const AmbientSde& sde, const Vector& x, double t) {
  return sde.eval_drift(x, t) - ito_correction(sde, x, t);
}

Vector stratonovich_to_ito_drift(const AmbientSde& sde, const Vector& x, double t) {
  return sde.eval_drift(x, t) + ito_correction(sde, x, t);
}

AmbientSde with_stratonovich_drift(const AmbientSde& sde) {
  AmbientSde out = sde;
  out.drift = [sde](const Vector& x, double t) { return ito_to_stratonovich_drift(sde, x, t); };
  return out;
}

}  // namespace sdeproj
