#include "sdeproj/ks_solver.hpp"

#include <cmath>

#include "sdeproj/errors.hpp"

namespace sdeproj {

double ks_stable_dt(const DensityGrid& p, const FilterModel& model, double t) {
  double max_s2 = 0.0;
  for (int i = 0; i <= p.n_cells; ++i) {
    const double s = model.sigma(p.node(i), t);
    max_s2 = std::max(max_s2, s * s);
  }
  if (max_s2 == 0.0) return std::numeric_limits<double>::infinity();
  return p.dx() * p.dx() / max_s2;
}

KsStepReport ks_fd_step_detailed(const DensityGrid& p, const FilterModel& model, double t, double dt,
                                 double dY, KsCorrection correction) {
  if (!(dt > 0.0)) throw InvalidArgumentError("ks_fd_step: dt must be positive");
  if (p.values.size() != p.n_cells + 1) throw InvalidArgumentError("ks_fd_step: grid size mismatch");
  // Relative slack so the documented boundary case dt == dx^2 / sigma^2 passes.
  const double limit = ks_stable_dt(p, model, t);
  if (dt > limit * (1.0 + 1e-12))
    throw InvalidArgumentError("ks_fd_step: dt = " + std::to_string(dt) + " exceeds the stability limit " +
                               std::to_string(limit));
  const int n = p.n_cells;
  const double dx = p.dx();
  Vector fp(n + 1), s2p(n + 1), b(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = p.node(i);
    const double s = model.sigma(x, t);
    fp(i) = model.drift_f(x, t) * p.values(i);
    s2p(i) = s * s * p.values(i);
    b(i) = model.obs_b(x, t);
  }
  const double eb = p.integrate(b);
  KsStepReport out;
  out.density = p;
  Vector& q = out.density.values;
  q(0) = 0.0;
  q(n) = 0.0;
  for (int i = 1; i < n; ++i) {
    const double lp = -(fp(i + 1) - fp(i - 1)) / (2.0 * dx) + 0.5 * (s2p(i + 1) - 2.0 * s2p(i) + s2p(i - 1)) / (dx * dx);
    const double c = b(i) - eb;
    const double gain = correction == KsCorrection::euler ? c * (dY - eb * dt)
                                                          : std::expm1(c * (dY - eb * dt) - 0.5 * c * c * dt);
    q(i) = p.values(i) + lp * dt + p.values(i) * gain;
  }
  if (!q.allFinite()) throw NumericalBlowupError("ks_fd_step: non-finite density", 0);
  for (int i = 0; i <= n; ++i)
    if (q(i) < 0.0) {
      q(i) = 0.0;
      ++out.clamped_nodes;
    }
  out.mass_before_normalization = out.density.mass();
  out.density.normalize();
  return out;
}

DensityGrid ks_fd_step(const DensityGrid& p, const FilterModel& model, double t, double dt, double dY,
                       KsCorrection correction) {
  return ks_fd_step_detailed(p, model, t, dt, dY, correction).density;
}

namespace {

template <class Transform>
double residual(const DensityGrid& p, const GaussianParams& theta, Transform tr) {
  theta.validate();
  Vector d(p.n_cells + 1);
  for (int i = 0; i <= p.n_cells; ++i) {
    const double diff = tr(p.values(i)) - tr(theta.density(p.node(i)));
    d(i) = diff * diff;
  }
  const double integral = p.dx() * (d.sum() - 0.5 * (d(0) + d(p.n_cells)));
  return std::sqrt(std::max(0.0, integral));
}

}  // namespace

double l2_residual(const DensityGrid& p, const GaussianParams& theta) {
  return residual(p, theta, [](double v) { return v; });
}

double hellinger_residual(const DensityGrid& p, const GaussianParams& theta) {
  return residual(p, theta, [](double v) { return std::sqrt(std::max(0.0, v)); });
}

}  // namespace sdeproj
