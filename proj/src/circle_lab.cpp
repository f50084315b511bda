#include "sdeproj/circle_lab.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "sdeproj/embeddings.hpp"
#include "sdeproj/errors.hpp"

namespace sdeproj {

void CrossDiffusionSpec::validate(bool angular) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgumentError("cross diffusion: sigma must be positive");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw InvalidArgumentError("cross diffusion: non-finite start");
  if (angular && x0 == 0.0 && y0 == 0.0)
    throw InvalidArgumentError("cross diffusion: the origin has no angle");
}

AmbientSde cross_diffusion_sde(const CrossDiffusionSpec& spec) {
  spec.validate();
  const double s = spec.sigma;
  AmbientSde sde;
  sde.dim_state = 2;
  sde.dim_noise = 1;
  sde.drift = [](const Vector&, double) { return Vector::Zero(2).eval(); };
  sde.diffusion = [s](const Vector& x, double) {
    Matrix b(2, 1);
    b << s * x(1), s * x(0);
    return b;
  };
  sde.diffusion_jacobian = [s](const Vector&, double) {
    Matrix j(2, 2);
    j << 0.0, s, s, 0.0;
    return Tensor3{j};
  };
  return sde;
}

Eigen::Vector2d exact_solution(const CrossDiffusionSpec& spec, double w, double t) {
  if (t < 0.0) throw InvalidArgumentError("exact_solution: t must be >= 0");
  const double decay = std::exp(-0.5 * spec.sigma * spec.sigma * t);
  const double ch = std::cosh(spec.sigma * w), sh = std::sinh(spec.sigma * w);
  return {decay * (spec.x0 * ch + spec.y0 * sh), decay * (spec.y0 * ch + spec.x0 * sh)};
}

ScalarCoefficients exact_angular_coefficients(double theta, double sigma) {
  return {-0.5 * sigma * sigma * std::sin(4.0 * theta), sigma * std::cos(2.0 * theta)};
}

ScalarCoefficients bivariate_circle_closed_form(double theta, double a1, double a2, double b11, double b12) {
  const double s = std::sin(theta), c = std::cos(theta);
  return {-a1 * s + a2 * c + 0.5 * std::sin(2.0 * theta) * (b11 * b11 - b12 * b12) - std::cos(2.0 * theta) * b11 * b12,
          -b11 * s + b12 * c};
}

AmbientSde AffinePlanarSde::sde() const {
  AmbientSde out;
  out.dim_state = 2;
  out.dim_noise = 1;
  const Eigen::Vector2d ca0 = a0, cb0 = b0;
  const Eigen::Matrix2d cal = a_lin, cbl = b_lin;
  out.drift = [ca0, cal](const Vector& x, double) -> Vector { return ca0 + cal * x; };
  out.diffusion = [cb0, cbl](const Vector& x, double) -> Matrix { return cb0 + cbl * x; };
  out.diffusion_jacobian = [cbl](const Vector&, double) { return Tensor3{Matrix(cbl)}; };
  return out;
}

double unwrap_angle(double x, double y, double reference) {
  // Rotate by -reference so the branch cut sits opposite the reference.
  const double c = std::cos(reference), s = std::sin(reference);
  return reference + std::atan2(c * y - s * x, c * x + s * y);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgumentError("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgumentError("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MseGrowthResult mse_growth_experiment(ProjectionKind kind, const AmbientSde& planar,
                                      const MseGrowthOptions& opt) {
  if (planar.dim_state != 2) throw InvalidArgumentError("mse_growth_experiment: planar SDE required");
  if (opt.t_levels.size() < 4) throw InvalidArgumentError("mse_growth_experiment: need at least 4 levels");
  for (std::size_t i = 0; i < opt.t_levels.size(); ++i)
    if (!(opt.t_levels[i] > 0.0) || (i && !(opt.t_levels[i] > opt.t_levels[i - 1])))
      throw InvalidArgumentError("mse_growth_experiment: t_levels must be positive and increasing");
  if (opt.n_paths < 1 || opt.substeps < 1) throw InvalidArgumentError("mse_growth_experiment: bad sizes");

  const Embedding circle = embeddings::circle();
  const AmbientSde chart = project(kind, planar, circle).as_ambient();
  const Vector x0 = circle.phi(Vector::Constant(1, opt.theta0));
  const Vector y0 = Vector::Constant(1, opt.theta0);

  MseGrowthResult result;
  for (std::size_t level = 0; level < opt.t_levels.size(); ++level) {
    const double t = opt.t_levels[level];
    const double dt = t / static_cast<double>(opt.substeps);
    // Per-path squared errors; NaN marks a blowup. Summed in path order
    // afterwards so the result does not depend on the worker count.
    std::vector<double> amb(opt.n_paths), trk(opt.n_paths);
    auto work = [&](long begin, long end) {
      for (long p = begin; p < end; ++p) {
        const NoiseSource noise{opt.seed, (static_cast<std::uint64_t>(level) << 40) | static_cast<std::uint64_t>(p)};
        const Matrix inc = brownian_increments(noise, planar.dim_noise, opt.substeps, dt);
        try {
          const Vector x = euler_maruyama_terminal(planar, x0, 0.0, dt, inc);
          const Vector y = euler_maruyama_terminal(chart, y0, 0.0, dt, inc);
          amb[p] = (x - circle.phi(y)).squaredNorm();
          const double d = unwrap_angle(x(0), x(1), y(0)) - y(0);
          trk[p] = d * d;
        } catch (const NumericalBlowupError&) {
          amb[p] = trk[p] = std::numeric_limits<double>::quiet_NaN();
        }
      }
    };
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
      work(0, opt.n_paths);
    } else {
      std::vector<std::thread> pool;
      const long chunk = (opt.n_paths + jobs - 1) / jobs;
      for (int j = 0; j < jobs; ++j) {
        const long b = j * chunk, e = std::min(opt.n_paths, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
      for (auto& th : pool) th.join();
    }
    MseRow row;
    row.t = t;
    double sa = 0.0, st = 0.0;
    for (long p = 0; p < opt.n_paths; ++p) {
      if (std::isnan(amb[p])) {
        ++row.n_blowups;
        continue;
      }
      sa += amb[p];
      st += trk[p];
      ++row.n_paths;
    }
    if (row.n_paths == 0) throw NumericalBlowupError("mse_growth_experiment: every path blew up", 0);
    row.ambient_mse = sa / static_cast<double>(row.n_paths);
    row.tracking_mse = st / static_cast<double>(row.n_paths);
    result.total_blowups += row.n_blowups;
    result.rows.push_back(row);
  }
  std::vector<double> ts, am, tm;
  for (const auto& r : result.rows) {
    ts.push_back(r.t);
    am.push_back(r.ambient_mse);
    tm.push_back(r.tracking_mse);
  }
  result.ambient_slope = loglog_slope(ts, am);
  result.tracking_slope = loglog_slope(ts, tm);
  return result;
}

}  // namespace sdeproj
