#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdeproj/errors.hpp"
#include "sdeproj/gaussian_filters.hpp"
#include "sdeproj/ks_solver.hpp"

using namespace sdeproj;

namespace {

const double kPi = 3.14159265358979323846;

// Gaussian assumed-density filter from the moment equations
//   dm = C (dY - E b dt),  dP = (1 - C^2) dt + K (dY - E b dt)
// with C = Cov(X, b), K = E[(X - m)^2 (b - E b)], rewritten for the
// standard deviation by Ito's formula.
FilterCoefficients moment_adf(double m, double s, double eps) {
  const double eb = m + eps * (m * m * m + 3.0 * m * s * s);
  const double c = s * s * (1.0 + 3.0 * eps * (m * m + s * s));
  const double k = 6.0 * eps * m * s * s * s * s;
  FilterCoefficients out;
  out.drift(0) = -c * eb;
  out.diffusion(0) = c;
  out.diffusion(1) = k / (2.0 * s);
  out.drift(1) = (1.0 - c * c) / (2.0 * s) - out.diffusion(1) * eb - k * k / (8.0 * s * s * s);
  return out;
}

FilterModel ou_model() {
  // dX = -X dt + sqrt(2) dW with an uninformative observation.
  FilterModel m;
  m.drift_f = [](double x, double) { return -x; };
  m.sigma = [](double, double) { return std::sqrt(2.0); };
  m.obs_b = [](double, double) { return 0.0; };
  m.name = "ou";
  return m;
}

ObservationRecord zero_record(double dt, std::size_t n) {
  ObservationRecord r;
  r.dt = dt;
  r.increments.assign(n, 0.0);
  return r;
}

}  // namespace

TEST(GaussianMoment, MatchesQuadrature) {
  for (double m : {-0.7, 0.0, 1.3})
    for (double s : {0.5, 1.5}) {
      const DensityGrid g = DensityGrid::from_gaussian(-20.0, 20.0, 20000, {m, s});
      Vector b(g.n_cells + 1);
      for (int i = 0; i <= g.n_cells; ++i) b(i) = g.node(i) + 0.3 * std::pow(g.node(i), 3);
      EXPECT_NEAR(gaussian_moment_b({m, s}, 0.3), g.integrate(b), 1e-6);
    }
}

TEST(FilterKinds, NamesRoundTrip) {
  EXPECT_EQ(all_filter_kinds().size(), 8u);
  for (auto k : all_filter_kinds()) EXPECT_EQ(parse_filter_kind(to_string(k)), k);
  EXPECT_EQ(parse_filter_kind("strat_adf"), FilterKind::strat_hellinger);
  EXPECT_THROW(parse_filter_kind("ukf"), InvalidArgumentError);
}

TEST(ClosedForms, LinearSensorReducesToKalman) {
  for (double m : {-1.0, 0.3, 2.0})
    for (double s : {0.4, 1.0, 1.7})
      for (auto k : all_filter_kinds()) {
        const auto c = closed_form_coefficients(k, {m, s}, 0.0);
        EXPECT_NEAR(c.drift(0), -m * s * s, 1e-14) << to_string(k);
        EXPECT_NEAR(c.drift(1), (1.0 - s * s * s * s) / (2.0 * s), 1e-14) << to_string(k);
        EXPECT_NEAR(c.diffusion(0), s * s, 1e-14) << to_string(k);
        EXPECT_NEAR(c.diffusion(1), 0.0, 1e-14) << to_string(k);
      }
}

TEST(ClosedForms, ItoAdfMatchesMomentEquations) {
  for (double eps : {0.05, 0.5})
    for (double m : {-1.0, 0.2, 0.9})
      for (double s : {0.5, 1.1, 2.0}) {
        const auto c = closed_form_coefficients(FilterKind::ito_adf, {m, s}, eps);
        const auto o = moment_adf(m, s, eps);
        EXPECT_NEAR(c.drift(0), o.drift(0), 1e-12 * (1 + std::abs(o.drift(0))));
        EXPECT_NEAR(c.drift(1), o.drift(1), 1e-12 * (1 + std::abs(o.drift(1))));
        EXPECT_NEAR(c.diffusion(0), o.diffusion(0), 1e-13);
        EXPECT_NEAR(c.diffusion(1), o.diffusion(1), 1e-13);
      }
}

TEST(ClosedForms, JetHellingerDiffersFromAdfOnlyAtSecondOrder) {
  for (double eps : {0.01, 0.05, 0.2})
    for (double s : {0.5, 1.0, 1.8}) {
      const GaussianParams th{0.4, s};
      const auto jet = closed_form_coefficients(FilterKind::jet_hellinger, th, eps);
      const auto adf = closed_form_coefficients(FilterKind::ito_adf, th, eps);
      EXPECT_NEAR(jet.drift(0), adf.drift(0), 1e-14);
      EXPECT_NEAR(jet.drift(1) - adf.drift(1), -4.5 * eps * eps * std::pow(s, 7), 1e-12);
      EXPECT_EQ(jet.diffusion, adf.diffusion);
    }
}

TEST(ClosedForms, ExtendedKalmanByHand) {
  const double m = 0.6, s = 0.8, eps = 0.1;
  const double slope = 1.0 + 3.0 * eps * m * m;
  const auto c = closed_form_coefficients(FilterKind::ekf, {m, s}, eps);
  EXPECT_NEAR(c.diffusion(0), s * s * slope, 1e-15);
  EXPECT_NEAR(c.drift(0), -s * s * slope * (m + eps * m * m * m), 1e-15);
  EXPECT_NEAR(c.drift(1), (1.0 - std::pow(s * s * slope, 2)) / (2.0 * s), 1e-15);
}

TEST(NumericCoefficients, AgreeWithClosedFormsAtSamplePoints) {
  const FilterModel model = FilterModel::cubic_sensor(0.05);
  const std::vector<std::pair<FilterKind, NumericCoefficientSpec>> pairs{
      {FilterKind::vec_l2, {DensityMetric::l2, ProjectionKind::ito_vector, {}}},
      {FilterKind::jet_hellinger, {DensityMetric::hellinger, ProjectionKind::ito_jet, {}}},
      {FilterKind::strat_l2, {DensityMetric::l2, ProjectionKind::stratonovich, {}}},
  };
  for (const auto& [kind, spec] : pairs)
    for (const GaussianParams th : {GaussianParams{0.3, 0.7}, GaussianParams{-0.9, 1.6}}) {
      const auto a = filter_coefficients(kind, th, model, 0.0);
      const auto b = filter_coefficients(spec, th, model, 0.0);
      const double scale = a.drift.norm() + a.diffusion.norm();
      EXPECT_LT(((a.drift - b.drift).norm() + (a.diffusion - b.diffusion).norm()) / scale, 1e-8) << to_string(kind);
    }
}

TEST(NumericCoefficients, ClosedFormNeedsCubicSensor) {
  EXPECT_THROW(filter_coefficients(FilterKind::ekf, {0.0, 1.0}, ou_model(), 0.0), InvalidArgumentError);
  EXPECT_NO_THROW(filter_coefficients(NumericCoefficientSpec{}, {0.0, 1.0}, ou_model(), 0.0));
}

TEST(KsSolver, StabilityLimit) {
  const DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.0, 1.0});
  const FilterModel m = FilterModel::cubic_sensor(0.05);
  EXPECT_NEAR(ks_stable_dt(g, m, 0.0), 0.0004, 1e-15);
  EXPECT_NO_THROW(ks_fd_step(g, m, 0.0, 0.0004, 0.0));
  EXPECT_THROW(ks_fd_step(g, m, 0.0, 0.001, 0.0), InvalidArgumentError);
}

TEST(KsSolver, MassIsNormalizedEveryStep) {
  const FilterModel m = FilterModel::cubic_sensor(0.05);
  DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.0, 1.0});
  const auto rec = simulate_signal_observation(m, 0.5, 0.2, 0.0002, {3, 0});
  for (std::size_t k = 0; k < rec.n_steps(); ++k) {
    g = ks_fd_step(g, m, k * rec.dt, rec.dt, rec.increments[k]);
    ASSERT_NEAR(g.mass(), 1.0, 1e-12);
  }
  EXPECT_GE(g.values.minCoeff(), 0.0);
}

TEST(KsSolver, StationaryDensityStaysPut) {
  const FilterModel m = ou_model();
  const DensityGrid start = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.0, 1.0});
  DensityGrid g = start;
  const double dt = 0.5 * ks_stable_dt(g, m, 0.0);
  for (int k = 0; k < 2000; ++k) g = ks_fd_step(g, m, k * dt, dt, 0.0);
  EXPECT_LT((g.values - start.values).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_NEAR(g.variance(), 1.0, 1e-3);
}

TEST(KsSolver, LinearSensorTracksKalmanBucy) {
  const FilterModel m = FilterModel::cubic_sensor(0.0);
  const auto rec = simulate_signal_observation(m, 0.8, 0.3, 0.0002, {12, 0});
  DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.0, 1.0});
  double mean = 0.0, var = 1.0, worst = 0.0;
  for (std::size_t k = 0; k < rec.n_steps(); ++k) {
    const double dy = rec.increments[k];
    g = ks_fd_step(g, m, k * rec.dt, rec.dt, dy);
    mean += var * (dy - mean * rec.dt);
    var += (1.0 - var * var) * rec.dt;
    worst = std::max({worst, std::abs(g.mean() - mean), std::abs(g.variance() - var)});
  }
  EXPECT_LT(worst, 5e-3);
}

TEST(KsSolver, StationaryInputIsUnchangedByEitherCorrection) {
  // f = 0 and sigma = 0 make L* vanish; dY = E b dt carries no information.
  FilterModel m = FilterModel::cubic_sensor(0.2);
  m.sigma = [](double, double) { return 0.0; };
  const DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.3, 0.8});
  Vector b(g.n_cells + 1);
  for (int i = 0; i <= g.n_cells; ++i) b(i) = m.obs_b(g.node(i), 0.0);
  const double dt = 1e-4;
  const double dy = g.integrate(b) * dt;
  const DensityGrid e = ks_fd_step(g, m, 0.0, dt, dy, KsCorrection::euler);
  EXPECT_LT((e.values - g.values).cwiseAbs().maxCoeff(), 1e-12);
  // The exponential form keeps a deterministic -c^2 dt / 2 tilt.
  const DensityGrid x = ks_fd_step(g, m, 0.0, dt, dy, KsCorrection::exponential);
  EXPECT_LT((x.values - g.values).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(KsSolver, CorrectionsAgreeToFirstOrder) {
  const FilterModel m = FilterModel::cubic_sensor(0.05);
  const DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.3, 0.8});
  for (double dt : {1e-4, 1e-5}) {
    const double dy = 0.7 * std::sqrt(dt);
    const auto e = ks_fd_step(g, m, 0.0, dt, dy, KsCorrection::euler);
    const auto x = ks_fd_step(g, m, 0.0, dt, dy, KsCorrection::exponential);
    // The gap is second order in the increment: O(dt) here.
    EXPECT_LT((e.values - x.values).cwiseAbs().maxCoeff(), 3.0 * dt);
  }
}

TEST(KsSolver, EulerCorrectionVarianceWandersOnLinearProblem) {
  // With b(x) = x one Euler correction maps the variance P to P - P^2 dY'^2
  // where the filter needs P - P^2 dt; the gap random walks with size
  // sqrt(2 T dt). The exponential correction has no such term.
  const FilterModel m = FilterModel::cubic_sensor(0.0);
  const auto rec = simulate_signal_observation(m, 0.5, 1.0, 0.0002, {7, 0});
  DensityGrid pe = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.0, 1.0}), px = pe;
  double worst_e = 0.0, worst_x = 0.0;
  for (std::size_t k = 0; k < rec.n_steps(); ++k) {
    pe = ks_fd_step(pe, m, k * rec.dt, rec.dt, rec.increments[k], KsCorrection::euler);
    px = ks_fd_step(px, m, k * rec.dt, rec.dt, rec.increments[k], KsCorrection::exponential);
    // Unit prior variance is a fixed point of the Riccati equation.
    worst_e = std::max(worst_e, std::abs(pe.variance() - 1.0));
    worst_x = std::max(worst_x, std::abs(px.variance() - 1.0));
  }
  EXPECT_GT(worst_e, 5e-3);
  EXPECT_LT(worst_x, 1e-3);
}

TEST(Residuals, ShiftedGaussianClosedForms) {
  for (double d : {0.3, 1.0, 2.5}) {
    const DensityGrid g = DensityGrid::from_gaussian(-15.0, 15.0, 6000, {0.0, 1.0});
    EXPECT_NEAR(l2_residual(g, {d, 1.0}), std::sqrt((1.0 - std::exp(-d * d / 4.0)) / std::sqrt(kPi)), 1e-6);
    EXPECT_NEAR(hellinger_residual(g, {d, 1.0}), std::sqrt(2.0 * (1.0 - std::exp(-d * d / 8.0))), 1e-6);
  }
  const DensityGrid g = DensityGrid::from_gaussian(-15.0, 15.0, 6000, {0.0, 1.0});
  // Bhattacharyya coefficient of two centered Gaussians.
  const double s = 2.0;
  EXPECT_NEAR(hellinger_residual(g, {0.0, s}), std::sqrt(2.0 * (1.0 - std::sqrt(2.0 * s / (1.0 + s * s)))), 1e-6);
  EXPECT_NEAR(l2_residual(g, {0.0, 1.0}), 0.0, 1e-12);
}

TEST(DensityGridOps, MomentsAndNormalization) {
  DensityGrid g = DensityGrid::from_gaussian(-10.0, 10.0, 1000, {0.4, 0.9});
  EXPECT_NEAR(g.mass(), 1.0, 1e-10);
  EXPECT_NEAR(g.mean(), 0.4, 1e-10);
  EXPECT_NEAR(g.variance(), 0.81, 1e-8);
  g.values *= 3.0;
  g.normalize();
  EXPECT_NEAR(g.mass(), 1.0, 1e-14);
  g.values.setZero();
  EXPECT_THROW(g.normalize(), DegenerateStateError);
}

TEST(Simulation, DeterministicAndShaped) {
  const FilterModel m = FilterModel::cubic_sensor(0.05);
  const auto a = simulate_signal_observation(m, 0.0, 0.1, 0.001, {5, 0});
  const auto b = simulate_signal_observation(m, 0.0, 0.1, 0.001, {5, 0});
  EXPECT_EQ(a.n_steps(), 100u);
  EXPECT_EQ(a.increments, b.increments);
  ASSERT_TRUE(a.signal.has_value());
  EXPECT_EQ(a.signal->states.size(), 101u);
  EXPECT_THROW(simulate_signal_observation(m, 0.0, 0.1, 0.03, {5, 0}), InvalidArgumentError);
}

TEST(RunFilter, NoObservationFollowsRiccatiOde) {
  const FilterModel model = FilterModel::cubic_sensor(0.0);
  const double p0 = 0.25, m0 = 1.0, dt = 1e-4;
  const auto run = run_filter(FilterKind::vec_hellinger, model, zero_record(dt, 10000), {m0, std::sqrt(p0)});
  const double a = std::atanh(p0);
  for (std::size_t k : {2500u, 10000u}) {
    const double t = k * dt;
    const double p = std::tanh(t + a);
    const double mean = m0 * std::cosh(a) / std::cosh(t + a);
    EXPECT_NEAR(run.thetas[k].theta2, std::sqrt(p), 2e-4);
    EXPECT_NEAR(run.thetas[k].theta1, mean, 2e-4);
  }
  EXPECT_FALSE(run.degenerate);
}

TEST(RunFilter, Deterministic) {
  const FilterModel model = FilterModel::cubic_sensor(0.05);
  const auto rec = simulate_signal_observation(model, 0.2, 0.5, 0.001, {2, 0});
  for (auto k : all_filter_kinds()) {
    const auto a = run_filter(k, model, rec, {0.0, 1.0});
    const auto b = run_filter(k, model, rec, {0.0, 1.0});
    ASSERT_EQ(a.thetas.size(), rec.n_steps() + 1);
    EXPECT_EQ(a.thetas.back().theta1, b.thetas.back().theta1);
    EXPECT_EQ(a.thetas.back().theta2, b.thetas.back().theta2);
  }
}

TEST(RunFilter, FloorsCollapsingStandardDeviation) {
  const FilterModel model = FilterModel::cubic_sensor(0.0);
  const auto run = run_filter(FilterKind::ekf, model, zero_record(0.5, 4), {0.0, 3.0});
  ASSERT_FALSE(run.floor_steps.empty());
  EXPECT_EQ(run.floor_steps.front(), 0u);
  EXPECT_GE(run.thetas[1].theta2, 1e-3);
  EXPECT_TRUE(run.degenerate);
  EXPECT_FALSE(run.warning.empty());
  EXPECT_THROW(run_filter(FilterKind::ekf, model, zero_record(0.5, 4), {0.0, 1e-4}), InvalidArgumentError);
}
