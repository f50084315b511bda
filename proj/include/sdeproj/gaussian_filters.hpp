#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sdeproj/gaussian_family.hpp"

namespace sdeproj {

/// Coefficients rebuilt at every step by projecting the filter equation.
struct NumericCoefficientSpec {
  DensityMetric metric = DensityMetric::l2;
  ProjectionKind kind = ProjectionKind::ito_vector;
  QuadratureSpec quadrature;
};

/// Either a closed-form cubic-sensor filter or a numeric projection.
using CoefficientSource = std::variant<FilterKind, NumericCoefficientSpec>;

std::string describe(const CoefficientSource& source);

struct FilterOptions {
  double theta_min = 1e-3;
  /// Fraction of floored steps above which the run is flagged degenerate.
  double degenerate_fraction = 0.01;
};

struct FilterRun {
  std::vector<GaussianParams> thetas;  // n_steps + 1 entries
  std::vector<std::size_t> floor_steps;  // steps at which theta2 was floored
  bool degenerate = false;
  std::string warning;
};

/// Coefficients of the filter SDE at theta for the given source.
FilterCoefficients filter_coefficients(const CoefficientSource& source, const GaussianParams& theta,
                                       const FilterModel& model, double t);

/// Euler-Maruyama in the observation increments:
/// theta_{k+1} = theta_k + A dt + B dY_k, with theta2 floored at theta_min.
FilterRun run_filter(const CoefficientSource& source, const FilterModel& model, const ObservationRecord& record,
                     const GaussianParams& theta0, const FilterOptions& options = {});

}  // namespace sdeproj
