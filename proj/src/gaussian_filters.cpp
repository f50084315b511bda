#include "sdeproj/gaussian_filters.hpp"

#include <cmath>

#include "sdeproj/errors.hpp"

namespace sdeproj {

std::string describe(const CoefficientSource& source) {
  if (const auto* k = std::get_if<FilterKind>(&source)) return to_string(*k);
  const auto& spec = std::get<NumericCoefficientSpec>(source);
  return "numeric_" + to_string(spec.kind) + "_" + to_string(spec.metric);
}

FilterCoefficients filter_coefficients(const CoefficientSource& source, const GaussianParams& theta,
                                       const FilterModel& model, double t) {
  if (const auto* k = std::get_if<FilterKind>(&source)) {
    if (!model.is_cubic_sensor())
      throw InvalidArgumentError("closed-form filters are only available for the cubic sensor");
    return closed_form_coefficients(*k, theta, *model.epsilon);
  }
  const auto& spec = std::get<NumericCoefficientSpec>(source);
  return numeric_projection_coefficients(spec.metric, spec.kind, theta, model, spec.quadrature, t);
}

FilterRun run_filter(const CoefficientSource& source, const FilterModel& model, const ObservationRecord& record,
                     const GaussianParams& theta0, const FilterOptions& options) {
  if (!(options.theta_min > 0.0)) throw InvalidArgumentError("run_filter: theta_min must be positive");
  theta0.validate(options.theta_min);
  record.validate();
  FilterRun run;
  run.thetas.reserve(record.n_steps() + 1);
  run.thetas.push_back(theta0);
  GaussianParams th = theta0;
  for (std::size_t k = 0; k < record.n_steps(); ++k) {
    const double t = static_cast<double>(k) * record.dt;
    const FilterCoefficients c = filter_coefficients(source, th, model, t);
    const double dy = record.increments[k];
    GaussianParams next{th.theta1 + c.drift(0) * record.dt + c.diffusion(0) * dy,
                        th.theta2 + c.drift(1) * record.dt + c.diffusion(1) * dy};
    if (!std::isfinite(next.theta1) || !std::isfinite(next.theta2))
      throw NumericalBlowupError("run_filter: non-finite parameters", k);
    if (next.theta2 < options.theta_min) {
      next.theta2 = options.theta_min;
      run.floor_steps.push_back(k);
    }
    th = next;
    run.thetas.push_back(th);
  }
  if (record.n_steps() > 0 &&
      static_cast<double>(run.floor_steps.size()) > options.degenerate_fraction * static_cast<double>(record.n_steps())) {
    run.degenerate = true;
    run.warning = "standard deviation floored on " + std::to_string(run.floor_steps.size()) + " of " +
                  std::to_string(record.n_steps()) + " steps";
  }
  return run;
}

}  // namespace sdeproj
