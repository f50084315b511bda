#pragma once

#include <functional>
#include <string>

#include "sdeproj/manifold.hpp"
#include "sdeproj/sde.hpp"

namespace sdeproj {

/// dY = A(Y,t) dt + B_alpha(Y,t) dW^alpha in chart coordinates.
struct ChartSde {
  int dim_chart = 0;
  int dim_noise = 0;
  std::function<Vector(const Vector& y, double t)> drift;
  std::function<Matrix(const Vector& y, double t)> diffusion;  // n x m

  /// The same SDE viewed as an ambient SDE on R^n, for integration.
  AmbientSde as_ambient() const;
};

enum class ProjectionKind { stratonovich, ito_vector, ito_jet };

std::string to_string(ProjectionKind kind);
ProjectionKind parse_projection_kind(const std::string& name);

struct StratonovichOptions {
  /// Use central differences for the ambient diffusion Jacobian when the
  /// SDE supplies none.
  bool allow_finite_differences = true;
};

/// Drift and diffusion of a projected SDE at one chart point.
struct ChartCoefficients {
  Vector drift;      // n
  Matrix diffusion;  // n x m
};

ChartCoefficients ito_vector_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                          double t);
ChartCoefficients ito_jet_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                       double t);
ChartCoefficients stratonovich_coefficients(const AmbientSde& sde, const Embedding& emb, const Vector& y,
                                            double t, const StratonovichOptions& options = {});
ChartCoefficients project_coefficients(ProjectionKind kind, const AmbientSde& sde, const Embedding& emb,
                                       const Vector& y, double t);

/// B = Pi b, A = Pi (a - 1/2 sum_alpha D2phi(B_alpha, B_alpha)).
ChartSde ito_vector_project(const AmbientSde& sde, const Embedding& emb);
/// B = Pi b, A = Pi a + 1/2 sum_alpha H(b_alpha, b_alpha) with H the Hessian
/// of the nearest-point map.
ChartSde ito_jet_project(const AmbientSde& sde, const Embedding& emb);
/// Project the Stratonovich drift with Pi, then convert back to Ito form.
/// The chart Jacobian of B = Pi b comes from the embedding's second
/// derivatives and the ambient diffusion Jacobian.
ChartSde stratonovich_project(const AmbientSde& sde, const Embedding& emb,
                              const StratonovichOptions& options = {});
ChartSde project(ProjectionKind kind, const AmbientSde& sde, const Embedding& emb);

}  // namespace sdeproj
