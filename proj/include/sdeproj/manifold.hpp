#pragma once

#include <functional>
#include <string>

#include "sdeproj/linalg.hpp"

namespace sdeproj {

/// Smooth immersion phi: R^n -> R^r with analytic derivatives.
struct Embedding {
  int dim_chart = 0;
  int dim_ambient = 0;
  std::function<Vector(const Vector&)> phi;
  std::function<Matrix(const Vector&)> d_phi;     // r x n
  std::function<Tensor3(const Vector&)> d2_phi;   // r slices, each n x n
  std::string name;

  void validate() const;
};

struct InducedMetric {
  Matrix metric;   // h_ab
  Matrix inverse;  // h^ab
};

/// h = Dphi^T Dphi and its inverse. Throws SingularMetricError when the
/// smallest singular value of Dphi is below 1e-8.
InducedMetric induced_metric(const Embedding& emb, const Vector& y);

/// Pi = h^-1 Dphi^T (n x r): chart components of the orthogonal projection
/// onto the tangent space.
Matrix tangent_projection(const Embedding& emb, const Vector& y);

/// Second-order Taylor data of the nearest-point map in chart coordinates
/// at phi(y): y + Pi v + 1/2 H(v, v) + O(|v|^3).
struct ProjectionJet {
  Vector base_chart_point;
  Matrix tangent_proj;  // n x r
  Tensor3 hessian;      // n slices, each r x r and symmetric

  /// Second-order prediction of the nearest chart point to phi(y) + v.
  Vector predict(const Vector& v) const;
  /// H(u, v) as a chart vector.
  Vector hessian_apply(const Vector& u, const Vector& v) const;
};

/// Orthogonal frame adapted to the embedding at y.
struct AdaptedFrame {
  Matrix chart_map;  // J = h^{-1/2}, symmetric (n x n)
  Matrix ambient_rotation;  // T (r x r); the first n rows span the tangent space
};

AdaptedFrame adapted_frame(const Embedding& emb, const Vector& y);

/// Built through adapted coordinates: in the frame where the chart is
/// orthonormal and the tangent space is the first n axes, the quadratic term
/// of the nearest-point map has a closed form in the second derivatives of
/// the embedding. The result is rotated back to the original coordinates.
ProjectionJet metric_projection_jet2(const Embedding& emb, const Vector& y);

}  // namespace sdeproj
