#pragma once

#include "sdeproj/linalg.hpp"

namespace sdeproj {

/// Gauss-Hermite rule for the weight exp(-z^2).
struct GaussHermiteRule {
  Vector nodes;    // ascending
  Vector weights;  // w_i, sum = sqrt(pi)
  /// w_i exp(z_i^2): weights for integrating f(z) dz without the Gaussian
  /// factor. Computed directly, so they stay finite for large nodes.
  Vector scaled_weights;
};

/// n-point rule (n >= 1): Golub-Welsch eigenvalues polished by Newton steps
/// on the normalized Hermite functions.
GaussHermiteRule gauss_hermite(int n);

/// Nodes x_i = center + scale z_i with weights for the Lebesgue integral
/// over the real line: integral f(x) dx ~ sum_i weight_i f(x_i).
struct LineQuadrature {
  Vector nodes;
  Vector weights;
  Vector z;  // reference nodes
  double center = 0.0;
  double scale = 1.0;
};

LineQuadrature line_quadrature(const GaussHermiteRule& rule, double center, double scale);

/// Differentiation matrix (in z) for polynomial interpolation on the given
/// distinct nodes. Rows sum to zero exactly.
Matrix polynomial_differentiation_matrix(const Vector& nodes);

}  // namespace sdeproj
