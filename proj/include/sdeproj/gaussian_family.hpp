#pragma once

#include <string>

#include "sdeproj/filter_model.hpp"
#include "sdeproj/gauss_hermite.hpp"
#include "sdeproj/manifold.hpp"
#include "sdeproj/projection.hpp"

namespace sdeproj {

/// Geometry on densities: L2 embeds p itself, Hellinger embeds sqrt(p).
enum class DensityMetric { l2, hellinger };

std::string to_string(DensityMetric metric);
DensityMetric parse_density_metric(const std::string& name);

/// The function space is represented by values on Gauss-Hermite nodes
/// centered at the base mean with spacing scale theta2 * scale_factor.
struct QuadratureSpec {
  int n_nodes = 40;
  double scale_factor = 1.4142135623730951;
};

/// Discretized function space attached to a base point. An ambient vector v
/// represents the function u with v_i = sqrt(weight_i) u(x_i), so Euclidean
/// inner products of ambient vectors are L2 inner products of functions.
struct FunctionSpaceGrid {
  LineQuadrature quad;
  Vector sqrt_weights;
  Matrix diff_z;  // polynomial differentiation in the reference variable

  static FunctionSpaceGrid around(const GaussianParams& base, const QuadratureSpec& spec);
  int size() const { return static_cast<int>(quad.nodes.size()); }
  Vector to_ambient(const Vector& node_values) const;
  Vector to_nodes(const Vector& ambient) const;
  /// First and second x-derivatives at the nodes of a function whose node
  /// values are given, modelled as exp(-kappa z^2) times a polynomial.
  void derivatives(const Vector& node_values, double kappa, Vector& d1, Vector& d2) const;
};

/// theta -> density (l2) or square-root density (hellinger) on the grid.
Embedding gaussian_family_embedding(DensityMetric metric, const FunctionSpaceGrid& grid);

/// The conditional-density equation written for p (l2) or sqrt(p)
/// (hellinger) on the grid, driven by the observation as its single noise.
AmbientSde filter_ambient_sde(DensityMetric metric, const FilterModel& model, const FunctionSpaceGrid& grid);

/// Projection of the filter equation onto the Gaussian family at theta,
/// built from quadrature and the generic projection routines.
FilterCoefficients numeric_projection_coefficients(DensityMetric metric, ProjectionKind kind,
                                                   const GaussianParams& theta, const FilterModel& model,
                                                   const QuadratureSpec& spec = {}, double t = 0.0);

}  // namespace sdeproj
