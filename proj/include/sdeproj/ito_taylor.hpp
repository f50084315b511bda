#pragma once

#include <compare>
#include <string>
#include <vector>

#include "sdeproj/linalg.hpp"
#include "sdeproj/noise.hpp"
#include "sdeproj/sde.hpp"

namespace sdeproj {

/// Finite list of integers in {0, ..., m}. Entry 0 stands for dt, entry
/// alpha >= 1 for dW^alpha. The last entry is the outermost integrator.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> e) : entries(e) {}
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}

  int length() const { return static_cast<int>(entries.size()); }
  int n_zeros() const;
  bool empty() const { return entries.empty(); }
  int first() const;
  int last() const;
  /// Drops the first entry. Throws on the empty index.
  MultiIndex remove_first() const;
  /// Drops the last entry. Throws on the empty index.
  MultiIndex remove_last() const;
  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;
};

/// All indices over {0..m} with length + zeros <= k, sorted.
std::vector<MultiIndex> lambda_set(int k, int m);

/// {xi not in A : remove_first(xi) in A}, sorted. A must be closed under
/// remove_first.
std::vector<MultiIndex> remainder_set(const std::vector<MultiIndex>& A, int m);

bool is_hierarchical(const std::vector<MultiIndex>& A);

/// Left-point nested sum approximation of the iterated integral of 1 over
/// [0, t] on a uniform grid of n_substeps cells. Component alpha >= 1 reads
/// noise component alpha - 1.
double iterated_integral(const MultiIndex& xi, const NoiseSource& noise, double t, long n_substeps);

/// Several iterated integrals over one shared Brownian path.
std::vector<double> iterated_integrals(const std::vector<MultiIndex>& xis, const NoiseSource& noise,
                                       double t, long n_substeps);

/// Derivative data of f: R^D -> R^d at one point.
struct JetData {
  Vector value;            // d
  Matrix first_derivative;  // d x D
  Tensor3 second_derivative;  // d slices, each D x D and symmetric
  Vector time_derivative;   // d, or empty for autonomous f

  int dim_value() const { return static_cast<int>(value.size()); }
  int dim_domain() const { return static_cast<int>(first_derivative.cols()); }
  /// Second derivative contracted with two domain vectors.
  Vector hessian_apply(const Vector& u, const Vector& v) const;
  void validate() const;
};

/// The identity map on R^D as a jet.
JetData identity_jet(const Vector& x);

/// L_xi f at (x, t) for xi in {(), (0), (alpha), (alpha, beta)}, alpha, beta >= 1.
/// The inner spatial derivative needed for (alpha, beta) uses the SDE's
/// diffusion Jacobian (analytic when supplied, central differences otherwise).
Vector l_operator(const MultiIndex& xi, const JetData& f, const AmbientSde& sde, const Vector& x,
                  double t);

/// Drift and diffusion of an SDE frozen at one point.
struct SdeCoefficients {
  Vector drift;      // dim
  Matrix diffusion;  // dim x m
};

struct ErrorGrowth {
  double c_half = 0.0;            // coefficient of t in E|z^(1/2)|^2
  double c_one_drift_part = 0.0;  // drift-dependent coefficient of t^2 in E|z^(1)|^2
};

/// Short-time error growth of f(X) - F(Y) for X, Y driven by shared noise.
ErrorGrowth error_growth_coefficients(const JetData& f, const JetData& F, const SdeCoefficients& x_coeffs,
                                      const SdeCoefficients& y_coeffs);

}  // namespace sdeproj
