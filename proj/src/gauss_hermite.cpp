#include "sdeproj/gauss_hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

namespace {

// psi_k(z) = H_k(z) exp(-z^2/2) / sqrt(2^k k! sqrt(pi)); returns psi_{n-1},
// psi_n and the sum of squares of psi_0 .. psi_{n-1}.
struct HermiteFunctions {
  double prev = 0.0;
  double last = 0.0;
  double sum_sq = 0.0;
};

HermiteFunctions hermite_functions(int n, double z) {
  double p0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * z * z);
  double sum_sq = p0 * p0;
  double p1 = std::numbers::sqrt2 * z * p0;
  if (n == 1) return {p0, p1, sum_sq};
  for (int k = 1; k < n; ++k) {
    sum_sq += p1 * p1;
    const double p2 = std::sqrt(2.0 / (k + 1)) * z * p1 - std::sqrt(static_cast<double>(k) / (k + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return {p0, p1, sum_sq};
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw InvalidArgumentError("gauss_hermite: need at least one node");
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = rule.nodes(i);
    for (int it = 0; it < 3; ++it) {
      const auto hf = hermite_functions(n, z);
      const double deriv = std::sqrt(2.0 * n) * hf.prev - z * hf.last;
      if (deriv == 0.0) break;
      z -= hf.last / deriv;
    }
    rule.nodes(i) = z;
    rule.scaled_weights(i) = 1.0 / hermite_functions(n, z).sum_sq;
    rule.weights(i) = rule.scaled_weights(i) * std::exp(-z * z);
  }
  return rule;
}

LineQuadrature line_quadrature(const GaussHermiteRule& rule, double center, double scale) {
  if (!(scale > 0.0)) throw InvalidArgumentError("line_quadrature: scale must be positive");
  LineQuadrature q;
  q.z = rule.nodes;
  q.center = center;
  q.scale = scale;
  q.nodes = (center + scale * rule.nodes.array()).matrix();
  q.weights = scale * rule.scaled_weights;
  return q;
}

Matrix polynomial_differentiation_matrix(const Vector& z) {
  const Eigen::Index n = z.size();
  // Barycentric weights kept as log-magnitude and sign to avoid overflow.
  Vector log_w(n);
  Eigen::VectorXi sign(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lw = 0.0;
    int s = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = z(i) - z(j);
      if (d == 0.0) throw InvalidArgumentError("polynomial_differentiation_matrix: repeated node");
      lw -= std::log(std::abs(d));
      if (d < 0.0) s = -s;
    }
    log_w(i) = lw;
    sign(i) = s;
  }
  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      D(i, j) = sign(i) * sign(j) * std::exp(log_w(j) - log_w(i)) / (z(i) - z(j));
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

}  // namespace sdeproj
