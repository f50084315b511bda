#include "sdeproj/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "sdeproj/errors.hpp"

namespace sdeproj {

namespace {

constexpr double kMinSingularValue = 1e-8;

Matrix checked_d_phi(const Embedding& emb, const Vector& y) {
  emb.validate();
  if (y.size() != emb.dim_chart) throw InvalidArgumentError("chart point has the wrong dimension");
  Matrix d = emb.d_phi(y);
  if (d.rows() != emb.dim_ambient || d.cols() != emb.dim_chart)
    throw InvalidArgumentError("d_phi returned the wrong shape");
  if (!d.allFinite()) throw SingularMetricError("d_phi is not finite");
  return d;
}

Eigen::SelfAdjointEigenSolver<Matrix> metric_eigen(const Matrix& d_phi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(d_phi.transpose() * d_phi);
  if (es.info() != Eigen::Success) throw SingularMetricError("metric eigendecomposition failed");
  // Singular values of d_phi are square roots of the metric eigenvalues.
  const double smin = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
  if (!(smin > kMinSingularValue))
    throw SingularMetricError("embedding is not an immersion here (smallest singular value " +
                              std::to_string(smin) + ")");
  return es;
}

}  // namespace

void Embedding::validate() const {
  if (dim_chart < 1 || dim_ambient < dim_chart)
    throw InvalidArgumentError("Embedding: need 1 <= dim_chart <= dim_ambient");
  if (!phi || !d_phi || !d2_phi) throw InvalidArgumentError("Embedding: missing function field");
}

InducedMetric induced_metric(const Embedding& emb, const Vector& y) {
  const Matrix d = checked_d_phi(emb, y);
  metric_eigen(d);
  InducedMetric out;
  out.metric = d.transpose() * d;
  out.metric = 0.5 * (out.metric + out.metric.transpose());
  Eigen::LLT<Matrix> llt(out.metric);
  if (llt.info() != Eigen::Success) throw SingularMetricError("induced metric is not positive definite");
  out.inverse = llt.solve(Matrix::Identity(emb.dim_chart, emb.dim_chart));
  return out;
}

Matrix tangent_projection(const Embedding& emb, const Vector& y) {
  const Matrix d = checked_d_phi(emb, y);
  metric_eigen(d);
  Eigen::LLT<Matrix> llt(d.transpose() * d);
  if (llt.info() != Eigen::Success) throw SingularMetricError("induced metric is not positive definite");
  return llt.solve(d.transpose());
}

Vector ProjectionJet::hessian_apply(const Vector& u, const Vector& v) const {
  Vector out(static_cast<Eigen::Index>(hessian.size()));
  for (std::size_t k = 0; k < hessian.size(); ++k) out(k) = u.dot(hessian[k] * v);
  return out;
}

Vector ProjectionJet::predict(const Vector& v) const {
  return base_chart_point + tangent_proj * v + 0.5 * hessian_apply(v, v);
}

AdaptedFrame adapted_frame(const Embedding& emb, const Vector& y) {
  const Matrix d = checked_d_phi(emb, y);
  const auto es = metric_eigen(d);
  const int n = emb.dim_chart;
  const int r = emb.dim_ambient;
  AdaptedFrame f;
  const Matrix& V = es.eigenvectors();
  f.chart_map = V * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  const Matrix tangent = d * f.chart_map;  // orthonormal columns
  f.ambient_rotation.resize(r, r);
  f.ambient_rotation.topRows(n) = tangent.transpose();
  if (r > n) {
    const Matrix normal_proj = Matrix::Identity(r, r) - tangent * tangent.transpose();
    Eigen::ColPivHouseholderQR<Matrix> qr(normal_proj);
    Matrix q = qr.householderQ() * Matrix::Identity(r, r - n);
    for (int c = 0; c < r - n; ++c) {
      Eigen::Index imax = 0;
      q.col(c).cwiseAbs().maxCoeff(&imax);
      if (q(imax, c) < 0.0) q.col(c) *= -1.0;
    }
    f.ambient_rotation.bottomRows(r - n) = q.transpose();
  }
  return f;
}

ProjectionJet metric_projection_jet2(const Embedding& emb, const Vector& y) {
  const AdaptedFrame frame = adapted_frame(emb, y);
  const int n = emb.dim_chart;
  const int r = emb.dim_ambient;
  const Matrix& J = frame.chart_map;
  const Matrix& T = frame.ambient_rotation;
  const Tensor3 d2 = emb.d2_phi(y);
  if (static_cast<int>(d2.size()) != r) throw InvalidArgumentError("d2_phi returned the wrong slice count");

  // Second derivatives of the adapted embedding x -> T (phi(y + J x) - phi(y)).
  std::vector<Matrix> chart_d2(r);
  for (int g = 0; g < r; ++g) chart_d2[g] = J.transpose() * d2[g] * J;
  Tensor3 adapted(r, Matrix::Zero(n, n));
  for (int a = 0; a < r; ++a)
    for (int g = 0; g < r; ++g)
      if (T(a, g) != 0.0) adapted[a] += T(a, g) * chart_d2[g];

  // Quadratic coefficients of the nearest-point map in adapted coordinates:
  // tangent-tangent block -D2Phi^p, tangent-normal block the normal second
  // derivatives, normal-normal block zero.
  Tensor3 local(n, Matrix::Zero(r, r));
  for (int p = 0; p < n; ++p) {
    Matrix& Hp = local[p];
    Hp.topLeftCorner(n, n) = -adapted[p];
    for (int a = 0; a < n; ++a)
      for (int b = n; b < r; ++b) {
        Hp(a, b) = adapted[b](p, a);
        Hp(b, a) = Hp(a, b);
      }
  }

  ProjectionJet jet;
  jet.base_chart_point = y;
  jet.tangent_proj = tangent_projection(emb, y);
  jet.hessian.assign(n, Matrix::Zero(r, r));
  std::vector<Matrix> rotated(n);
  for (int p = 0; p < n; ++p) rotated[p] = T.transpose() * local[p] * T;
  for (int k = 0; k < n; ++k) {
    for (int p = 0; p < n; ++p) jet.hessian[k] += J(k, p) * rotated[p];
    jet.hessian[k] = 0.5 * (jet.hessian[k] + jet.hessian[k].transpose());
  }
  return jet;
}

}  // namespace sdeproj
