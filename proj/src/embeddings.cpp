#include "sdeproj/embeddings.hpp"

#include <cmath>

#include "sdeproj/errors.hpp"

namespace sdeproj::embeddings {

Embedding circle(double radius) {
  if (!(radius > 0.0)) throw InvalidArgumentError("circle: radius must be positive");
  Embedding e;
  e.dim_chart = 1;
  e.dim_ambient = 2;
  e.name = "circle";
  e.phi = [radius](const Vector& y) { return Vector{{radius * std::cos(y(0)), radius * std::sin(y(0))}}; };
  e.d_phi = [radius](const Vector& y) {
    Matrix d(2, 1);
    d << -radius * std::sin(y(0)), radius * std::cos(y(0));
    return d;
  };
  e.d2_phi = [radius](const Vector& y) {
    return Tensor3{Matrix::Constant(1, 1, -radius * std::cos(y(0))),
                   Matrix::Constant(1, 1, -radius * std::sin(y(0)))};
  };
  return e;
}

Embedding flat(int chart_dim, int ambient_dim) {
  if (chart_dim < 1 || ambient_dim < chart_dim) throw InvalidArgumentError("flat: bad dimensions");
  return linear_isometric(Matrix::Identity(ambient_dim, chart_dim));
}

Embedding linear_isometric(const Matrix& q) {
  const int r = static_cast<int>(q.rows());
  const int n = static_cast<int>(q.cols());
  if (n < 1 || r < n) throw InvalidArgumentError("linear_isometric: bad dimensions");
  if (!(q.transpose() * q).isApprox(Matrix::Identity(n, n), 1e-12))
    throw InvalidArgumentError("linear_isometric: columns are not orthonormal");
  Embedding e;
  e.dim_chart = n;
  e.dim_ambient = r;
  e.name = "linear";
  e.phi = [q](const Vector& y) -> Vector { return q * y; };
  e.d_phi = [q](const Vector&) { return q; };
  e.d2_phi = [r, n](const Vector&) { return Tensor3(r, Matrix::Zero(n, n)); };
  return e;
}

Embedding parabola() {
  Embedding e;
  e.dim_chart = 1;
  e.dim_ambient = 2;
  e.name = "parabola";
  e.phi = [](const Vector& y) { return Vector{{y(0), 0.5 * y(0) * y(0)}}; };
  e.d_phi = [](const Vector& y) {
    Matrix d(2, 1);
    d << 1.0, y(0);
    return d;
  };
  e.d2_phi = [](const Vector&) { return Tensor3{Matrix::Zero(1, 1), Matrix::Ones(1, 1)}; };
  return e;
}

Embedding sphere(double radius) {
  if (!(radius > 0.0)) throw InvalidArgumentError("sphere: radius must be positive");
  Embedding e;
  e.dim_chart = 2;
  e.dim_ambient = 3;
  e.name = "sphere";
  e.phi = [radius](const Vector& y) {
    const double sp = std::sin(y(0)), cp = std::cos(y(0)), sa = std::sin(y(1)), ca = std::cos(y(1));
    return Vector{{radius * sp * ca, radius * sp * sa, radius * cp}};
  };
  e.d_phi = [radius](const Vector& y) {
    const double sp = std::sin(y(0)), cp = std::cos(y(0)), sa = std::sin(y(1)), ca = std::cos(y(1));
    Matrix d(3, 2);
    d << cp * ca, -sp * sa,
         cp * sa, sp * ca,
         -sp, 0.0;
    return Matrix(radius * d);
  };
  e.d2_phi = [radius](const Vector& y) {
    const double sp = std::sin(y(0)), cp = std::cos(y(0)), sa = std::sin(y(1)), ca = std::cos(y(1));
    Matrix x(2, 2), yy(2, 2), z(2, 2);
    x << -sp * ca, -cp * sa, -cp * sa, -sp * ca;
    yy << -sp * sa, cp * ca, cp * ca, -sp * sa;
    z << -cp, 0.0, 0.0, 0.0;
    return Tensor3{radius * x, radius * yy, radius * z};
  };
  return e;
}

Embedding torus(double major_radius, double minor_radius) {
  if (!(minor_radius > 0.0) || !(major_radius > minor_radius))
    throw InvalidArgumentError("torus: need major_radius > minor_radius > 0");
  const double R = major_radius, a = minor_radius;
  Embedding e;
  e.dim_chart = 2;
  e.dim_ambient = 3;
  e.name = "torus";
  e.phi = [R, a](const Vector& y) {
    const double w = R + a * std::cos(y(1));
    return Vector{{w * std::cos(y(0)), w * std::sin(y(0)), a * std::sin(y(1))}};
  };
  e.d_phi = [R, a](const Vector& y) {
    const double su = std::sin(y(0)), cu = std::cos(y(0)), sv = std::sin(y(1)), cv = std::cos(y(1));
    const double w = R + a * cv;
    Matrix d(3, 2);
    d << -w * su, -a * sv * cu,
         w * cu, -a * sv * su,
         0.0, a * cv;
    return d;
  };
  e.d2_phi = [R, a](const Vector& y) {
    const double su = std::sin(y(0)), cu = std::cos(y(0)), sv = std::sin(y(1)), cv = std::cos(y(1));
    const double w = R + a * cv;
    Matrix x(2, 2), yy(2, 2), z(2, 2);
    x << -w * cu, a * sv * su, a * sv * su, -a * cv * cu;
    yy << -w * su, -a * sv * cu, -a * sv * cu, -a * cv * su;
    z << 0.0, 0.0, 0.0, -a * sv;
    return Tensor3{x, yy, z};
  };
  return e;
}

}  // namespace sdeproj::embeddings
