#pragma once

#include "sdeproj/manifold.hpp"

namespace sdeproj::embeddings {

/// theta -> radius (cos theta, sin theta)
Embedding circle(double radius = 1.0);

/// x -> (x, 0) in R^ambient_dim
Embedding flat(int chart_dim, int ambient_dim);

/// x -> Q x for Q with orthonormal columns (checked).
Embedding linear_isometric(const Matrix& q);

/// x -> (x, x^2 / 2)
Embedding parabola();

/// (polar, azimuth) -> (sin p cos a, sin p sin a, cos p)
Embedding sphere(double radius = 1.0);

/// (u, v) -> ((R + r cos v) cos u, (R + r cos v) sin u, r sin v)
Embedding torus(double major_radius = 2.0, double minor_radius = 1.0);

}  // namespace sdeproj::embeddings
