#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sdeproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A rank-3 array stored as a list of matrix slices. The meaning of the
// leading index is fixed by each producer and documented there.
using Tensor3 = std::vector<Matrix>;

/// Central-difference step used throughout: cbrt(eps) * max(1, |x|).
inline double fd_step(double x) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(x));
}

inline bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

}  // namespace sdeproj
