#pragma once

#include <array>
#include <cstdint>

#include "sdeproj/linalg.hpp"

namespace sdeproj {

/// Identifies a reproducible stream of Gaussian draws.
///
/// Draws are produced by a counter-based generator (Philox4x32-10), so the
/// value at (seed, stream_id, step, component) is a pure function of those
/// four numbers. Two workers with distinct stream ids never share state and
/// a path can be regenerated at any step without replaying earlier ones.
struct NoiseSource {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal draw keyed by (noise, step, component).
double standard_normal(const NoiseSource& noise, std::uint64_t step, std::uint32_t component);

/// n_steps x m matrix of independent N(0, dt) increments.
/// Column alpha of row k is the increment of W^alpha over step k; it does not
/// depend on m, so a subset of components reproduces the same path.
Matrix brownian_increments(const NoiseSource& noise, int m, long n_steps, double dt);

/// Sums consecutive blocks of `factor` rows: the increments of the same path
/// on a grid `factor` times coarser.
Matrix coarsen_increments(const Matrix& increments, long factor);

}  // namespace sdeproj
