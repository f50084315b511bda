#include "sdeproj/noise.hpp"

#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

double standard_normal(const NoiseSource& noise, std::uint64_t step, std::uint32_t component) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), component / 2u,
      static_cast<std::uint32_t>(noise.stream_id)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(noise.seed),
      static_cast<std::uint32_t>(noise.seed >> 32) ^
          (static_cast<std::uint32_t>(noise.stream_id >> 32) * 0x9E3779B9u)};
  const auto r = philox4x32(counter, key);
  // Box-Muller on the two 53-bit uniforms of this block.
  const double u1 = to_open_unit(r[0], r[1]);
  const double u2 = to_open_unit(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (component % 2u == 0u) ? radius * std::cos(angle) : radius * std::sin(angle);
}

Matrix brownian_increments(const NoiseSource& noise, int m, long n_steps, double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("brownian_increments: dt must be positive");
  if (n_steps < 0) throw InvalidArgumentError("brownian_increments: n_steps must be >= 0");
  if (m < 1) throw InvalidArgumentError("brownian_increments: m must be >= 1");
  const double scale = std::sqrt(dt);
  Matrix out(n_steps, m);
  for (long k = 0; k < n_steps; ++k)
    for (int a = 0; a < m; ++a)
      out(k, a) = scale * standard_normal(noise, static_cast<std::uint64_t>(k),
                                          static_cast<std::uint32_t>(a));
  return out;
}

Matrix coarsen_increments(const Matrix& increments, long factor) {
  if (factor < 1 || increments.rows() % factor != 0)
    throw InvalidArgumentError("coarsen_increments: factor must divide the number of steps");
  const long coarse = increments.rows() / factor;
  Matrix out = Matrix::Zero(coarse, increments.cols());
  for (long k = 0; k < coarse; ++k) out.row(k) = increments.middleRows(k * factor, factor).colwise().sum();
  return out;
}

}  // namespace sdeproj
