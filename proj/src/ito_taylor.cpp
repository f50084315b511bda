#include "sdeproj/ito_taylor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "sdeproj/errors.hpp"

namespace sdeproj {

int MultiIndex::n_zeros() const {
  return static_cast<int>(std::count(entries.begin(), entries.end(), 0));
}

int MultiIndex::first() const {
  if (entries.empty()) throw InvalidArgumentError("MultiIndex::first on the empty index");
  return entries.front();
}

int MultiIndex::last() const {
  if (entries.empty()) throw InvalidArgumentError("MultiIndex::last on the empty index");
  return entries.back();
}

MultiIndex MultiIndex::remove_first() const {
  if (entries.empty()) throw InvalidArgumentError("MultiIndex::remove_first on the empty index");
  return MultiIndex(std::vector<int>(entries.begin() + 1, entries.end()));
}

MultiIndex MultiIndex::remove_last() const {
  if (entries.empty()) throw InvalidArgumentError("MultiIndex::remove_last on the empty index");
  return MultiIndex(std::vector<int>(entries.begin(), entries.end() - 1));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries[i]);
  }
  return s + ")";
}

std::vector<MultiIndex> lambda_set(int k, int m) {
  if (k < 0) throw InvalidArgumentError("lambda_set: k must be >= 0");
  if (m < 1) throw InvalidArgumentError("lambda_set: m must be >= 1");
  // Grow indices entry by entry; the weight l + n only increases.
  std::vector<MultiIndex> out{MultiIndex{}};
  std::vector<std::pair<MultiIndex, int>> frontier{{MultiIndex{}, 0}};
  while (!frontier.empty()) {
    std::vector<std::pair<MultiIndex, int>> next;
    for (const auto& [xi, w] : frontier) {
      for (int j = 0; j <= m; ++j) {
        const int w2 = w + (j == 0 ? 2 : 1);
        if (w2 > k) continue;
        MultiIndex e = xi;
        e.entries.push_back(j);
        out.push_back(e);
        next.emplace_back(std::move(e), w2);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_hierarchical(const std::vector<MultiIndex>& A) {
  const std::set<MultiIndex> s(A.begin(), A.end());
  if (s.empty()) return false;
  for (const auto& xi : s)
    if (!xi.empty() && !s.count(xi.remove_first())) return false;
  return true;
}

std::vector<MultiIndex> remainder_set(const std::vector<MultiIndex>& A, int m) {
  if (m < 1) throw InvalidArgumentError("remainder_set: m must be >= 1");
  if (A.empty()) throw InvalidArgumentError("remainder_set: A must be nonempty");
  if (!is_hierarchical(A)) throw InvalidArgumentError("remainder_set: A is not hierarchical");
  const std::set<MultiIndex> in_a(A.begin(), A.end());
  std::set<MultiIndex> out;
  for (const auto& eta : in_a) {
    for (int j = 0; j <= m; ++j) {
      MultiIndex xi;
      xi.entries.reserve(eta.entries.size() + 1);
      xi.entries.push_back(j);
      xi.entries.insert(xi.entries.end(), eta.entries.begin(), eta.entries.end());
      if (!in_a.count(xi)) out.insert(std::move(xi));
    }
  }
  return {out.begin(), out.end()};
}

std::vector<double> iterated_integrals(const std::vector<MultiIndex>& xis, const NoiseSource& noise,
                                       double t, long n_substeps) {
  if (!(t > 0.0)) throw InvalidArgumentError("iterated_integral: t must be positive");
  if (n_substeps < 100) throw InvalidArgumentError("iterated_integral: n_substeps must be >= 100");
  int m = 0;
  for (const auto& xi : xis) {
    if (xi.length() > 3)
      throw UnsupportedOrderError("iterated_integral: length " + std::to_string(xi.length()) +
                                  " exceeds 3");
    for (int j : xi.entries) {
      if (j < 0) throw InvalidArgumentError("iterated_integral: negative index entry");
      m = std::max(m, j);
    }
  }
  const double h = t / static_cast<double>(n_substeps);
  const double sqrt_h = std::sqrt(h);
  // partial[i][k]: running value of the k-fold inner integral of xi i.
  std::vector<std::array<double, 4>> partial(xis.size(), {1.0, 0.0, 0.0, 0.0});
  std::vector<double> dw(m + 1);
  for (long s = 0; s < n_substeps; ++s) {
    dw[0] = h;
    for (int a = 1; a <= m; ++a)
      dw[a] = sqrt_h * standard_normal(noise, static_cast<std::uint64_t>(s), static_cast<std::uint32_t>(a - 1));
    for (std::size_t i = 0; i < xis.size(); ++i) {
      auto& p = partial[i];
      const auto& e = xis[i].entries;
      // Update outer levels first so every level uses left-point inner values.
      for (int k = static_cast<int>(e.size()); k >= 1; --k) p[k] += p[k - 1] * dw[e[k - 1]];
    }
  }
  std::vector<double> out(xis.size());
  for (std::size_t i = 0; i < xis.size(); ++i) out[i] = partial[i][xis[i].entries.size()];
  return out;
}

double iterated_integral(const MultiIndex& xi, const NoiseSource& noise, double t, long n_substeps) {
  return iterated_integrals({xi}, noise, t, n_substeps).front();
}

Vector JetData::hessian_apply(const Vector& u, const Vector& v) const {
  Vector out(dim_value());
  for (int i = 0; i < dim_value(); ++i) out(i) = u.dot(second_derivative[i] * v);
  return out;
}

void JetData::validate() const {
  const int d = dim_value();
  const int D = dim_domain();
  if (first_derivative.rows() != d) throw InvalidArgumentError("JetData: first_derivative rows");
  if (static_cast<int>(second_derivative.size()) != d)
    throw InvalidArgumentError("JetData: second_derivative slice count");
  for (const auto& s : second_derivative)
    if (s.rows() != D || s.cols() != D) throw InvalidArgumentError("JetData: second_derivative shape");
  if (time_derivative.size() != 0 && time_derivative.size() != d)
    throw InvalidArgumentError("JetData: time_derivative size");
}

JetData identity_jet(const Vector& x) {
  const int n = static_cast<int>(x.size());
  return JetData{x, Matrix::Identity(n, n), Tensor3(n, Matrix::Zero(n, n)), Vector()};
}

Vector l_operator(const MultiIndex& xi, const JetData& f, const AmbientSde& sde, const Vector& x,
                  double t) {
  f.validate();
  if (f.dim_domain() != sde.dim_state || x.size() != sde.dim_state)
    throw InvalidArgumentError("l_operator: jet domain does not match the SDE state");
  const auto check_noise = [&](int a) {
    if (a < 1 || a > sde.dim_noise)
      throw InvalidArgumentError("l_operator: noise index out of range");
  };
  if (xi.empty()) return f.value;
  if (xi.length() + xi.n_zeros() > 2)
    throw UnsupportedOrderError("l_operator: " + xi.to_string() + " has l + n > 2");
  const Matrix b = sde.eval_diffusion(x, t);
  if (xi.length() == 1 && xi.first() == 0) {
    Vector out = f.first_derivative * sde.eval_drift(x, t);
    if (f.time_derivative.size()) out += f.time_derivative;
    for (int a = 0; a < sde.dim_noise; ++a) out += 0.5 * f.hessian_apply(b.col(a), b.col(a));
    return out;
  }
  if (xi.length() == 1) {
    check_noise(xi.first());
    return f.first_derivative * b.col(xi.first() - 1);
  }
  // (alpha, beta): L_alpha applied to g = Df b_beta.
  const int alpha = xi.entries[0];
  const int beta = xi.entries[1];
  check_noise(alpha);
  check_noise(beta);
  const Tensor3 db = sde.eval_diffusion_jacobian(x, t);
  const Vector ba = b.col(alpha - 1);
  return f.first_derivative * (db[beta - 1] * ba) + f.hessian_apply(ba, b.col(beta - 1));
}

ErrorGrowth error_growth_coefficients(const JetData& f, const JetData& F, const SdeCoefficients& xc,
                                      const SdeCoefficients& yc) {
  f.validate();
  F.validate();
  if (f.dim_value() != F.dim_value())
    throw InvalidArgumentError("error_growth_coefficients: codomain dimensions differ");
  if (xc.drift.size() != f.dim_domain() || xc.diffusion.rows() != f.dim_domain())
    throw InvalidArgumentError("error_growth_coefficients: x coefficients do not match f");
  if (yc.drift.size() != F.dim_domain() || yc.diffusion.rows() != F.dim_domain())
    throw InvalidArgumentError("error_growth_coefficients: y coefficients do not match F");
  if (xc.diffusion.cols() != yc.diffusion.cols())
    throw InvalidArgumentError("error_growth_coefficients: noise dimensions differ");
  ErrorGrowth out;
  Vector drift_gap = f.first_derivative * xc.drift - F.first_derivative * yc.drift;
  for (int a = 0; a < xc.diffusion.cols(); ++a) {
    const Vector bx = xc.diffusion.col(a);
    const Vector by = yc.diffusion.col(a);
    out.c_half += (f.first_derivative * bx - F.first_derivative * by).squaredNorm();
    drift_gap += 0.5 * f.hessian_apply(bx, bx) - 0.5 * F.hessian_apply(by, by);
  }
  out.c_one_drift_part = drift_gap.squaredNorm();
  return out;
}

}  // namespace sdeproj
