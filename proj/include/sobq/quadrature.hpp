#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "sobq/common.hpp"

namespace sobq {

/// Gauss-Legendre rule on [-1,1]: nodes and weights.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on P_n from Chebyshev initial guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

}  // namespace detail

/// Cached Gauss-Legendre rule of order n.
inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// Integrate f over [a,b] with an n-point Gauss-Legendre rule.
template <typename F>
auto gauss_integrate(F&& f, double a, double b, int n) {
  const auto& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  using R = decltype(f(mid));
  R acc{};
  for (int i = 0; i < n; ++i) acc += r.weights[i] * f(mid + half * r.nodes[i]);
  return acc * half;
}

/// Gauss-Legendre with order doubling until the relative change drops below
/// rel_tol.  Throws nonconvergent_quadrature_error at max order.
template <typename F>
auto gauss_integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                              int n0 = 16, int n_max = 2048) {
  auto prev = gauss_integrate(f, a, b, n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    auto cur = gauss_integrate(f, a, b, n);
    double scale = std::max(std::abs(cur), std::abs(prev));
    if (scale == 0.0 || std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw nonconvergent_quadrature_error("quadrature did not converge under order doubling");
}

/// Prefix integrals of sampled data: out[k] ~= integral of f from x[0] to
/// x[k] on a uniform grid with spacing h.  Composite Simpson for even k; odd
/// k closes with a Simpson 3/8 tail (k >= 3) or a parabolic half-panel rule
/// (k == 1), so the order stays at four throughout.
template <typename T>
std::vector<T> cumulative_simpson(const std::vector<T>& f, double h) {
  const std::size_t n = f.size();
  std::vector<T> out(n, T{});
  if (n < 2) return out;
  std::vector<T> even(n, T{});  // Simpson prefix at even indices
  for (std::size_t k = 2; k < n; k += 2)
    even[k] = even[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k % 2 == 0) {
      out[k] = even[k];
    } else if (k == 1) {
      // integral over [x0,x1] from the parabola through (x0,x1,x2)
      if (n >= 3)
        out[k] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
      else
        out[k] = (h / 2.0) * (f[0] + f[1]);
    } else {
      out[k] = even[k - 3] + (3.0 * h / 8.0) * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }
  }
  return out;
}

}  // namespace sobq
