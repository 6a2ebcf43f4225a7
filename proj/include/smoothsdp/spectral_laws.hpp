#pragma once

// Asymptotic share of eigenvalues whose softmax weight exp((lambda - lambda_max)/mu),
// mu = eps / ln n, stays above gamma: the spectral mass in the window
// [edge + eps ln(gamma) / ln n, edge] at the upper edge of the limit law.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smoothsdp {

/// Wigner semicircle density on [-2 sigma, 2 sigma].
inline double semicircle_density(double x, double sigma) {
  const double r2 = 4.0 * sigma * sigma - x * x;
  return r2 <= 0.0 ? 0.0 : std::sqrt(r2) / (2.0 * std::numbers::pi * sigma * sigma);
}

/// Marchenko-Pastur density (unit aspect ratio) on [0, 4 sigma].
inline double marchenko_pastur_density(double x, double sigma) {
  if (x <= 0.0 || x >= 4.0 * sigma) return 0.0;
  return std::sqrt(x * (4.0 * sigma - x)) / (2.0 * std::numbers::pi * sigma * x);
}

namespace detail {

// Integral over [a, b] within the support [lo, hi] of a density with square-root
// behaviour at both edges, given as density(x - lo, hi - x). Each half is mapped by
// x = edge -/+ s^2, which turns the edge singularity into a smooth integrand for
// Gauss-Kronrod; passing the edge distance s^2 directly avoids cancellation in hi - x.
template <class Density>
double edge_integral(Density&& density, double lo, double hi, double a, double b) {
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(b > a)) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned depth = 25;
  constexpr double tol = 1e-13;
  const double mid = 0.5 * (lo + hi), width = hi - lo;
  // Boost's error estimate misbehaves on very short intervals, so integrate over [0, 1].
  auto on_unit = [&](auto&& f, double s0, double s1) {
    const double h = s1 - s0;
    auto g = [&](double t) { return f(s0 + h * t) * h; };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, depth, tol);
  };
  double total = 0.0;
  if (a < mid) {
    const double s0 = std::sqrt(a - lo), s1 = std::sqrt(std::min(b, mid) - lo);
    auto f = [&](double s) { return density(s * s, width - s * s) * 2.0 * s; };
    total += on_unit(f, s0, s1);
  }
  if (b > mid) {
    const double s0 = std::sqrt(hi - b), s1 = std::sqrt(hi - std::max(a, mid));
    auto f = [&](double s) { return density(width - s * s, s * s) * 2.0 * s; };
    total += on_unit(f, s0, s1);
  }
  return total;
}

inline double window_width(double eps, double gamma, double n) {
  if (!(eps > 0.0)) throw std::invalid_argument("eigenvalue fraction: eps must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("eigenvalue fraction: gamma must lie in (0, 1)");
  if (!(n >= 2.0)) throw std::invalid_argument("eigenvalue fraction: n must be at least 2");
  return -eps * std::log(gamma) / std::log(n);
}

}  // namespace detail

inline double semicircle_mass(double a, double b, double sigma) {
  const double w = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  auto p = [w](double from_lo, double from_hi) { return w * std::sqrt(from_lo * from_hi); };
  return detail::edge_integral(p, -2.0 * sigma, 2.0 * sigma, a, b);
}

inline double marchenko_pastur_mass(double a, double b, double sigma) {
  const double w = 1.0 / (2.0 * std::numbers::pi * sigma);
  auto p = [w](double x, double from_hi) { return x > 0.0 ? w * std::sqrt(from_hi / x) : 0.0; };
  return detail::edge_integral(p, 0.0, 4.0 * sigma, a, b);
}

/// Semicircle mass of [2 sigma - eps ln(1/gamma)/ln n, 2 sigma].
inline double semicircle_fraction(double eps, double gamma, double sigma, double n) {
  if (!(sigma > 0.0)) throw std::invalid_argument("semicircle_fraction: sigma must be positive");
  const double lower = 2.0 * sigma - detail::window_width(eps, gamma, n);
  if (lower <= -2.0 * sigma) return 1.0;
  return std::clamp(semicircle_mass(lower, 2.0 * sigma, sigma), 0.0, 1.0);
}

/// Marchenko-Pastur mass of [4 sigma - eps ln(1/gamma)/ln n, 4 sigma].
inline double marchenko_fraction(double eps, double gamma, double sigma, double n) {
  if (!(sigma > 0.0)) throw std::invalid_argument("marchenko_fraction: sigma must be positive");
  const double lower = 4.0 * sigma - detail::window_width(eps, gamma, n);
  if (lower <= 0.0) return 1.0;
  return std::clamp(marchenko_pastur_mass(lower, 4.0 * sigma, sigma), 0.0, 1.0);
}

/// Semicircle CDF in closed form, used for Kolmogorov distances.
inline double semicircle_cdf(double x, double sigma) {
  const double t = std::clamp(x / (2.0 * sigma), -1.0, 1.0);
  return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / std::numbers::pi;
}

}  // namespace smoothsdp
