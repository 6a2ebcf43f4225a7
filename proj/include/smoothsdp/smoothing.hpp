#pragma once

// Softmax smoothing of the maximum eigenvalue,
//
//   f_mu(X) = mu * log sum_i exp(lambda_i(X) / mu),
//
// a uniform (mu log n)-approximation of lambda_max with a (1/mu)-Lipschitz gradient
// sum_i w_i u_i u_i^T, w = softmax(lambda / mu). Everything is evaluated with the
// shift by lambda_1 so that mu down to ~1e-4 never overflows.
//
// The partial gradient keeps the m leading pairs and renormalizes their weights.
// With e_i = exp((lambda_i - lambda_1)/mu), S_m = sum_{i<=m} e_i and T the tail sum,
//
//   ||grad - grad_m||_F^2 = sum_{i<=m} e_i^2 T^2 / (S^2 S_m^2) + sum_{i>m} e_i^2 / S^2
//                         <= 2 T^2 / S^2,
//
// and T <= (n - m) e_m, S >= S_m, so tail_error_bound() certifies the normalized
// estimator that grad_approx() returns.

#include "smoothsdp/eigensolvers.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace smoothsdp {

struct SmoothingConfig {
  Index n = 0;
  double eps = 0.0;
  double mu = 0.0;
  double lipschitz = 0.0;

  /// mu = eps / ln n, L = 1/mu.
  static SmoothingConfig from_eps(Index n, double eps) {
    if (n < 2) throw std::invalid_argument("SmoothingConfig: n must be at least 2");
    if (!(eps > 0.0)) throw std::invalid_argument("SmoothingConfig: eps must be positive");
    SmoothingConfig c;
    c.n = n;
    c.eps = eps;
    c.mu = eps / std::log(static_cast<double>(n));
    c.lipschitz = 1.0 / c.mu;
    return c;
  }
};

struct OracleResult {
  double value = 0.0;  // f_mu(X); an upper estimate when m_used < n
  SymMatrix gradient;
  Index m_used = 0;
  double err_bound = 0.0;   // bound on ||grad f_mu - gradient||_F
  double delta_cert = 0.0;  // scale * err_bound
  EigPartial eigs;
};

namespace detail {

inline void require_mu(double mu) {
  if (!(mu > 0.0)) throw std::domain_error("smoothing parameter mu must be positive");
}

// e_i = exp((lambda_i - lambda_1) / mu) for the available eigenvalues.
inline Vector shifted_weights(const Vector& lambda, double mu) {
  return ((lambda.array() - lambda(0)) / mu).exp().matrix();
}

inline SymMatrix weighted_outer(const Matrix& u, const Vector& w) {
  return SymMatrix(u * w.asDiagonal() * u.transpose());
}

}  // namespace detail

inline double f_mu_value(const EigPartial& eigs, double mu) {
  detail::require_mu(mu);
  if (!eigs.complete()) throw std::invalid_argument("f_mu_value: needs the full spectrum");
  const Vector e = detail::shifted_weights(eigs.values, mu);
  return eigs.values(0) + mu * std::log(e.sum());
}

inline SymMatrix grad_exact(const EigPartial& eigs, double mu) {
  detail::require_mu(mu);
  if (!eigs.complete()) throw std::invalid_argument("grad_exact: needs the full spectrum");
  const Vector e = detail::shifted_weights(eigs.values, mu);
  return detail::weighted_outer(eigs.vectors, e / e.sum());
}

/// sqrt(2) (n - m) e_m / sum_{i<=m} e_i for the m leading eigenvalues (descending).
inline double tail_error_bound(std::span<const double> lambda, Index n, double mu) {
  detail::require_mu(mu);
  const auto m = static_cast<Index>(lambda.size());
  if (m < 1 || n < m) throw std::invalid_argument("tail_error_bound: need 1 <= m <= n");
  if (m == n) return 0.0;
  double partial = 0.0;
  for (double l : lambda) partial += std::exp((l - lambda[0]) / mu);
  const double tail = std::exp((lambda[m - 1] - lambda[0]) / mu);
  return std::sqrt(2.0) * static_cast<double>(n - m) * tail / partial;
}

inline double tail_error_bound(const Vector& lambda, Index n, double mu) {
  return tail_error_bound(std::span<const double>(lambda.data(), static_cast<std::size_t>(lambda.size())), n, mu);
}

/// Exact oracle from a full decomposition.
inline OracleResult grad_full(const SymMatrix& x, double mu) {
  OracleResult r;
  r.eigs = full_eig(x);
  r.value = f_mu_value(r.eigs, mu);
  r.gradient = grad_exact(r.eigs, mu);
  r.m_used = x.dim();
  r.err_bound = 0.0;
  r.delta_cert = 0.0;
  return r;
}

/// Normalized m-term softmax gradient from the m leading pairs of an n x n matrix,
/// with err_bound = tail_error_bound and delta_cert left at err_bound.
inline OracleResult grad_partial(EigPartial eigs, Index n, double mu) {
  detail::require_mu(mu);
  const Index m = eigs.count();
  if (m < 1 || m > n) throw std::invalid_argument("grad_partial: need 1 <= m <= n");
  OracleResult r;
  const Vector e = detail::shifted_weights(eigs.values, mu);
  const double partial = e.sum();
  r.gradient = detail::weighted_outer(eigs.vectors, e / partial);
  r.value = eigs.values(0) + mu * std::log(partial + static_cast<double>(n - m) * e(m - 1));
  r.m_used = m;
  r.err_bound = tail_error_bound(eigs.values, n, mu);
  r.delta_cert = r.err_bound;
  r.eigs = std::move(eigs);
  return r;
}

struct GradApproxOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// Eigenvectors from a nearby matrix (typically the previous iterate).
  Matrix warm_start;
};

/// Partial-spectrum oracle. Searches m in {1, 2, 4, ...} (capped at n) until
/// tail_error_bound <= delta_target / scale, and returns the normalized m-term
/// softmax gradient. The value is lambda_1 + mu log(S_m + (n - m) e_m), an upper
/// estimate of f_mu that is exact once m = n.
inline OracleResult grad_approx(const SymMatrix& x, double mu, double delta_target, double scale,
                                const GradApproxOptions& opts = {}) {
  detail::require_mu(mu);
  if (!(delta_target > 0.0)) throw std::invalid_argument("grad_approx: delta_target must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("grad_approx: scale must be positive");

  const Index n = x.dim();
  const double threshold = delta_target / scale;
  LanczosOptions lanczos;
  lanczos.tol = opts.tol;
  lanczos.seed = opts.seed;
  lanczos.warm_start = opts.warm_start;

  EigPartial eigs;
  std::optional<EigPartial> full;
  bool fell_back = false;
  for (Index m = 1;; m = std::min(2 * m, n)) {
    if (2 * m >= n) {
      // Dense regime: one decomposition serves the rest of the schedule.
      if (!full) full = full_eig(x);
      eigs = detail::truncate(*full, m);
    } else {
      eigs = leading_eigs(x, m, lanczos);
      fell_back = fell_back || eigs.fell_back;
      lanczos.warm_start = eigs.vectors;
    }
    if (m == n || tail_error_bound(eigs.values, n, mu) <= threshold) break;
  }
  eigs.fell_back = fell_back;

  OracleResult r = grad_partial(std::move(eigs), n, mu);
  r.delta_cert = scale * r.err_bound;
  return r;
}

}  // namespace smoothsdp
