#pragma once

#include "smoothsdp/sym_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace smoothsdp {

class EigenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All n eigenpairs, descending.
inline EigPartial full_eig(const SymMatrix& x) {
  const Index n = x.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw EigenError("full_eig: symmetric eigensolver did not converge");

  EigPartial out;
  out.n = n;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  // Backward-stable tridiagonal QR: ||X u - lambda u|| is O(n u ||X||).
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  out.residuals = Vector::Constant(n, static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale);
  return out;
}

struct LanczosOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_restarts = 300;
  /// Krylov basis size as a multiple of the number of wanted pairs.
  int basis_factor = 4;
  /// Optional starting block (n x j); only the first columns that fit are used.
  Matrix warm_start;
};

namespace detail {

inline Vector random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v / v.norm();
}

// Two passes of classical Gram-Schmidt against the first `cols` columns of `basis`.
inline double orthogonalize(Vector& v, const Matrix& basis, Index cols) {
  if (cols > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Vector h = basis.leftCols(cols).transpose() * v;
      v.noalias() -= basis.leftCols(cols) * h;
    }
  }
  return v.norm();
}

// Returns a unit vector orthogonal to the first `cols` columns, starting from `v`
// and drawing fresh random directions on breakdown.
inline Vector next_direction(Vector v, const Matrix& basis, Index cols, double scale, std::mt19937_64& rng) {
  const double breakdown = 1e-10 * std::max(1.0, scale);
  double nrm = orthogonalize(v, basis, cols);
  for (int attempt = 0; nrm <= breakdown && attempt < 8; ++attempt) {
    v = random_unit(basis.rows(), rng);
    nrm = orthogonalize(v, basis, cols);
  }
  if (nrm <= 1e-14) throw EigenError("leading_eigs: could not extend the Krylov basis");
  return v / nrm;
}

inline EigPartial truncate(EigPartial full, Index m) {
  if (m < full.count()) full.next_value = full.values(m);
  full.values.conservativeResize(m);
  full.vectors.conservativeResize(Eigen::NoChange, m);
  full.residuals.conservativeResize(m);
  return full;
}

}  // namespace detail

/// The m algebraically largest eigenpairs of x by thick-restart Lanczos with full
/// reorthogonalization. Each returned residual ||X u - lambda u|| is at most
/// tol * max(1, |lambda_1|). Requests with m >= n/2, or whose Krylov basis would
/// span the whole space, are answered by full_eig; so is a run that exhausts its
/// restart budget (flagged through fell_back).
inline EigPartial leading_eigs(const SymMatrix& x, Index m, const LanczosOptions& opts = {}) {
  const Index n = x.dim();
  if (m < 1 || m > n) throw std::invalid_argument("leading_eigs: need 1 <= m <= n");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("leading_eigs: tol must be positive");

  const Index basis = std::min<Index>(n, static_cast<Index>(opts.basis_factor) * m);
  if (2 * m >= n || basis >= n) return detail::truncate(full_eig(x), m);

  const Matrix& a = x.matrix();
  std::mt19937_64 rng(mix_seed(opts.seed, 0x1a2c));
  const double scale = a.cwiseAbs().maxCoeff() * static_cast<double>(n);

  Matrix v(n, basis);  // orthonormal basis
  Matrix w(n, basis);  // a * v, maintained alongside
  Index filled = 0;

  // Seed the basis with the warm-start block, keeping room for expansion.
  const Index warm_cols = std::min<Index>(opts.warm_start.rows() == n ? opts.warm_start.cols() : 0, basis / 2);
  for (Index j = 0; j < warm_cols; ++j) {
    Vector c = opts.warm_start.col(j);
    const double before = c.norm();
    if (before == 0.0) continue;
    const double after = detail::orthogonalize(c, v, filled);
    if (after <= 1e-8 * before) continue;
    v.col(filled) = c / after;
    w.col(filled) = a * v.col(filled);
    ++filled;
  }
  // Expansion directions: the residual of every warm (later: unconverged Ritz)
  // vector first, then a Krylov sequence from the last one added.
  std::vector<Vector> pending;
  for (Index j = filled; j-- > 0;) pending.push_back(w.col(j));
  Vector q;
  if (pending.empty()) {
    q = detail::random_unit(n, rng);
  } else {
    q = detail::next_direction(pending.back(), v, filled, scale, rng);
    pending.pop_back();
  }

  EigPartial out;
  out.n = n;
  Eigen::SelfAdjointEigenSolver<Matrix> ritz;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    for (; filled < basis; ++filled) {
      v.col(filled) = q;
      w.col(filled).noalias() = a * q;
      if (pending.empty()) {
        q = detail::next_direction(w.col(filled), v, filled + 1, scale, rng);
      } else {
        q = detail::next_direction(pending.back(), v, filled + 1, scale, rng);
        pending.pop_back();
      }
    }

    Matrix h = v.transpose() * w;
    h = 0.5 * (h + h.transpose()).eval();
    ritz.compute(h, Eigen::ComputeEigenvectors);
    if (ritz.info() != Eigen::Success) break;
    const Vector theta = ritz.eigenvalues().reverse();
    const Matrix s = ritz.eigenvectors().rowwise().reverse();

    const Matrix u = v * s.leftCols(m);
    const Matrix au = w * s.leftCols(m);
    Vector res(m);
    for (Index i = 0; i < m; ++i) res(i) = (au.col(i) - theta(i) * u.col(i)).norm();

    const double threshold = opts.tol * std::max(1.0, std::abs(theta(0)));
    if (res.maxCoeff() <= threshold) {
      out.values = theta.head(m);
      out.vectors = u;
      out.residuals = res;
      out.next_value = theta(m);
      out.restarts = restart;
      return out;
    }

    // Thick restart: keep the leading Ritz vectors and expand along the residuals
    // of the unconverged ones. A warm-started basis is not a single Krylov
    // sequence, so these residuals need not share one direction.
    const Index keep = std::min<Index>(basis - 1, m + (basis - m) / 2);
    const Matrix vk = v * s.leftCols(keep);
    const Matrix wk = w * s.leftCols(keep);
    v.leftCols(keep) = vk;
    w.leftCols(keep) = wk;
    filled = keep;
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index i, Index j) { return res(i) < res(j); });
    pending.clear();
    for (Index i : order)
      if (res(i) > threshold) pending.push_back(au.col(i) - theta(i) * u.col(i));
    q = detail::next_direction(pending.back(), v, filled, scale, rng);
    pending.pop_back();
  }

  EigPartial fallback = detail::truncate(full_eig(x), m);
  fallback.fell_back = true;
  fallback.restarts = opts.max_restarts;
  return fallback;
}

}  // namespace smoothsdp
