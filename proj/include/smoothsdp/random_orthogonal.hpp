#pragma once

#include "smoothsdp/sym_matrix.hpp"

#include <Eigen/QR>

#include <random>

namespace smoothsdp {

/// Haar-distributed orthogonal matrix: QR of an i.i.d. N(0,1) matrix with the
/// columns of Q flipped so that diag(R) > 0.
inline Matrix haar_orthogonal(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("haar_orthogonal: n must be positive");
  std::mt19937_64 rng(mix_seed(seed, 0x4a37));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);

    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    const Vector diag = r.diagonal();
    if (diag.cwiseAbs().minCoeff() <= 1e-12 * diag.cwiseAbs().maxCoeff()) continue;  // redraw

    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    for (Index j = 0; j < n; ++j)
      if (diag(j) < 0.0) q.col(j) = -q.col(j);
    return q;
  }
}

/// Q diag(lambda) Q^T with Q Haar: uniform over symmetric matrices with this spectrum.
inline SymMatrix with_spectrum(const Vector& lambda, std::uint64_t seed) {
  if (lambda.size() < 1) throw std::invalid_argument("with_spectrum: empty spectrum");
  if (!lambda.allFinite()) throw std::invalid_argument("with_spectrum: spectrum must be finite");
  const Matrix q = haar_orthogonal(lambda.size(), seed);
  return SymMatrix(q * lambda.asDiagonal() * q.transpose());
}

}  // namespace smoothsdp
