#pragma once

#include "smoothsdp/eigensolvers.hpp"

#include <random>
#include <vector>

namespace smoothsdp {

/// X(y) = sum_i y_i A_i + c with symmetric A_i, c, and a linear term b.
class AffineOperator {
 public:
  AffineOperator() = default;

  AffineOperator(std::vector<SymMatrix> components, SymMatrix offset, Vector b = Vector())
      : components_(std::move(components)), offset_(std::move(offset)), b_(std::move(b)) {
    if (components_.empty()) throw std::invalid_argument("AffineOperator: need at least one component");
    const Index n = offset_.dim();
    for (const auto& a : components_)
      if (a.dim() != n) throw std::invalid_argument("AffineOperator: component dimension mismatch");
    if (b_.size() == 0) b_ = Vector::Zero(dual_dim());
    if (b_.size() != dual_dim()) throw std::invalid_argument("AffineOperator: b has the wrong length");

    stacked_.resize(n * n, dual_dim());
    for (Index i = 0; i < dual_dim(); ++i)
      stacked_.col(i) = Eigen::Map<const Vector>(components_[i].matrix().data(), n * n);
    const Matrix gram = stacked_.transpose() * stacked_;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    sigma_max_ = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    top_singular_ = es.eigenvectors().col(dual_dim() - 1);
    op_norm_ = compute_op_norm();
  }

  Index dual_dim() const { return static_cast<Index>(components_.size()); }
  Index n() const { return offset_.dim(); }
  const std::vector<SymMatrix>& components() const { return components_; }
  const SymMatrix& offset() const { return offset_; }
  const Vector& b() const { return b_; }

  /// sum_i y_i A_i + c
  SymMatrix apply(const Vector& y) const { return SymMatrix(linear(y) + offset_.matrix()); }

  /// (<A_i, X>)_i
  Vector adjoint(const SymMatrix& x) const {
    return stacked_.transpose() * Eigen::Map<const Vector>(x.matrix().data(), n() * n());
  }

  /// max_{||h||_2 = 1} ||sum_i h_i A_i||_2 (spectral norm), by alternating ascent.
  double op_norm() const { return op_norm_; }
  /// Largest singular value of A viewed as a map R^m -> (S_n, Frobenius).
  double sigma_max() const { return sigma_max_; }

 private:
  Matrix linear(const Vector& y) const {
    const Vector flat = stacked_ * y;
    return Eigen::Map<const Matrix>(flat.data(), n(), n());
  }

  // h -> argmax_{||h'||=1} <h', A(s u u^T)> with (s, u) the extreme eigenpair of
  // sum h_i A_i. The value ||sum h_i A_i||_2 never decreases along the iteration.
  double ascend(Vector h) const {
    double value = 0.0;
    for (int it = 0; it < 200; ++it) {
      const EigPartial eig = full_eig(SymMatrix(linear(h)));
      const Index top = 0, bottom = eig.count() - 1;
      const bool upper = std::abs(eig.values(top)) >= std::abs(eig.values(bottom));
      const double current = std::abs(eig.values(upper ? top : bottom));
      const Vector u = eig.vectors.col(upper ? top : bottom);
      Vector next = stacked_.transpose() * Eigen::Map<const Vector>(Matrix(u * u.transpose()).data(), n() * n());
      if (!upper) next = -next;
      const double nrm = next.norm();
      if (nrm == 0.0) return current;
      h = next / nrm;
      if (std::abs(current - value) <= 1e-12 * std::max(1.0, current)) return current;
      value = current;
    }
    return value;
  }

  double compute_op_norm() const {
    const Index m = dual_dim();
    double best = ascend(top_singular_);
    for (Index i = 0; i < std::min<Index>(m, 8); ++i) best = std::max(best, ascend(Vector::Unit(m, i)));
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int r = 0; r < 4; ++r) {
      Vector h(m);
      for (Index i = 0; i < m; ++i) h(i) = normal(rng);
      best = std::max(best, ascend(h / h.norm()));
    }
    return best;
  }

  std::vector<SymMatrix> components_;
  SymMatrix offset_;
  Vector b_;
  Matrix stacked_;  // column i is vec(A_i)
  Vector top_singular_;
  double sigma_max_ = 0.0;
  double op_norm_ = 0.0;
};

}  // namespace smoothsdp
