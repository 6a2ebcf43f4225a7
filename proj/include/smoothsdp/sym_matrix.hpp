#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace smoothsdp {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric real matrix. Symmetry is exact: every entry pair (i,j),(j,i)
/// holds the same double.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes the input as (X + X^T)/2.
  explicit SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
    if (m.rows() < 1) throw std::invalid_argument("SymMatrix: dimension must be positive");
    const Index n = m.rows();
    for (Index j = 0; j < n; ++j) {
      m_(j, j) = m(j, j);
      for (Index i = j + 1; i < n; ++i) {
        const double v = 0.5 * (m(i, j) + m(j, i));
        m_(i, j) = v;
        m_(j, i) = v;
      }
    }
  }

  static SymMatrix zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

  Index dim() const { return m_.rows(); }
  bool empty() const { return m_.size() == 0; }
  const Matrix& matrix() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }

  /// Frobenius inner product <A, B> = Tr(A B).
  double inner(const SymMatrix& other) const { return m_.cwiseProduct(other.m_).sum(); }
  double inner(const Matrix& other) const { return m_.cwiseProduct(other).sum(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix r;
    r.m_ = a.m_ + b.m_;
    return r;
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix r;
    r.m_ = a.m_ - b.m_;
    return r;
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) {
    SymMatrix r;
    r.m_ = s * a.m_;
    return r;
  }

 private:
  Matrix m_;
};

/// Leading eigenpairs of a symmetric matrix, sorted by decreasing eigenvalue.
struct EigPartial {
  Vector values;      // descending
  Matrix vectors;     // n x m, orthonormal columns
  Vector residuals;   // per-pair estimates of ||X u - lambda u||_2
  Index n = 0;
  /// Estimate of the next eigenvalue below values[m-1], when one is known.
  std::optional<double> next_value;
  /// True when an iterative solve did not converge and a dense decomposition was used.
  bool fell_back = false;
  int restarts = 0;

  Index count() const { return values.size(); }
  bool complete() const { return count() == n; }
};

/// splitmix64 finalizer; derives independent sub-seeds from a run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace smoothsdp
