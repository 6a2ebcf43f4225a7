#pragma once

// Penalized sparse PCA relaxation and its dual:
//   maximize Tr(C X) - rho 1^T |X| 1  s.t. Tr X = 1, X PSD
//   minimize lambda_max(C + U)        s.t. |U_ij| <= rho.
// The dual is solved over the box; every oracle gradient is a feasible X.

#include "smoothsdp/projections.hpp"
#include "smoothsdp/spectral_oracle.hpp"

#include <random>

namespace smoothsdp {

struct SparsePcaProblem {
  SymMatrix c;
  double rho = 1.0;
  SmoothingConfig cfg;
  DeltaMode delta_mode = DeltaMode::Literal;

  static SparsePcaProblem make(SymMatrix c, double rho, double eps, DeltaMode mode = DeltaMode::Literal) {
    if (!(rho > 0.0)) throw std::invalid_argument("SparsePcaProblem: rho must be positive");
    SparsePcaProblem p;
    p.cfg = SmoothingConfig::from_eps(c.dim(), eps);
    p.c = std::move(c);
    p.rho = rho;
    p.delta_mode = mode;
    return p;
  }

  Index n() const { return c.dim(); }
  /// The embedding U -> U has unit norm, so L = 1/mu.
  double lipschitz() const { return cfg.lipschitz; }
  double delta_scale() const { return delta_mode == DeltaMode::Strict ? 2.0 * rho * static_cast<double>(n()) : 1.0; }
  FeasibleSet<Matrix> feasible_set() const { return box_projections(rho, n()); }
};

struct SpcaSample : OracleSample<Matrix> {
  double lambda_max = 0.0;  // lambda_1(C + U)
  double err_bound = 0.0;
};

namespace detail {

inline SpcaSample make_spca_sample(const SparsePcaProblem& p, OracleResult r) {
  SpcaSample s;
  s.value = r.value;
  s.delta_cert = p.delta_scale() * r.err_bound;
  s.err_bound = r.err_bound;
  s.m_used = r.m_used;
  s.pct_eigs = static_cast<double>(r.m_used) / static_cast<double>(p.n());
  s.eig_gap = eig_gap_of(r.eigs);
  s.lambda_max = r.eigs.values(0);
  s.gradient = r.gradient.matrix();
  return s;
}

inline void require_feasible(const SparsePcaProblem& p, const Matrix& u) {
  if (u.rows() != p.n() || u.cols() != p.n()) throw std::invalid_argument("spca_oracle: point has the wrong shape");
  if (!(u.cwiseAbs().maxCoeff() <= p.rho + 1e-10)) throw std::domain_error("spca_oracle: point outside the box");
}

}  // namespace detail

inline SpcaSample spca_oracle(const SparsePcaProblem& p, const Matrix& u, double delta,
                              OracleMode mode = OracleMode::Partial, std::uint64_t seed = 0) {
  detail::require_feasible(p, u);
  SpectralSession session(mode, delta, seed);
  return detail::make_spca_sample(p, session.evaluate(SymMatrix(p.c.matrix() + u), p.cfg.mu, p.delta_scale()));
}

class SpcaOracle {
 public:
  SpcaOracle(const SparsePcaProblem& p, OracleMode mode, double delta, std::uint64_t seed = 0)
      : p_(&p), session_(mode, delta, seed) {}

  SpcaSample operator()(const Matrix& u) {
    detail::require_feasible(*p_, u);
    return detail::make_spca_sample(*p_, session_.evaluate(SymMatrix(p_->c.matrix() + u), p_->cfg.mu,
                                                           p_->delta_scale()));
  }

  const SpectralSession& session() const { return session_; }

 private:
  const SparsePcaProblem* p_;
  SpectralSession session_;
};

/// Tr(C X) - rho sum_ij |X_ij|
inline double spca_primal_bound(const SparsePcaProblem& p, const Matrix& x) {
  return p.c.inner(x) - p.rho * x.cwiseAbs().sum();
}

inline double spca_gap(const SparsePcaProblem& p, const Matrix& u, const Matrix& xtilde) {
  return full_eig(SymMatrix(p.c.matrix() + u)).values(0) - spca_primal_bound(p, xtilde);
}

class SpcaGapTracker {
 public:
  explicit SpcaGapTracker(const SparsePcaProblem& p) : p_(&p), avg_(Matrix::Zero(p.n(), p.n())) {}

  double operator()(const GapQuery<Matrix, SpcaSample>& q) {
    upper_ = std::min(upper_, q.sample.lambda_max);
    avg_ += q.alpha * q.sample.gradient;
    lower_ = std::max({lower_, spca_primal_bound(*p_, q.sample.gradient),
                       spca_primal_bound(*p_, avg_ / q.cumulative)});
    return upper_ - lower_;
  }

  /// alpha-weighted average of the gradient matrices seen so far.
  Matrix averaged_primal(double cumulative) const { return avg_ / cumulative; }
  double upper() const { return upper_; }
  double lower() const { return lower_; }

 private:
  const SparsePcaProblem* p_;
  double upper_ = std::numeric_limits<double>::infinity();
  double lower_ = -std::numeric_limits<double>::infinity();
  Matrix avg_;
};

/// Planted sparse direction (1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0, ...).
inline Vector spike_pattern(Index n) {
  Vector e = Vector::Zero(n);
  for (Index i = 0; i < std::min<Index>(n, 10); i += 2) e(i) = 1.0;
  return e;
}

/// C = M^T M + v e e^T with M_ij ~ U[0, 1].
inline SymMatrix spiked_instance(Index n, double v, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("spiked_instance: n must be positive");
  std::mt19937_64 rng(mix_seed(seed, 0x5bca));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = unif(rng);
  const Vector e = spike_pattern(n);
  return SymMatrix(m.transpose() * m + v * e * e.transpose());
}

struct SpcaSolveOptions {
  OracleMode mode = OracleMode::Partial;
  double delta = 0.0;  // 0 selects eps/6
  std::int64_t max_iter = 0;
  double stop_factor = 1e-2;
  std::uint64_t seed = 0;
};

struct SpcaSolveResult {
  SolveResult<Matrix> solve;
  Matrix primal;  // averaged primal matrix at termination
};

inline SpcaSolveResult solve_spca(const SparsePcaProblem& p, const SpcaSolveOptions& o) {
  const double delta = o.delta > 0.0 ? o.delta : p.cfg.eps / 6.0;
  SpcaOracle oracle(p, o.mode, delta, o.seed);
  SpcaGapTracker gap(p);
  SolveOptions so;
  so.lipschitz = p.lipschitz();
  so.delta = o.mode == OracleMode::Exact ? 0.0 : delta;
  so.eps = p.cfg.eps;
  so.max_iter = o.max_iter;
  so.stop_factor = o.stop_factor;
  SpcaSolveResult out{solve(oracle, p.feasible_set(), StepSchedule::standard(), so, gap), Matrix()};
  out.primal = gap.averaged_primal(out.solve.state.cumulative);
  return out;
}

}  // namespace smoothsdp
