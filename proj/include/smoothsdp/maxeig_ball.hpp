#pragma once

// minimize lambda_max(sum_i y_i A_i + c) - b^T y  subject to ||y||_2 <= beta,
// smoothed by f_mu. Its Lagrangian dual over the spectahedron gives, for any
// PSD trace-one X, the lower bound <c, X> - beta ||A(X) - b||_2.

#include "smoothsdp/affine_operator.hpp"
#include "smoothsdp/projections.hpp"
#include "smoothsdp/spectral_oracle.hpp"

#include <cmath>

namespace smoothsdp {

struct MaxEigBallProblem {
  AffineOperator op;
  double beta = 1.0;
  SmoothingConfig cfg;
  DeltaMode delta_mode = DeltaMode::Literal;

  static MaxEigBallProblem make(AffineOperator op, double beta, double eps,
                                DeltaMode mode = DeltaMode::Literal) {
    if (!(beta > 0.0)) throw std::invalid_argument("MaxEigBallProblem: beta must be positive");
    MaxEigBallProblem p;
    p.cfg = SmoothingConfig::from_eps(op.n(), eps);
    p.op = std::move(op);
    p.beta = beta;
    p.delta_mode = mode;
    return p;
  }

  Index n() const { return op.n(); }
  Index dual_dim() const { return op.dual_dim(); }

  /// Gradient Lipschitz constant of y -> f_mu(X(y)): ||A||^2 / mu.
  double lipschitz() const { return op.op_norm() * op.op_norm() * cfg.lipschitz; }

  /// Factor converting ||grad error||_F into a delta certificate.
  double delta_scale() const {
    const double s = op.sigma_max();
    return delta_mode == DeltaMode::Strict ? 2.0 * beta * s : s;
  }

  FeasibleSet<Vector> feasible_set() const { return ball_projections(beta, dual_dim()); }
};

struct MaxEigSample : OracleSample<Vector> {
  SymMatrix primal;          // the matrix-space gradient, PSD with unit trace
  double lambda_max = 0.0;   // lambda_1(X(y))
  double objective = 0.0;    // lambda_1(X(y)) - b^T y
  double c_inner = 0.0;      // <c, primal>
  double err_bound = 0.0;
};

namespace detail {

inline MaxEigSample make_maxeig_sample(const MaxEigBallProblem& p, const Vector& y, OracleResult r) {
  MaxEigSample s;
  s.gradient = p.op.adjoint(r.gradient) - p.op.b();
  const double by = p.op.b().dot(y);
  s.value = r.value - by;
  s.delta_cert = p.delta_scale() * r.err_bound;
  s.err_bound = r.err_bound;
  s.m_used = r.m_used;
  s.pct_eigs = static_cast<double>(r.m_used) / static_cast<double>(p.n());
  s.eig_gap = eig_gap_of(r.eigs);
  s.lambda_max = r.eigs.values(0);
  s.objective = s.lambda_max - by;
  s.c_inner = p.op.offset().inner(r.gradient);
  s.primal = std::move(r.gradient);
  return s;
}

inline void require_feasible(const MaxEigBallProblem& p, const Vector& y) {
  if (y.size() != p.dual_dim()) throw std::invalid_argument("maxeig_oracle: point has the wrong dimension");
  if (!(y.norm() <= p.beta + 1e-10)) throw std::domain_error("maxeig_oracle: point outside the ball");
}

}  // namespace detail

/// One-shot oracle. delta_cert = delta_scale() * err_bound <= delta.
inline MaxEigSample maxeig_oracle(const MaxEigBallProblem& p, const Vector& y, double delta,
                                  OracleMode mode = OracleMode::Partial, std::uint64_t seed = 0) {
  detail::require_feasible(p, y);
  SpectralSession session(mode, delta, seed);
  return detail::make_maxeig_sample(p, y, session.evaluate(p.op.apply(y), p.cfg.mu, p.delta_scale()));
}

/// Oracle bound to one solve; reuses eigenvectors across iterations.
class MaxEigOracle {
 public:
  MaxEigOracle(const MaxEigBallProblem& p, OracleMode mode, double delta, std::uint64_t seed = 0)
      : p_(&p), session_(mode, delta, seed) {}

  MaxEigSample operator()(const Vector& y) {
    detail::require_feasible(*p_, y);
    return detail::make_maxeig_sample(*p_, y, session_.evaluate(p_->op.apply(y), p_->cfg.mu, p_->delta_scale()));
  }

  const SpectralSession& session() const { return session_; }

 private:
  const MaxEigBallProblem* p_;
  SpectralSession session_;
};

/// <c, X> - beta ||A(X) - b||_2 for PSD trace-one X.
inline double maxeig_primal_bound(const MaxEigBallProblem& p, const SymMatrix& x) {
  return p.op.offset().inner(x) - p.beta * (p.op.adjoint(x) - p.op.b()).norm();
}

/// [lambda_max(X(y)) - b^T y] - [<c, X> - beta ||A(X) - b||_2].
inline double maxeig_gap(const MaxEigBallProblem& p, const Vector& y, const SymMatrix& xtilde) {
  const double upper = full_eig(p.op.apply(y)).values(0) - p.op.b().dot(y);
  return upper - maxeig_primal_bound(p, xtilde);
}

/// Duality gap tracked along a solve: the best objective seen at the query points
/// against the better of the current and the alpha-averaged primal matrices.
class MaxEigGapTracker {
 public:
  explicit MaxEigGapTracker(const MaxEigBallProblem& p) : p_(&p), avg_g_(Vector::Zero(p.dual_dim())) {}

  double operator()(const GapQuery<Vector, MaxEigSample>& q) {
    upper_ = std::min(upper_, q.sample.objective);
    // gradient = A(X) - b, so the primal bound needs no extra matrix work.
    const double current = q.sample.c_inner - p_->beta * q.sample.gradient.norm();
    avg_c_ += q.alpha * q.sample.c_inner;
    avg_g_ += q.alpha * q.sample.gradient;
    const double averaged = avg_c_ / q.cumulative - p_->beta * (avg_g_ / q.cumulative).norm();
    lower_ = std::max({lower_, current, averaged});
    return upper_ - lower_;
  }

  double upper() const { return upper_; }
  double lower() const { return lower_; }

 private:
  const MaxEigBallProblem* p_;
  double upper_ = std::numeric_limits<double>::infinity();
  double lower_ = -std::numeric_limits<double>::infinity();
  double avg_c_ = 0.0;
  Vector avg_g_;
};

/// ceil(4 ||A|| beta sqrt(ln n) / eps).
inline std::int64_t global_budget(double op_norm, double beta, double n, double eps) {
  if (!(op_norm > 0.0 && beta > 0.0 && n > 1.0 && eps > 0.0))
    throw std::invalid_argument("global_budget: invalid arguments");
  return static_cast<std::int64_t>(std::ceil(4.0 * op_norm * beta * std::sqrt(std::log(n)) / eps));
}

inline std::int64_t global_budget(const MaxEigBallProblem& p, double eps) {
  return global_budget(p.op.op_norm(), p.beta, static_cast<double>(p.n()), eps);
}

/// Exact-gradient count (2 ||A|| / eps) sqrt((ln n / sigma) d*), d* <= beta^2/2, sigma = 1.
inline double smooth_budget(const MaxEigBallProblem& p, double eps) {
  return 2.0 * p.op.op_norm() / eps * std::sqrt(std::log(static_cast<double>(p.n())) * 0.5 * p.beta * p.beta);
}

struct MaxEigSolveOptions {
  OracleMode mode = OracleMode::Partial;
  double delta = 0.0;  // 0 selects eps/6
  std::int64_t max_iter = 0;
  double stop_factor = 0.0;
  std::uint64_t seed = 0;
  bool record_points = false;
};

inline SolveResult<Vector> solve_maxeig(const MaxEigBallProblem& p, const MaxEigSolveOptions& o) {
  const double delta = o.delta > 0.0 ? o.delta : p.cfg.eps / 6.0;
  MaxEigOracle oracle(p, o.mode, delta, o.seed);
  MaxEigGapTracker gap(p);
  SolveOptions so;
  so.lipschitz = p.lipschitz();
  so.delta = o.mode == OracleMode::Exact ? 0.0 : delta;
  so.eps = p.cfg.eps;
  so.max_iter = o.max_iter;
  so.stop_factor = o.stop_factor;
  so.record_points = o.record_points;
  return solve(oracle, p.feasible_set(), StepSchedule::standard(), so, gap);
}

}  // namespace smoothsdp
