#pragma once

// Optimal smooth first-order scheme driven by a delta-accurate gradient oracle.
// Starting from the prox center x_0 of Q, each iteration
//   1. queries the oracle at x_k,
//   2. y_k = argmin_{y in Q} <g_k, y - x_k> + (L/2)||y - x_k||^2,
//   3. z_k = argmin_{x in Q} (L/sigma) d(x) + <s_k, x>,  s_k = sum_{i<=k} alpha_i g_i,
//   4. x_{k+1} = tau_k z_k + (1 - tau_k) y_k,  tau_k = alpha_{k+1} / A_{k+1}.
// If every gradient satisfies |<g - grad f, y - z>| <= delta on Q, then
// f(y_k) - f* <= L d(x*) / (sigma A_k) + 3 delta.

#include "smoothsdp/sym_matrix.hpp"

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace smoothsdp {

/// Euclidean (Frobenius) inner product for the point types used here.
template <class Point>
double inner(const Point& a, const Point& b) {
  return a.cwiseProduct(b).sum();
}

template <class Point>
struct FeasibleSet {
  Point prox_center;
  double sigma = 1.0;
  /// (x, g, L) -> argmin_{y in Q} <g, y - x> + (L/2)||y - x||^2
  std::function<Point(const Point&, const Point&, double)> project_grad_step;
  /// (s, L/sigma) -> argmin_{x in Q} (L/sigma) d(x) + <s, x>
  std::function<Point(const Point&, double)> project_model;
  std::function<double(const Point&)> d_of;
  /// (x, tol) -> membership of x in Q
  std::function<bool(const Point&, double)> contains;
  /// Upper bound on d over Q.
  double diameter_bound = 0.0;
};

struct StepSchedule {
  std::function<double(std::int64_t)> alpha;
  std::function<double(std::int64_t)> cumulative;  // A_k = sum_{i<=k} alpha_i

  double tau(std::int64_t k) const { return alpha(k + 1) / cumulative(k + 1); }

  /// alpha_k = (k+1)/2, A_k = (k+1)(k+2)/4, tau_k = 2/(k+3).
  static StepSchedule standard() {
    return {[](std::int64_t k) { return 0.5 * static_cast<double>(k + 1); },
            [](std::int64_t k) { return 0.25 * static_cast<double>(k + 1) * static_cast<double>(k + 2); }};
  }

  /// 0 < alpha_0 <= 1 and alpha_k^2 <= A_k for k <= last.
  bool valid_up_to(std::int64_t last) const {
    const double a0 = alpha(0);
    if (!(a0 > 0.0 && a0 <= 1.0)) return false;
    for (std::int64_t k = 0; k <= last; ++k) {
      const double a = alpha(k);
      if (a < 0.0 || a * a > cumulative(k) * (1.0 + 1e-15)) return false;
    }
    return true;
  }
};

/// Iteration budget ceil(sqrt(8 L d* / (sigma eps))).
inline std::int64_t iteration_budget(double lipschitz, double d_star_bound, double sigma, double eps) {
  if (!(lipschitz > 0.0 && d_star_bound > 0.0 && sigma > 0.0 && eps > 0.0))
    throw std::invalid_argument("iteration_budget: inputs must be positive");
  return static_cast<std::int64_t>(std::ceil(std::sqrt(8.0 * lipschitz * d_star_bound / (sigma * eps))));
}

/// What an oracle returns at a query point; problems extend it with their own data.
template <class Point>
struct OracleSample {
  double value = 0.0;  // objective estimate at the query point
  Point gradient;
  double delta_cert = 0.0;
  Index m_used = 0;
  double pct_eigs = 1.0;
  double eig_gap = std::numeric_limits<double>::quiet_NaN();
};

template <class S, class Point>
concept SampleOf = requires(const S& s) {
  { s.value } -> std::convertible_to<double>;
  { s.gradient } -> std::convertible_to<const Point&>;
  { s.delta_cert } -> std::convertible_to<double>;
  { s.m_used } -> std::convertible_to<Index>;
  { s.pct_eigs } -> std::convertible_to<double>;
  { s.eig_gap } -> std::convertible_to<double>;
};

struct IterationRecord {
  std::int64_t k = 0;
  double wall_seconds = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  double value_estimate = 0.0;
  Index m_used = 0;
  double pct_eigs = 0.0;
  double delta_cert = 0.0;
  double eig_gap = std::numeric_limits<double>::quiet_NaN();
  double g_err = 0.0;       // accumulated error g(k, delta)
  double cumulative = 0.0;  // A_k
};

template <class Point>
struct SolverState {
  std::int64_t k = 0;
  Point x, y, z;
  Point s;  // sum_{i<=k} alpha_i g_i
  double cumulative = 0.0;
  double delta = 0.0;
  double g_err = 0.0;
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<IterationRecord> history;
  /// Filled only when SolveOptions::record_points is set.
  std::vector<Point> y_history;

  static SolverState start(const FeasibleSet<Point>& set, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("SolverState: delta must be non-negative");
    SolverState st;
    st.x = set.prox_center;
    st.s = Point::Zero(set.prox_center.rows(), set.prox_center.cols());
    st.delta = delta;
    st.best_point = set.prox_center;
    return st;
  }
};

class CertificateViolation : public std::runtime_error {
 public:
  CertificateViolation(std::int64_t iterate, double cert, double delta)
      : std::runtime_error("oracle certificate " + std::to_string(cert) + " exceeds delta " +
                           std::to_string(delta) + " at iterate " + std::to_string(iterate)),
        iterate_(iterate) {}
  std::int64_t iterate() const { return iterate_; }

 private:
  std::int64_t iterate_;
};

/// One iteration from x_k; appends a history record (gap left NaN) and returns
/// the oracle sample taken at x_k.
template <class Point, class Oracle>
auto step(SolverState<Point>& st, Oracle& oracle, const FeasibleSet<Point>& set, const StepSchedule& sched,
          double lipschitz) {
  auto sample = oracle(st.x);
  static_assert(SampleOf<decltype(sample), Point>);
  const double slack = 1e-12 * std::max(1.0, st.delta);
  if (!(sample.delta_cert <= st.delta + slack)) throw CertificateViolation(st.k, sample.delta_cert, st.delta);

  const double alpha = sched.alpha(st.k);
  st.y = set.project_grad_step(st.x, sample.gradient, lipschitz);
  st.s += alpha * sample.gradient;
  st.z = set.project_model(st.s, lipschitz / set.sigma);

  if (st.k == 0) {
    st.g_err = alpha * st.delta;
  } else {
    const double tau_prev = sched.tau(st.k - 1);
    st.g_err = (1.0 - tau_prev) * st.g_err + 3.0 * tau_prev * st.delta;
  }
  st.cumulative = sched.cumulative(st.k);

  if (sample.value < st.best_value) {
    st.best_value = sample.value;
    st.best_point = st.x;
  }

  IterationRecord rec;
  rec.k = st.k;
  rec.value_estimate = sample.value;
  rec.m_used = sample.m_used;
  rec.pct_eigs = sample.pct_eigs;
  rec.delta_cert = sample.delta_cert;
  rec.eig_gap = sample.eig_gap;
  rec.g_err = st.g_err;
  rec.cumulative = st.cumulative;
  st.history.push_back(rec);

  const double tau = sched.tau(st.k);
  st.x = tau * st.z + (1.0 - tau) * st.y;
  ++st.k;
  return sample;
}

/// Passed to the gap callback after each iteration.
template <class Point, class Sample>
struct GapQuery {
  std::int64_t k;
  const Point& x;  // query point x_k
  const Point& y;  // y_k
  const Sample& sample;
  double alpha;
  double cumulative;
};

struct SolveOptions {
  double lipschitz = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  /// 0 selects iteration_budget(L, diameter_bound, sigma, eps).
  std::int64_t max_iter = 0;
  /// Also stop once gap <= stop_factor * (gap at k = 0); 0 disables.
  double stop_factor = 0.0;
  bool record_points = false;
};

template <class Point>
struct SolveResult {
  Point best_point;
  double best_value = 0.0;
  Point last_y;
  SolverState<Point> state;
  std::vector<IterationRecord> history;
  bool budget_exhausted = false;
  double initial_gap = std::numeric_limits<double>::quiet_NaN();
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  std::int64_t iterations = 0;
};

/// Runs until gap(query) <= eps (or the relative stop), or max_iter iterations.
/// The gap callback returns the problem's duality gap at the current iterate.
template <class Point, class Oracle, class GapFn>
SolveResult<Point> solve(Oracle& oracle, const FeasibleSet<Point>& set, const StepSchedule& sched,
                         const SolveOptions& opts, GapFn&& gap) {
  if (!(opts.eps > 0.0)) throw std::invalid_argument("solve: eps must be positive");
  if (!(opts.lipschitz > 0.0)) throw std::invalid_argument("solve: Lipschitz constant must be positive");
  const std::int64_t budget = opts.max_iter > 0
                                  ? opts.max_iter
                                  : iteration_budget(opts.lipschitz, set.diameter_bound, set.sigma, opts.eps);

  SolveResult<Point> out;
  SolverState<Point> st = SolverState<Point>::start(set, opts.delta);
  const auto t0 = std::chrono::steady_clock::now();
  bool converged = false;
  while (st.k < budget) {
    const Point x_k = st.x;
    const auto sample = step(st, oracle, set, sched, opts.lipschitz);
    const std::int64_t k = st.k - 1;
    const GapQuery<Point, std::remove_cvref_t<decltype(sample)>> query{k, x_k, st.y, sample, sched.alpha(k), st.cumulative};
    const double g = gap(query);

    IterationRecord& rec = st.history.back();
    rec.gap = g;
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opts.record_points) st.y_history.push_back(st.y);

    if (k == 0) out.initial_gap = g;
    out.final_gap = g;
    if (g <= opts.eps || (opts.stop_factor > 0.0 && g <= opts.stop_factor * out.initial_gap)) {
      converged = true;
      break;
    }
  }

  out.budget_exhausted = !converged;
  out.iterations = st.k;
  out.best_point = st.best_point;
  out.best_value = st.best_value;
  out.last_y = st.y;
  out.history = st.history;
  out.state = std::move(st);
  return out;
}

}  // namespace smoothsdp
