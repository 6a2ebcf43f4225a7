#pragma once

#include "smoothsdp/smoothing.hpp"

#include <string_view>

namespace smoothsdp {

enum class OracleMode { Exact, Partial };

/// How a Frobenius gradient error is turned into a delta certificate.
/// Literal multiplies by the operator's largest singular value only;
/// Strict also multiplies by the diameter of the feasible set, so the
/// certificate bounds sup_{y,z in Q} |<g - grad f, y - z>| verbatim.
enum class DeltaMode { Literal, Strict };

inline std::string_view to_string(OracleMode m) { return m == OracleMode::Exact ? "exact" : "partial"; }
inline std::string_view to_string(DeltaMode m) { return m == DeltaMode::Strict ? "strict" : "literal"; }

/// Per-solve oracle state: the mode, the target delta and a warm start for the
/// next partial decomposition. Problems stay immutable; sessions are not shared.
class SpectralSession {
 public:
  SpectralSession(OracleMode mode, double delta, std::uint64_t seed, double tol = 1e-9)
      : mode_(mode), delta_(delta), seed_(seed), tol_(tol) {}

  OracleResult evaluate(const SymMatrix& x, double mu, double scale) {
    if (mode_ == OracleMode::Exact) return grad_full(x, mu);
    GradApproxOptions opts;
    opts.tol = tol_;
    opts.seed = seed_;
    opts.warm_start = warm_;
    OracleResult r = grad_approx(x, mu, delta_, scale, opts);
    warm_ = r.eigs.vectors;
    fallbacks_ += r.eigs.fell_back ? 1 : 0;
    return r;
  }

  OracleMode mode() const { return mode_; }
  double delta() const { return delta_; }
  int fallbacks() const { return fallbacks_; }

 private:
  OracleMode mode_;
  double delta_;
  std::uint64_t seed_;
  double tol_;
  Matrix warm_;
  int fallbacks_ = 0;
};

inline double eig_gap_of(const EigPartial& eigs) {
  if (!eigs.next_value) return std::numeric_limits<double>::quiet_NaN();
  return eigs.values(eigs.count() - 1) - *eigs.next_value;
}

}  // namespace smoothsdp
