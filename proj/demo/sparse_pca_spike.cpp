// Recover a planted 5-sparse direction from C = M^T M + v e e^T.
#include "smoothsdp/harness.hpp"

#include <cstdio>
#include <cstdlib>

using namespace smoothsdp;

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::atol(argv[1]) : 100;
  const double rho = 0.3 * static_cast<double>(n);
  const SymMatrix c = spiked_instance(n, 50.0, 1);
  const double eps = auto_spca_eps(c, rho, 1e-2);
  const SparsePcaProblem p = SparsePcaProblem::make(c, rho, eps);

  SpcaSolveOptions opts;
  opts.seed = 1;
  const SpcaSolveResult r = solve_spca(p, opts);
  const auto& h = r.solve.history;
  std::printf("n=%ld rho=%.1f eps=%.4g: %ld iterations, gap %.4g -> %.4g, %.3f s\n", static_cast<long>(n), rho,
              eps, static_cast<long>(r.solve.iterations), r.solve.initial_gap, r.solve.final_gap,
              h.back().wall_seconds);

  const Vector u = full_eig(SymMatrix(r.primal)).vectors.col(0);
  const Vector e = spike_pattern(n).normalized();
  std::printf("overlap with the planted pattern: %.5f\nlargest loadings:", std::abs(u.dot(e)));
  for (Index i = 0; i < n; ++i)
    if (std::abs(u(i)) > 0.1) std::printf(" %ld:%.3f", static_cast<long>(i), u(i));
  std::printf("\n");
}
