// Eigenvalues needed per iteration on the four random spectral families (n = 50, m = 25).
#include "smoothsdp/harness.hpp"

#include <cstdio>

using namespace smoothsdp;

int main() {
  const double eps = 0.02;
  for (FamilyKind kind : {FamilyKind::Gaussian, FamilyKind::Wishart, FamilyKind::UniformSpectrum,
                          FamilyKind::UniformPlusSpike}) {
    const SpectralFamily fam{kind, 50};
    const MaxEigBallProblem p = random_maxeig_instance(50, 25, fam, 7, eps);
    MaxEigSolveOptions opts;
    opts.stop_factor = 1e-2;
    opts.seed = 7;
    const auto r = solve_maxeig(p, opts);
    double pct = 0.0;
    for (const auto& rec : r.history) pct += rec.pct_eigs;
    pct /= static_cast<double>(r.history.size());
    std::printf("%-10s iterations %5ld  final gap %.3e  mean eigenvalues %5.1f%%\n",
                std::string(to_string(kind)).c_str(), static_cast<long>(r.iterations), r.final_gap, 100.0 * pct);
  }
}
