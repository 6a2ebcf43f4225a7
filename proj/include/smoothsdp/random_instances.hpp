#pragma once

#include "smoothsdp/maxeig_ball.hpp"
#include "smoothsdp/random_orthogonal.hpp"

#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace smoothsdp {

enum class FamilyKind { Gaussian, Wishart, UniformSpectrum, UniformPlusSpike };

inline std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Gaussian: return "gaussian";
    case FamilyKind::Wishart: return "wishart";
    case FamilyKind::UniformSpectrum: return "uniform";
    case FamilyKind::UniformPlusSpike: return "uniform+1";
  }
  return "?";
}

inline std::optional<FamilyKind> parse_family(std::string_view s) {
  if (s == "gaussian" || s == "wigner") return FamilyKind::Gaussian;
  if (s == "wishart") return FamilyKind::Wishart;
  if (s == "uniform") return FamilyKind::UniformSpectrum;
  if (s == "uniform+1" || s == "uniform-spike" || s == "spike") return FamilyKind::UniformPlusSpike;
  return std::nullopt;
}

struct SpectralFamily {
  FamilyKind kind = FamilyKind::Gaussian;
  Index n = 2;
  double scale = 1.0;  // sigma of the limit law
  double spike = 5.0;  // top eigenvalue of UniformPlusSpike

  void validate() const {
    if (n < 2) throw std::invalid_argument("SpectralFamily: n must be at least 2");
    if (!(scale > 0.0)) throw std::invalid_argument("SpectralFamily: scale must be positive");
  }
};

/// Gaussian: symmetric, entries N(0, sigma^2/n) on and above the diagonal (edge 2 sigma).
/// Wishart: sigma G^T G / n with G_ij ~ N(0, 1) (support [0, 4 sigma]).
/// UniformSpectrum: Haar conjugation of n U[0,1] eigenvalues; UniformPlusSpike
/// additionally sets one of them to `spike`.
inline SymMatrix sample(const SpectralFamily& fam, std::uint64_t seed) {
  fam.validate();
  const Index n = fam.n;
  std::mt19937_64 rng(mix_seed(seed, 0x3f1));
  switch (fam.kind) {
    case FamilyKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, fam.scale / std::sqrt(static_cast<double>(n)));
      Matrix x(n, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i <= j; ++i) x(i, j) = x(j, i) = normal(rng);
      return SymMatrix(x);
    }
    case FamilyKind::Wishart: {
      std::normal_distribution<double> normal(0.0, 1.0);
      Matrix g(n, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
      return SymMatrix(fam.scale / static_cast<double>(n) * g.transpose() * g);
    }
    case FamilyKind::UniformSpectrum:
    case FamilyKind::UniformPlusSpike: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      Vector lambda(n);
      for (Index i = 0; i < n; ++i) lambda(i) = unif(rng);
      if (fam.kind == FamilyKind::UniformPlusSpike) lambda(0) = fam.spike;
      return with_spectrum(lambda, mix_seed(seed, 0x3f2));
    }
  }
  throw std::logic_error("sample: unknown family");
}

/// c and every A_i drawn independently from the family; b = 0.
inline AffineOperator random_operator(Index n, Index m, const SpectralFamily& family, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("random_operator: m must be positive");
  SpectralFamily fam = family;
  fam.n = n;
  std::vector<SymMatrix> components;
  components.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) components.push_back(sample(fam, mix_seed(seed, static_cast<std::uint64_t>(i) + 1)));
  return AffineOperator(std::move(components), sample(fam, mix_seed(seed, 0)));
}

inline MaxEigBallProblem random_maxeig_instance(Index n, Index m, const SpectralFamily& family, std::uint64_t seed,
                                                double eps, double beta = 1.0,
                                                DeltaMode mode = DeltaMode::Literal) {
  return MaxEigBallProblem::make(random_operator(n, m, family, seed), beta, eps, mode);
}

}  // namespace smoothsdp
