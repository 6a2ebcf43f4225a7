#pragma once

#include "smoothsdp/nesterov.hpp"

#include <algorithm>

namespace smoothsdp {

/// Radial projection onto {y : ||y||_2 <= beta}.
inline Vector project_ball(const Vector& v, double beta) {
  const double nrm = v.norm();
  return nrm > beta ? Vector(v * (beta / nrm)) : v;
}

/// Entrywise clamp onto {U : |U_ij| <= rho}; symmetric input stays symmetric.
inline Matrix project_box(const Matrix& u, double rho) { return u.cwiseMax(-rho).cwiseMin(rho); }

/// Euclidean ball of radius beta in R^dim with d(y) = ||y||^2/2, sigma = 1, x0 = 0.
inline FeasibleSet<Vector> ball_projections(double beta, Index dim) {
  if (!(beta > 0.0)) throw std::invalid_argument("ball_projections: beta must be positive");
  FeasibleSet<Vector> set;
  set.prox_center = Vector::Zero(dim);
  set.sigma = 1.0;
  set.project_grad_step = [beta](const Vector& x, const Vector& g, double lip) {
    return project_ball(x - g / lip, beta);
  };
  set.project_model = [beta](const Vector& s, double scale) { return project_ball(-s / scale, beta); };
  set.d_of = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
  set.contains = [beta](const Vector& y, double tol) { return y.norm() <= beta + tol; };
  set.diameter_bound = 0.5 * beta * beta;
  return set;
}

/// Symmetric n x n matrices with |U_ij| <= rho, d(U) = ||U||_F^2/2, sigma = 1, x0 = 0.
inline FeasibleSet<Matrix> box_projections(double rho, Index n) {
  if (!(rho > 0.0)) throw std::invalid_argument("box_projections: rho must be positive");
  FeasibleSet<Matrix> set;
  set.prox_center = Matrix::Zero(n, n);
  set.sigma = 1.0;
  set.project_grad_step = [rho](const Matrix& x, const Matrix& g, double lip) {
    return project_box(x - g / lip, rho);
  };
  set.project_model = [rho](const Matrix& s, double scale) { return project_box(-s / scale, rho); };
  set.d_of = [](const Matrix& u) { return 0.5 * u.squaredNorm(); };
  set.contains = [rho](const Matrix& u, double tol) {
    return u.cwiseAbs().maxCoeff() <= rho + tol && (u - u.transpose()).cwiseAbs().maxCoeff() <= tol;
  };
  const auto nn = static_cast<double>(n);
  set.diameter_bound = 0.5 * rho * rho * nn * nn;
  return set;
}

}  // namespace smoothsdp
