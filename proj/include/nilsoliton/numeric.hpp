#pragma once

// Dense numeric helpers on Eigen matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace nilsoliton {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kRankTolerance = 1e-9;

// Singular values above rel_tol * max(sigma_max, scale) count toward the rank.
template <class M>
int numeric_rank(const M& a, double rel_tol = kRankTolerance, double scale = 0.0) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<M> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  double cut = rel_tol * std::max(s(0), scale);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Orthonormal basis of the kernel, as columns.
template <class M>
M nullspace(const M& a, double rel_tol = kRankTolerance, double scale = 0.0) {
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  double cut = rel_tol * std::max(smax, scale);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

// Minimum-norm least-squares solution.
template <class M, class V>
V min_norm_solve(const M& a, const V& b) {
  Eigen::CompleteOrthogonalDecomposition<M> cod(a);
  cod.setThreshold(kRankTolerance);
  return cod.solve(b);
}

template <class M>
double max_abs(const M& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

inline bool is_real_matrix(const Matrix& a, double tol = 1e-12) {
  return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() <= tol;
}

}  // namespace nilsoliton
