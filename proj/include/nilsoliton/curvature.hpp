#pragma once

#include "nilsoliton/algebra.hpp"
#include "nilsoliton/derivations.hpp"

namespace nilsoliton {

// For a nice basis m(mu) = kMomentMassFactor * sum |c|^2 (E_kk - E_ii - E_jj).
// The diagonal solver relies on the same constant.
inline constexpr double kMomentMassFactor = 2.0;

// <Ric x, y> = -1/2 sum_i <[x,e_i],[y,e_i]> + 1/4 sum_ij <[e_i,e_j],x><[e_i,e_j],y>
inline Matrix ricci_operator(const StructureTensor& t) {
  const int n = t.n;
  Matrix ric = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      cplx s = 0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s -= 0.5 * t(a, i, k) * std::conj(t(b, i, k));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += 0.25 * t(i, j, a) * std::conj(t(i, j, b));
      ric(a, b) = s;
      ric(b, a) = std::conj(s);
    }
  return ric;
}

inline Matrix ricci_operator(const NilpotentAlgebra& alg) { return ricci_operator(alg.tensor()); }

struct MomentMapValue {
  Matrix matrix;  // Hermitian; m = 4 Ric
};

inline Matrix moment_matrix(const StructureTensor& t) { return 4.0 * ricci_operator(t); }

inline MomentMapValue moment_map(const NilpotentAlgebra& alg) { return {moment_matrix(alg.tensor())}; }

inline double scalar_curvature(const NilpotentAlgebra& alg) { return ricci_operator(alg).trace().real(); }

struct SolitonResidual {
  double c = 0;
  Matrix D;
  double residual = 0;  // Frobenius norm of m - cI - D
};

// Least-squares split of m over span{I} + Der, minimum-norm coefficients.
inline SolitonResidual soliton_residual(const Matrix& m, const DerivationSpace& ders) {
  const Eigen::Index n = m.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(ders.basis.size());
  Matrix a(n * n, k + 1);
  Vector rhs(n * n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      a(p * n + q, 0) = p == q ? 1.0 : 0.0;
      for (Eigen::Index v = 0; v < k; ++v) a(p * n + q, v + 1) = ders.basis[v](p, q);
      rhs(p * n + q) = m(p, q);
    }
  Vector sol = min_norm_solve(a, rhs);
  SolitonResidual out;
  out.c = sol(0).real();
  out.D = Matrix::Zero(n, n);
  for (Eigen::Index v = 0; v < k; ++v) out.D += sol(v + 1) * ders.basis[v];
  out.residual = (m - sol(0) * Matrix::Identity(n, n) - out.D).norm();
  return out;
}

inline SolitonResidual soliton_residual(const NilpotentAlgebra& alg, const DerivationSpace& ders) {
  return soliton_residual(moment_map(alg).matrix, ders);
}

}  // namespace nilsoliton
