#pragma once

#include <vector>

#include "nilsoliton/algebra.hpp"

namespace nilsoliton {

struct DerivationSpace {
  int dimension = 0;
  std::vector<Matrix> basis;  // orthonormal for the Frobenius inner product
  bool exact = false;
  std::vector<RationalMatrix> exact_basis;  // filled on the exact path
  double leibniz_residual = 0;
};

namespace detail {

// Row (a<b, c), column p*n+q of the operator D -> D[.,.] - [D.,.] - [.,D.].
template <class T, class Tensor>
void fill_leibniz(const Tensor& t, int n, T& op) {
  int row = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c, ++row) {
        for (int l = 0; l < n; ++l) {
          op(row, c * n + l) += t(a, b, l);
          op(row, l * n + a) -= t(l, b, c);
          op(row, l * n + b) -= t(a, l, c);
        }
      }
}

}  // namespace detail

// max |D[x,y] - [Dx,y] - [x,Dy]| over basis pairs.
inline double leibniz_residual(const StructureTensor& t, const Matrix& d) {
  const int n = t.n;
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cplx s = 0;
        for (int l = 0; l < n; ++l) s += d(c, l) * t(a, b, l) - d(l, a) * t(l, b, c) - d(l, b) * t(a, l, c);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

inline double leibniz_residual(const NilpotentAlgebra& alg, const Matrix& d) { return leibniz_residual(alg.tensor(), d); }

inline bool is_exact_derivation(const NilpotentAlgebra& alg, const RationalMatrix& d) {
  if (!alg.is_rational()) throw Error(Errc::precondition, "exact derivation test needs rational constants");
  auto t = alg.rational_tensor();
  const int n = alg.dim();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Rational s = 0;
        for (int l = 0; l < n; ++l) s += d(c, l) * t(a, b, l) - d(l, a) * t(l, b, c) - d(l, b) * t(a, l, c);
        if (s != 0) return false;
      }
  return true;
}

inline Matrix to_matrix(const RationalMatrix& q) {
  Matrix m(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) m(i, j) = q(i, j).get_d();
  return m;
}

inline DerivationSpace derivation_algebra(const NilpotentAlgebra& alg) {
  const int n = alg.dim();
  const int rows = n * (n - 1) / 2 * n;
  DerivationSpace out;
  Matrix kernel;  // columns = vec(D)

  if (alg.is_rational()) {
    RationalMatrix op(rows, n * n);
    detail::fill_leibniz(alg.rational_tensor(), n, op);
    auto ns = nullspace(op);
    out.exact = true;
    RealMatrix raw(n * n, static_cast<Eigen::Index>(ns.size()));
    for (std::size_t v = 0; v < ns.size(); ++v) {
      RationalMatrix d(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          d(p, q) = ns[v][p * n + q];
          raw(p * n + q, static_cast<Eigen::Index>(v)) = d(p, q).get_d();
        }
      out.exact_basis.push_back(std::move(d));
    }
    if (raw.cols() > 0) {
      Eigen::HouseholderQR<RealMatrix> qr(raw);
      kernel = (qr.householderQ() * RealMatrix::Identity(raw.rows(), raw.cols())).cast<cplx>();
    } else {
      kernel.resize(n * n, 0);
    }
  } else {
    StructureTensor t = alg.tensor();
    double scale = 0;
    for (const auto& x : t.c) scale = std::max(scale, std::abs(x));
    if (alg.has_real_coefficients()) {
      RealMatrix op = RealMatrix::Zero(rows, n * n);
      Tensor3<double> tr(n);
      for (std::size_t q = 0; q < t.c.size(); ++q) tr.c[q] = t.c[q].real();
      detail::fill_leibniz(tr, n, op);
      kernel = nilsoliton::nullspace(op, kRankTolerance, scale).cast<cplx>();
    } else {
      Matrix op = Matrix::Zero(rows, n * n);
      detail::fill_leibniz(t, n, op);
      kernel = nilsoliton::nullspace(op, kRankTolerance, scale);
    }
  }

  StructureTensor t = alg.tensor();
  out.dimension = static_cast<int>(kernel.cols());
  for (Eigen::Index v = 0; v < kernel.cols(); ++v) {
    Matrix d(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) d(p, q) = kernel(p * n + q, v);
    out.leibniz_residual = std::max(out.leibniz_residual, leibniz_residual(t, d));
    out.basis.push_back(std::move(d));
  }
  return out;
}

}  // namespace nilsoliton
