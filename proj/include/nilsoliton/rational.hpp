#pragma once

// Exact rational linear algebra over GMP rationals.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilsoliton/error.hpp"

namespace nilsoliton {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw Error(Errc::invalid_input, "matrix shape mismatch");
    RationalMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& x = (*this)(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += x * o(k, j);
      }
    return out;
  }

  RationalMatrix operator+(const RationalMatrix& o) const {
    RationalMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
    return out;
  }

  RationalMatrix operator-(const RationalMatrix& o) const {
    RationalMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= o.a_[i];
    return out;
  }

  RationalMatrix scaled(const Rational& s) const {
    RationalMatrix out = *this;
    for (auto& x : out.a_) x *= s;
    return out;
  }

  RationalMatrix transpose() const {
    RationalMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Rational trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

struct Rref {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

// Gauss-Jordan elimination to reduced row echelon form.
inline Rref rref(RationalMatrix a) {
  Rref out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(a);
  return out;
}

inline std::size_t rank(const RationalMatrix& a) { return rref(a).pivots.size(); }

// Basis of {x : a x = 0}, one vector per free column.
inline std::vector<RationalVector> nullspace(const RationalMatrix& a) {
  Rref r = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct LinearSolution {
  bool consistent = false;
  RationalVector particular;                // free variables set to zero
  std::vector<RationalVector> nullspace;
};

inline LinearSolution solve(const RationalMatrix& a, const RationalVector& b) {
  if (b.size() != a.rows()) throw Error(Errc::invalid_input, "rhs size mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref r = rref(aug);
  LinearSolution out;
  if (!r.pivots.empty() && r.pivots.back() == a.cols()) return out;
  out.consistent = true;
  out.particular.assign(a.cols(), 0);
  for (std::size_t i = 0; i < r.pivots.size(); ++i) out.particular[r.pivots[i]] = r.reduced(i, a.cols());
  out.nullspace = nilsoliton::nullspace(a);
  return out;
}

inline RationalVector multiply(const RationalMatrix& a, const RationalVector& x) {
  RationalVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  std::string s = c.get_num().get_str();
  if (c.get_den() != 1) s += "/" + c.get_den().get_str();
  return s;
}

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw Error(Errc::invalid_input, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw Error(Errc::invalid_input, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

// Best rational approximation with bounded denominator, via continued fractions.
// Returns nullopt when no candidate lies within tol of x.
inline std::optional<Rational> rational_approximation(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    if (std::fabs(a) > 9.0e15) break;
    mpz_class ai(static_cast<long>(a));
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    Rational cand(h1, k1);
    cand.canonicalize();
    if (std::fabs(cand.get_d() - x) <= tol) return cand;
    double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace nilsoliton
