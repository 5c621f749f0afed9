#pragma once

// Exact two-phase simplex over the rationals, Bland's rule.

#include <vector>

#include "nilsoliton/rational.hpp"

namespace nilsoliton {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  RationalVector x;
  Rational value;
};

namespace detail {

class Tableau {
 public:
  Tableau(const RationalMatrix& a, const RationalVector& b)
      : rows_(a.rows()), n_(a.cols()), cols_(a.cols() + a.rows()), t_(a.rows() + 1, a.cols() + a.rows() + 1) {
    for (std::size_t i = 0; i < rows_; ++i) {
      bool flip = b[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = flip ? Rational(-a(i, j)) : a(i, j);
      t_(i, n_ + i) = 1;
      t_(i, cols_) = flip ? Rational(-b[i]) : b[i];
      basis_.push_back(n_ + i);
    }
  }

  // Minimizes cost . x over the allowed columns (first `allowed` columns).
  LpResult::Status minimize(const RationalVector& cost, std::size_t allowed) {
    const std::size_t obj = rows_;
    for (std::size_t j = 0; j <= cols_; ++j) t_(obj, j) = j < cols_ ? cost[j] : Rational(0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_(obj, j) -= cb * t_(i, j);
    }
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed; ++j)
        if (t_(obj, j) < 0) {
          enter = j;
          break;
        }
      if (enter == cols_) return LpResult::Status::optimal;
      std::size_t leave = rows_;
      Rational best;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (t_(i, enter) <= 0) continue;
        Rational ratio = t_(i, cols_) / t_(i, enter);
        if (leave == rows_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_) return LpResult::Status::unbounded;
      pivot(leave, enter);
    }
  }

  // Moves zero-level artificial variables out of the basis where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_(i, j) != 0) {
          pivot(i, j);
          break;
        }
    }
  }

  Rational objective() const { return -t_(rows_, cols_); }

  RationalVector solution() const {
    RationalVector x(n_);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_(i, cols_);
    return x;
  }

  std::size_t structural() const { return n_; }
  std::size_t total() const { return cols_; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / t_(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) t_(r, j) *= inv;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      Rational f = t_(i, c);
      for (std::size_t j = 0; j <= cols_; ++j) t_(i, j) -= f * t_(r, j);
    }
    basis_[r] = c;
  }

  std::size_t rows_, n_, cols_;
  RationalMatrix t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// maximize c.x subject to A x = b, x >= 0
inline LpResult simplex_maximize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  detail::Tableau tab(a, b);
  const std::size_t n = a.cols();
  RationalVector phase1(tab.total(), 0);
  for (std::size_t j = n; j < tab.total(); ++j) phase1[j] = 1;
  tab.minimize(phase1, tab.total());
  LpResult out;
  if (tab.objective() != 0) {
    out.status = LpResult::Status::infeasible;
    return out;
  }
  tab.expel_artificials();
  RationalVector phase2(tab.total(), 0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = -c[j];
  out.status = tab.minimize(phase2, n);
  if (out.status != LpResult::Status::optimal) return out;
  out.x = tab.solution();
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  return out;
}

}  // namespace nilsoliton
