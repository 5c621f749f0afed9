#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "nilsoliton/error.hpp"
#include "nilsoliton/numeric.hpp"
#include "nilsoliton/radical.hpp"
#include "nilsoliton/rational.hpp"

namespace nilsoliton {

enum class Field { real, complex };

inline const char* field_name(Field f) { return f == Field::real ? "real" : "complex"; }

// [e_i, e_j] has coefficient `coeff` on e_k. Indices are 0-based, i < j.
struct Bracket {
  int i = 0, j = 0, k = 0;
  RadicalScalar coeff;
};

// Full antisymmetric structure tensor, c(i, j, k) = C_ij^k.
template <class T>
struct Tensor3 {
  int n = 0;
  std::vector<T> c;

  Tensor3() = default;
  explicit Tensor3(int dim) : n(dim), c(static_cast<std::size_t>(dim) * dim * dim) {}

  T& operator()(int i, int j, int k) { return c[(static_cast<std::size_t>(i) * n + j) * n + k]; }
  const T& operator()(int i, int j, int k) const { return c[(static_cast<std::size_t>(i) * n + j) * n + k]; }

  double norm_squared() const {
    double s = 0;
    for (const auto& x : c) s += std::norm(cplx(x));
    return s;
  }
};

using StructureTensor = Tensor3<cplx>;

class NilpotentAlgebra {
 public:
  NilpotentAlgebra() = default;

  NilpotentAlgebra(int dim, std::vector<Bracket> brackets, Field field = Field::real) : dim_(dim), field_(field) {
    if (dim < 1) throw Error(Errc::invalid_input, "dimension must be positive");
    std::map<std::tuple<int, int, int>, RadicalScalar> seen;
    for (auto b : brackets) {
      if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= dim || b.j >= dim || b.k >= dim)
        throw Error(Errc::invalid_input, "bracket index out of range");
      if (b.i == b.j) throw Error(Errc::invalid_input, "bracket [e_i, e_i] must vanish");
      if (b.i > b.j) {
        std::swap(b.i, b.j);
        b.coeff = -b.coeff;
      }
      if (field == Field::real && !b.coeff.is_real())
        throw Error(Errc::invalid_input, "complex coefficient in a real algebra");
      auto key = std::make_tuple(b.i, b.j, b.k);
      if (seen.count(key)) throw Error(Errc::invalid_input, "duplicate bracket key");
      seen.emplace(key, b.coeff);
    }
    for (auto& [key, c] : seen)
      if (!c.is_zero()) brackets_.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
  }

  int dim() const { return dim_; }
  Field field() const { return field_; }
  const std::vector<Bracket>& brackets() const { return brackets_; }
  bool is_abelian() const { return brackets_.empty(); }

  bool is_exact() const {
    return std::all_of(brackets_.begin(), brackets_.end(), [](const Bracket& b) { return b.coeff.exact(); });
  }
  bool is_rational() const {
    return std::all_of(brackets_.begin(), brackets_.end(), [](const Bracket& b) { return b.coeff.is_rational(); });
  }
  bool has_real_coefficients() const {
    return std::all_of(brackets_.begin(), brackets_.end(), [](const Bracket& b) { return b.coeff.is_real(); });
  }

  RadicalScalar coefficient(int i, int j, int k) const {
    bool flip = i > j;
    if (flip) std::swap(i, j);
    for (const auto& b : brackets_)
      if (b.i == i && b.j == j && b.k == k) return flip ? -b.coeff : b.coeff;
    return {};
  }

  StructureTensor tensor() const {
    StructureTensor t(dim_);
    for (const auto& b : brackets_) {
      cplx v = b.coeff.value();
      t(b.i, b.j, b.k) += v;
      t(b.j, b.i, b.k) -= v;
    }
    return t;
  }

  // Only valid when is_rational().
  Tensor3<Rational> rational_tensor() const {
    Tensor3<Rational> t(dim_);
    for (const auto& b : brackets_) {
      Rational q = *b.coeff.as_rational();
      t(b.i, b.j, b.k) += q;
      t(b.j, b.i, b.k) -= q;
    }
    return t;
  }

  // Sum over i<j of |[e_i, e_j]|^2.
  double bracket_norm_squared() const {
    double s = 0;
    for (const auto& b : brackets_) s += b.coeff.abs_squared();
    return s;
  }

  NilpotentAlgebra scaled(const RadicalScalar& lambda) const {
    std::vector<Bracket> out = brackets_;
    for (auto& b : out) b.coeff = lambda * b.coeff;
    return NilpotentAlgebra(dim_, std::move(out), field_);
  }

  NilpotentAlgebra with_field(Field f) const { return NilpotentAlgebra(dim_, brackets_, f); }

 private:
  int dim_ = 0;
  Field field_ = Field::real;
  std::vector<Bracket> brackets_;
};

// Rebuilds an algebra from a numeric tensor; entries below drop_tol * max|C| are treated as zero.
inline NilpotentAlgebra algebra_from_tensor(const StructureTensor& t, Field field, double drop_tol = 1e-13) {
  double mx = 0;
  for (const auto& x : t.c) mx = std::max(mx, std::abs(x));
  std::vector<Bracket> br;
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j)
      for (int k = 0; k < t.n; ++k) {
        cplx v = t(i, j, k);
        if (std::abs(v) <= drop_tol * mx) continue;
        if (field == Field::real || std::fabs(v.imag()) <= drop_tol * mx) v = v.real();
        br.push_back({i, j, k, RadicalScalar::inexact(v)});
      }
  return NilpotentAlgebra(t.n, std::move(br), field);
}

inline NilpotentAlgebra complexify(const NilpotentAlgebra& alg) { return alg.with_field(Field::complex); }

// ---------------------------------------------------------------------------
// Linear maps

struct LinearMap {
  int n = 0;
  std::vector<RadicalScalar> a;  // row-major

  LinearMap() = default;
  explicit LinearMap(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}

  static LinearMap identity(int dim) {
    LinearMap m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = RadicalScalar::rational(1);
    return m;
  }
  static LinearMap diagonal(const std::vector<RadicalScalar>& d) {
    LinearMap m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m(i, i) = d[i];
    return m;
  }
  static LinearMap from_matrix(const Matrix& g) {
    LinearMap m(static_cast<int>(g.rows()));
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j)
        if (g(i, j) != 0.0) m(i, j) = RadicalScalar::inexact(g(i, j));
    return m;
  }

  RadicalScalar& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const RadicalScalar& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  bool is_exact() const {
    return std::all_of(a.begin(), a.end(), [](const RadicalScalar& x) { return x.exact(); });
  }
  bool is_diagonal() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
  }

  Matrix matrix() const {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j).value();
    return m;
  }
};

namespace detail {

// out(a,b,c) = sum g(c,l) t(i,j,l) h(i,a) h(j,b), h = g^{-1}
inline StructureTensor transform(const Matrix& g, const Matrix& h, const StructureTensor& t) {
  const int n = t.n;
  StructureTensor s1(n), s2(n), out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        cplx acc = 0;
        for (int l = 0; l < n; ++l) acc += g(c, l) * t(i, j, l);
        s1(i, j, c) = acc;
      }
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        cplx acc = 0;
        for (int i = 0; i < n; ++i) acc += h(i, a) * s1(i, j, c);
        s2(a, j, c) = acc;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cplx acc = 0;
        for (int j = 0; j < n; ++j) acc += h(j, b) * s2(a, j, c);
        out(a, b, c) = acc;
      }
  return out;
}

}  // namespace detail

// (g.mu)(x, y) = g mu(g^{-1} x, g^{-1} y) on a dense tensor.
inline StructureTensor act(const Matrix& g, const StructureTensor& t) {
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible()) throw Error(Errc::singular_map, "basis change is singular");
  return detail::transform(g, lu.inverse(), t);
}

inline NilpotentAlgebra act(const Matrix& g, const NilpotentAlgebra& alg) {
  if (g.rows() != alg.dim() || g.cols() != alg.dim()) throw Error(Errc::invalid_input, "map has wrong size");
  Field f = alg.field();
  if (f == Field::real && !is_real_matrix(g)) f = Field::complex;
  return algebra_from_tensor(act(g, alg.tensor()), f);
}

inline NilpotentAlgebra act(const LinearMap& g, const NilpotentAlgebra& alg) {
  if (g.n != alg.dim()) throw Error(Errc::invalid_input, "map has wrong size");
  if (g.is_diagonal()) {
    for (int i = 0; i < g.n; ++i)
      if (g(i, i).is_zero()) throw Error(Errc::singular_map, "basis change is singular");
    if (g.is_exact() && alg.is_exact()) {
      std::vector<RadicalScalar> inv(g.n);
      for (int i = 0; i < g.n; ++i) inv[i] = g(i, i).inverse();
      std::vector<Bracket> out;
      bool complex_g = false;
      for (int i = 0; i < g.n; ++i) complex_g = complex_g || !g(i, i).is_real();
      for (const auto& b : alg.brackets()) out.push_back({b.i, b.j, b.k, g(b.k, b.k) * inv[b.i] * inv[b.j] * b.coeff});
      return NilpotentAlgebra(alg.dim(), std::move(out), complex_g ? Field::complex : alg.field());
    }
  }
  return act(g.matrix(), alg);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  double jacobi_residual = 0;
  bool jacobi_exact = false;            // residual computed in exact arithmetic
  bool jacobi_ok = false;
  std::optional<int> nilpotency_class;  // empty when the lower central series stalls
  std::vector<int> lower_central_dims;  // dim g^1, g^2, ...
  bool passed = false;
  std::string message;
};

namespace detail {

inline double jacobi_residual(const StructureTensor& t) {
  const int n = t.n;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          cplx s = 0;
          for (int l = 0; l < n; ++l)
            s += t(i, j, l) * t(l, k, m) + t(j, k, l) * t(l, i, m) + t(k, i, l) * t(l, j, m);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

inline bool jacobi_exact_zero(const Tensor3<Rational>& t) {
  const int n = t.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Rational s = 0;
          for (int l = 0; l < n; ++l)
            s += t(i, j, l) * t(l, k, m) + t(j, k, l) * t(l, i, m) + t(k, i, l) * t(l, j, m);
          if (s != 0) return false;
        }
  return true;
}

// Dimensions of g^1 = g, g^{k+1} = [g, g^k], until zero or stalled.
inline std::vector<int> lower_central_numeric(const StructureTensor& t) {
  const int n = t.n;
  double scale = 0;
  for (const auto& x : t.c) scale = std::max(scale, std::abs(x));
  Matrix basis = Matrix::Identity(n, n);
  std::vector<int> dims{n};
  while (basis.cols() > 0) {
    Matrix gen(n, n * basis.cols());
    for (int i = 0; i < n; ++i)
      for (Eigen::Index v = 0; v < basis.cols(); ++v)
        for (int k = 0; k < n; ++k) {
          cplx acc = 0;
          for (int l = 0; l < n; ++l) acc += t(i, l, k) * basis(l, v);
          gen(k, i * basis.cols() + v) = acc;
        }
    Eigen::JacobiSVD<Matrix> svd(gen, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double cut = kRankTolerance * std::max(s.size() ? s(0) : 0.0, scale);
    Eigen::Index r = 0;
    for (Eigen::Index q = 0; q < s.size(); ++q)
      if (s(q) > cut) ++r;
    if (r == basis.cols()) break;  // stalled
    basis = svd.matrixU().leftCols(r);
    dims.push_back(static_cast<int>(r));
  }
  return dims;
}

inline std::vector<int> lower_central_exact(const Tensor3<Rational>& t) {
  const int n = t.n;
  RationalMatrix basis = RationalMatrix::identity(static_cast<std::size_t>(n));  // rows span g^k
  std::vector<int> dims{n};
  while (basis.rows() > 0) {
    RationalMatrix gen(static_cast<std::size_t>(n) * basis.rows(), n);
    for (int i = 0; i < n; ++i)
      for (std::size_t v = 0; v < basis.rows(); ++v)
        for (int k = 0; k < n; ++k) {
          Rational acc = 0;
          for (int l = 0; l < n; ++l)
            if (t(i, l, k) != 0) acc += t(i, l, k) * basis(v, l);
          gen(i * basis.rows() + v, k) = acc;
        }
    Rref r = rref(gen);
    if (r.pivots.size() == basis.rows()) break;
    RationalMatrix next(r.pivots.size(), n);
    for (std::size_t q = 0; q < r.pivots.size(); ++q)
      for (int k = 0; k < n; ++k) next(q, k) = r.reduced(q, k);
    basis = std::move(next);
    dims.push_back(static_cast<int>(basis.rows()));
  }
  return dims;
}

}  // namespace detail

inline ValidationReport validate(const NilpotentAlgebra& alg, double tol = 1e-12) {
  ValidationReport rep;
  if (alg.dim() < 1) throw Error(Errc::invalid_input, "dimension must be positive");
  StructureTensor t = alg.tensor();
  rep.jacobi_residual = detail::jacobi_residual(t);
  bool& jacobi_ok = rep.jacobi_ok;
  jacobi_ok = rep.jacobi_residual <= tol;
  if (alg.is_rational()) {
    auto q = alg.rational_tensor();
    rep.jacobi_exact = true;
    jacobi_ok = detail::jacobi_exact_zero(q);
    rep.lower_central_dims = detail::lower_central_exact(q);
  } else {
    rep.lower_central_dims = detail::lower_central_numeric(t);
  }
  if (rep.lower_central_dims.back() == 0) rep.nilpotency_class = static_cast<int>(rep.lower_central_dims.size()) - 1;
  rep.passed = jacobi_ok && rep.nilpotency_class.has_value();
  if (!jacobi_ok) rep.message = "Jacobi identity fails";
  else if (!rep.nilpotency_class) rep.message = "lower central series does not terminate";
  else rep.message = "ok";
  return rep;
}

}  // namespace nilsoliton
