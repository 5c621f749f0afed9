#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "nilsoliton/derivations.hpp"

namespace nilsoliton {

struct PreEinsteinDerivation {
  Matrix phi;
  std::optional<RationalMatrix> exact_phi;
  std::vector<Rational> eigenvalues;  // with multiplicity, ascending
  bool semisimple = false;
  bool positive = false;
  double trace_residual = 0;  // max_j |tr(phi D_j) - tr(D_j)|
  double leibniz_residual = 0;
};

namespace detail {

// Characteristic polynomial coefficients c_0..c_n (c_n = 1) by Faddeev-LeVerrier.
inline RationalVector char_poly(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  RationalVector c(n + 1);
  c[n] = 1;
  RationalMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    c[n - k] = -(a * m).trace() / Rational(static_cast<long>(k));
  }
  return c;
}

// Divides p by (x - r) when r is a root.
inline bool divide_root(RationalVector& p, const Rational& r) {
  const std::size_t deg = p.size() - 1;
  RationalVector q(deg);
  Rational acc = p[deg];
  for (std::size_t k = deg; k-- > 0;) {
    q[k] = acc;
    acc = p[k] + acc * r;
  }
  if (acc != 0) return false;
  p = std::move(q);
  return true;
}

inline std::vector<Rational> distinct(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Rational reconstruction of the numeric spectrum; nullopt if any eigenvalue is not recognizably rational.
inline std::optional<std::vector<Rational>> rational_spectrum(const Matrix& phi) {
  Eigen::ComplexEigenSolver<Matrix> es(phi, false);
  std::vector<Rational> out;
  double scale = std::max(1.0, max_abs(phi));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx ev = es.eigenvalues()(i);
    if (std::fabs(ev.imag()) > 1e-6 * scale) return std::nullopt;
    auto q = rational_approximation(ev.real(), 1000000, 1e-6 * scale);
    if (!q) return std::nullopt;
    out.push_back(*q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline PreEinsteinDerivation pre_einstein_derivation(const NilpotentAlgebra& alg, const DerivationSpace& ders) {
  const int n = alg.dim();
  const Eigen::Index k = static_cast<Eigen::Index>(ders.basis.size());
  PreEinsteinDerivation out;

  // Gram-type system: sum_k a_k tr(D_k D_j) = tr(D_j)
  Matrix g(k, k);
  Vector t(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    t(j) = ders.basis[j].trace();
    for (Eigen::Index l = 0; l < k; ++l) g(j, l) = (ders.basis[l] * ders.basis[j]).trace();
  }
  Vector coef = min_norm_solve(g, t);
  double consistency = (g * coef - t).norm();
  if (consistency > 1e-8 * std::max(1.0, t.norm()))
    throw Error(Errc::no_solution, "trace system has no solution in the derivation span");
  out.phi = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < k; ++l) out.phi += coef(l) * ders.basis[l];

  if (ders.exact) {
    // Minimize the Frobenius norm over the exact basis: KKT system [M G^T; G 0].
    const std::size_t kk = ders.exact_basis.size();
    RationalMatrix kkt(2 * kk, 2 * kk);
    RationalVector rhs(2 * kk);
    for (std::size_t j = 0; j < kk; ++j) {
      rhs[kk + j] = ders.exact_basis[j].trace();
      for (std::size_t l = 0; l < kk; ++l) {
        Rational gram = (ders.exact_basis[l] * ders.exact_basis[j]).trace();
        Rational frob = (ders.exact_basis[j].transpose() * ders.exact_basis[l]).trace();
        kkt(j, l) = frob;
        kkt(kk + j, l) = gram;
        kkt(l, kk + j) = gram;
      }
    }
    LinearSolution sol = solve(kkt, rhs);
    if (!sol.consistent) throw Error(Errc::no_solution, "exact trace system has no solution");
    RationalMatrix phi(n, n);
    for (std::size_t l = 0; l < kk; ++l) phi = phi + ders.exact_basis[l].scaled(sol.particular[l]);
    out.exact_phi = phi;
    out.phi = to_matrix(phi);

    RationalVector poly = detail::char_poly(phi);
    auto guess = detail::rational_spectrum(out.phi);
    if (guess)
      for (const auto& r : detail::distinct(*guess))
        while (poly.size() > 1 && detail::divide_root(poly, r)) out.eigenvalues.push_back(r);
    if (out.eigenvalues.size() != static_cast<std::size_t>(n))
      throw Error(Errc::irrational_eigenvalues, "pre-Einstein derivation has non-rational spectrum");
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    RationalMatrix prod = RationalMatrix::identity(n);
    for (const auto& r : detail::distinct(out.eigenvalues))
      prod = prod * (phi - RationalMatrix::identity(n).scaled(r));
    out.semisimple = prod.is_zero();
  } else {
    auto spec = detail::rational_spectrum(out.phi);
    if (!spec) throw Error(Errc::irrational_eigenvalues, "pre-Einstein derivation has non-rational spectrum");
    out.eigenvalues = *spec;
    Matrix prod = Matrix::Identity(n, n);
    for (const auto& r : detail::distinct(out.eigenvalues))
      prod = prod * (out.phi - r.get_d() * Matrix::Identity(n, n));
    double bound = 1e-7 * std::pow(1.0 + max_abs(out.phi), static_cast<double>(detail::distinct(out.eigenvalues).size()));
    out.semisimple = max_abs(prod) <= bound;
  }

  for (Eigen::Index j = 0; j < k; ++j)
    out.trace_residual = std::max(out.trace_residual, std::abs((out.phi * ders.basis[j]).trace() - ders.basis[j].trace()));
  out.leibniz_residual = leibniz_residual(alg, out.phi);
  out.positive = !out.eigenvalues.empty() && out.eigenvalues.front() > 0;
  return out;
}

inline PreEinsteinDerivation pre_einstein_derivation(const NilpotentAlgebra& alg) {
  return pre_einstein_derivation(alg, derivation_algebra(alg));
}

struct EigenvalueType {
  std::vector<long> type;  // coprime integers, same order as the eigenvalues
  Rational scale;          // eigenvalues = scale * type; zero for the zero map
};

inline EigenvalueType eigenvalue_type(const std::vector<Rational>& eigenvalues) {
  EigenvalueType out;
  mpz_class l = 1, g = 0;
  for (const auto& q : eigenvalues) l = lcm(l, q.get_den());
  std::vector<mpz_class> ints;
  for (const auto& q : eigenvalues) {
    mpz_class v = q.get_num() * (l / q.get_den());
    ints.push_back(v);
    g = gcd(g, v);
  }
  if (g == 0) {
    out.type.assign(eigenvalues.size(), 0);
    out.scale = 0;
    return out;
  }
  for (const auto& v : ints) {
    mpz_class r = v / g;
    if (!r.fits_slong_p()) throw Error(Errc::invalid_input, "eigenvalue type too large");
    out.type.push_back(r.get_si());
  }
  out.scale = Rational(g, l);
  out.scale.canonicalize();
  return out;
}

inline EigenvalueType eigenvalue_type(const PreEinsteinDerivation& pe) {
  if (pe.eigenvalues.size() != static_cast<std::size_t>(pe.phi.rows()))
    throw Error(Errc::irrational_eigenvalues, "eigenvalues are not rational");
  return eigenvalue_type(pe.eigenvalues);
}

struct Positivity {
  bool positive = false;
  std::optional<Rational> witness;  // a non-positive eigenvalue
};

inline Positivity positivity_obstruction(const std::vector<Rational>& eigenvalues) {
  Positivity p;
  p.positive = true;
  for (const auto& q : eigenvalues)
    if (q <= 0 && (!p.witness || q < *p.witness)) {
      p.positive = false;
      p.witness = q;
    }
  return p;
}

inline Positivity positivity_obstruction(const PreEinsteinDerivation& pe) {
  return positivity_obstruction(pe.eigenvalues);
}

}  // namespace nilsoliton
