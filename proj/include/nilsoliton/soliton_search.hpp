#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nilsoliton/curvature.hpp"
#include "nilsoliton/nice_basis.hpp"
#include "nilsoliton/pre_einstein.hpp"

namespace nilsoliton {

enum class Route { nice_diagonal, centralizer, gradient_flow, verified_only };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::nice_diagonal: return "nice-diagonal";
    case Route::centralizer: return "centralizer";
    case Route::gradient_flow: return "gradient-flow";
    case Route::verified_only: return "verified-only";
  }
  return "unknown";
}

struct SolitonCertificate {
  NilpotentAlgebra mu_tilde;
  Matrix g;                    // basis change with mu_tilde = g . mu
  double c = 0;
  Matrix einstein_derivation;  // D in m = cI + D
  double beta_sq = 0;
  Matrix phi;                  // m + beta_sq I
  double residual = 0;
  double scalar_curvature = 0;
  double tolerance = 0;
  Route route = Route::verified_only;
  bool passed = false;
};

inline SolitonCertificate verify_nilsoliton(const NilpotentAlgebra& alg, double tol = 1e-9) {
  SolitonCertificate cert;
  cert.mu_tilde = alg;
  cert.g = Matrix::Identity(alg.dim(), alg.dim());
  Matrix m = moment_map(alg).matrix;
  SolitonResidual sr = soliton_residual(m, derivation_algebra(alg));
  cert.c = sr.c;
  cert.einstein_derivation = sr.D;
  cert.beta_sq = -sr.c;
  cert.phi = m + cert.beta_sq * Matrix::Identity(alg.dim(), alg.dim());
  cert.residual = sr.residual;
  cert.scalar_curvature = m.trace().real() / 4.0;
  cert.tolerance = tol;
  cert.passed = sr.residual <= tol;
  return cert;
}

// lambda * mu with scalar curvature -1/4.
inline NilpotentAlgebra normalize_scalar_curvature(const NilpotentAlgebra& alg) {
  if (alg.is_abelian()) throw Error(Errc::invalid_input, "zero bracket has flat metric");
  // tr Ric = -1/2 sum_{i<j} |[e_i,e_j]|^2, so lambda^2 = 1 / (2 S)
  bool exact = true;
  Rational s = 0;
  for (const auto& b : alg.brackets()) {
    auto q = b.coeff.exact_abs_squared();
    if (!q) {
      exact = false;
      break;
    }
    s += *q;
  }
  if (exact) {
    Rational lam2 = 1 / (2 * s);
    if (lam2.get_num().fits_slong_p() && lam2.get_den().fits_slong_p()) {
      long p = lam2.get_num().get_si(), q = lam2.get_den().get_si();
      auto part = detail::make_part(1, q, static_cast<detail::i128>(p) * q);
      if (part) return alg.scaled(RadicalScalar::radical(part->num, part->den, part->rad));
    }
  }
  double sc = scalar_curvature(alg);
  if (!(sc < 0)) throw Error(Errc::invalid_input, "scalar curvature is not negative");
  return alg.scaled(RadicalScalar::inexact(std::sqrt(-0.25 / sc)));
}

// ---------------------------------------------------------------------------
// Diagonal solve for nice bases

struct DiagonalOptions {
  int max_newton = 200;
  double tol = 1e-9;
};

struct DiagonalScaling {
  RealVector s;  // g = diag(exp(s_i / 2))
  bool fast_path = false;
  int iterations = 0;
  std::vector<double> decrements;  // Newton decrement per iteration
};

// f(s) = sum_p kMomentMassFactor * mass_p * exp(<alpha_p, s>) - <mcc, s>
struct DiagonalObjective {
  RealMatrix alpha;  // n x m, weights as columns
  RealVector mass;
  RealVector target;

  double value(const RealVector& s) const {
    RealVector e = (alpha.transpose() * s).array().exp();
    return kMomentMassFactor * mass.dot(e) - target.dot(s);
  }
  RealVector gradient(const RealVector& s) const {
    RealVector e = (alpha.transpose() * s).array().exp();
    return alpha * (kMomentMassFactor * mass.cwiseProduct(e)) - target;
  }
  RealMatrix hessian(const RealVector& s) const {
    RealVector e = (alpha.transpose() * s).array().exp();
    return alpha * (kMomentMassFactor * mass.cwiseProduct(e)).asDiagonal() * alpha.transpose();
  }
};

inline DiagonalObjective diagonal_objective(const std::vector<Weight>& weights, const MccVector& target) {
  const int n = static_cast<int>(weights.front().vec.size());
  const int m = static_cast<int>(weights.size());
  DiagonalObjective f;
  f.alpha.resize(n, m);
  f.mass.resize(m);
  f.target.resize(n);
  for (int p = 0; p < m; ++p) {
    for (int r = 0; r < n; ++r) f.alpha(r, p) = weights[p].vec[r];
    f.mass(p) = weights[p].mass;
  }
  for (int r = 0; r < n; ++r) f.target(r) = target.v[r].get_d();
  return f;
}

inline std::pair<DiagonalScaling, SolitonCertificate> solve_diagonal(const NilpotentAlgebra& alg,
                                                                    const DiagonalOptions& opt = {}) {
  NiceVerdict verdict = admits_nilsoliton_nice(alg);
  if (!verdict.admits) throw Error(Errc::precondition, "Gram system has no positive solution");
  const GramSystem& gram = verdict.gram;
  MccVector target = mcc(gram);
  DiagonalObjective f = diagonal_objective(gram.weights, target);
  const int n = alg.dim();
  const Eigen::Index m = f.alpha.cols();

  DiagonalScaling sc;
  Eigen::JacobiSVD<RealMatrix> svd(f.alpha, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankTolerance * svd.singularValues()(0)) ++r;

  if (r == m) {
    // <alpha_p, s> = log(y_p / (2 mass_p)) with y = x / sum x; min-norm s = A U^{-1} b
    sc.fast_path = true;
    RealVector b(m);
    for (Eigen::Index p = 0; p < m; ++p)
      b(p) = std::log(Rational(gram.witness[p] / target.sum_x).get_d() / (kMomentMassFactor * f.mass(p)));
    RealMatrix u = f.alpha.transpose() * f.alpha;
    sc.s = f.alpha * u.ldlt().solve(b);
  } else {
    RealMatrix q = svd.matrixU().leftCols(r);
    RealVector z = RealVector::Zero(r);
    auto fz = [&](const RealVector& zz) { return f.value(q * zz); };
    bool done = false;
    for (int it = 0; it < opt.max_newton; ++it) {
      RealVector s = q * z;
      RealVector g = q.transpose() * f.gradient(s);
      RealMatrix h = q.transpose() * f.hessian(s) * q;
      RealVector step = -h.ldlt().solve(g);
      double dec2 = -g.dot(step);
      sc.decrements.push_back(std::sqrt(std::max(0.0, dec2)));
      sc.iterations = it + 1;
      if (dec2 / 2 <= 1e-26 || g.norm() <= 1e-14) {
        done = true;
        break;
      }
      double t = 1.0, f0 = fz(z);
      while (t > 1e-12 && !(fz(z + t * step) <= f0 - 0.25 * t * dec2)) t *= 0.5;
      z += t * step;
    }
    if (!done && (q.transpose() * f.gradient(q * z)).norm() > 1e-10)
      throw Error(Errc::non_convergence, "diagonal Newton solve did not converge in " +
                                            std::to_string(opt.max_newton) + " steps");
    sc.s = q * z;
  }

  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = std::exp(sc.s(i) / 2);
  SolitonCertificate cert = verify_nilsoliton(act(g, alg), opt.tol);
  cert.g = g;
  cert.route = Route::nice_diagonal;
  if (std::fabs(cert.scalar_curvature + 0.25) > 1e-9)
    throw Error(Errc::non_convergence, "diagonal solve lost the trace normalization");
  return {sc, cert};
}

// ---------------------------------------------------------------------------
// Shared tensor kernels for the orbit searches (real brackets)

namespace detail {

using RTensor = Tensor3<double>;

inline RTensor real_tensor(const NilpotentAlgebra& alg) {
  StructureTensor t = alg.tensor();
  RTensor r(t.n);
  for (std::size_t q = 0; q < t.c.size(); ++q) r.c[q] = t.c[q].real();
  return r;
}

inline RealMatrix moment(const RTensor& t) {
  const int n = t.n;
  RealMatrix m = RealMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s -= 2.0 * t(a, i, k) * t(b, i, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += t(i, j, a) * t(i, j, b);
      m(a, b) = m(b, a) = s;
    }
  return m;
}

// pi(E) t (x, y) = E t(x, y) - t(Ex, y) - t(x, Ey)
inline RTensor infinitesimal_action(const RealMatrix& e, const RTensor& t) {
  const int n = t.n;
  RTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += e(c, l) * t(a, b, l) - t(l, b, c) * e(l, a) - t(a, l, c) * e(l, b);
        out(a, b, c) = s;
      }
  return out;
}

inline RTensor act_real(const RealMatrix& g, const RTensor& t) {
  StructureTensor c(t.n);
  for (std::size_t q = 0; q < t.c.size(); ++q) c.c[q] = t.c[q];
  Matrix gc = g.cast<cplx>();
  StructureTensor r = act(gc, c);
  RTensor out(t.n);
  for (std::size_t q = 0; q < r.c.size(); ++q) out.c[q] = r.c[q].real();
  return out;
}

inline NilpotentAlgebra to_algebra(const RTensor& t) {
  StructureTensor c(t.n);
  for (std::size_t q = 0; q < t.c.size(); ++q) c.c[q] = t.c[q];
  return algebra_from_tensor(c, Field::real);
}

// M_ab = sum W . pi(E_ab) t, the gl-gradient pulled back from a tensor gradient W.
inline RealMatrix pullback(const RTensor& w, const RTensor& t) {
  const int n = t.n;
  RealMatrix out = RealMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          s += w(p, q, a) * t(p, q, b);
          s -= w(b, p, q) * t(a, p, q);
          s -= w(p, b, q) * t(p, a, q);
        }
      out(a, b) = s;
    }
  return out;
}

}  // namespace detail

struct SearchOutcome {
  std::optional<SolitonCertificate> certificate;
  double final_residual = std::numeric_limits<double>::infinity();
  int steps = 0;
  std::string diagnostic;
};

// ---------------------------------------------------------------------------
// Block-centralizer Gauss-Newton search

struct CentralizerOptions {
  int starts = 32;
  std::uint64_t seed = 0x6E696C;
  double tol = 1e-9;
  int max_iterations = 300;
};

// m* = beta^2 (phi_pre - I) with tr m* = -1.
inline Matrix default_centralizer_target(const PreEinsteinDerivation& pe) {
  const Eigen::Index n = pe.phi.rows();
  cplx denom = static_cast<double>(n) - pe.phi.trace();
  if (std::abs(denom) < 1e-12) throw Error(Errc::precondition, "pre-Einstein derivation has trace n");
  return (pe.phi - Matrix::Identity(n, n)) / denom;
}

inline SearchOutcome solve_in_centralizer(const NilpotentAlgebra& alg, const PreEinsteinDerivation& pe,
                                          std::optional<Matrix> target = std::nullopt,
                                          const CentralizerOptions& opt = {}) {
  if (!alg.has_real_coefficients()) throw Error(Errc::precondition, "centralizer search needs real constants");
  if (!pe.semisimple) throw Error(Errc::precondition, "pre-Einstein derivation is not semisimple");
  const int n = alg.dim();
  RealMatrix tgt = (target ? *target : default_centralizer_target(pe)).real();

  // Eigenbasis of phi, grouped by eigenvalue.
  RealMatrix p(n, n);
  std::vector<int> block_start, block_size;
  int col = 0;
  for (const auto& lam : detail::distinct(pe.eigenvalues)) {
    RealMatrix basis;
    if (pe.exact_phi) {
      RationalMatrix shifted = *pe.exact_phi - RationalMatrix::identity(n).scaled(lam);
      auto ns = nullspace(shifted);
      basis.resize(n, static_cast<Eigen::Index>(ns.size()));
      for (std::size_t v = 0; v < ns.size(); ++v)
        for (int i = 0; i < n; ++i) basis(i, static_cast<Eigen::Index>(v)) = ns[v][i].get_d();
    } else {
      RealMatrix shifted = pe.phi.real() - lam.get_d() * RealMatrix::Identity(n, n);
      basis = nullspace(shifted, 1e-7);
    }
    block_start.push_back(col);
    block_size.push_back(static_cast<int>(basis.cols()));
    if (col + basis.cols() > n) throw Error(Errc::no_solution, "eigenspaces exceed the dimension");
    p.middleCols(col, basis.cols()) = basis;
    col += static_cast<int>(basis.cols());
  }
  if (col != n) throw Error(Errc::no_solution, "pre-Einstein derivation is not diagonalizable");
  RealMatrix pinv = p.inverse();

  std::vector<std::pair<int, int>> params;  // (row, col) inside the block-diagonal matrix
  for (std::size_t b = 0; b < block_start.size(); ++b)
    for (int i = 0; i < block_size[b]; ++i)
      for (int j = 0; j < block_size[b]; ++j) params.emplace_back(block_start[b] + i, block_start[b] + j);
  const int np = static_cast<int>(params.size());
  const int nr = n * (n + 1) / 2;

  const detail::RTensor mu = detail::real_tensor(alg);
  auto build_g = [&](const RealVector& th) {
    RealMatrix blk = RealMatrix::Zero(n, n);
    for (int q = 0; q < np; ++q) blk(params[q].first, params[q].second) = th(q);
    return RealMatrix(p * blk * pinv);
  };
  auto residual_of = [&](const RealMatrix& m) {
    RealVector r(nr);
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) r(k++) = m(a, b) - tgt(a, b);
    return r;
  };
  // Returns false when g is singular.
  auto evaluate = [&](const RealVector& th, RealMatrix& g, detail::RTensor& mt, RealVector& r) {
    g = build_g(th);
    Eigen::FullPivLU<RealMatrix> lu(g);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) return false;
    mt = detail::act_real(g, mu);
    r = residual_of(detail::moment(mt));
    return r.allFinite();
  };

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  SearchOutcome out;
  double best = std::numeric_limits<double>::infinity();

  for (int start = 0; start <= opt.starts; ++start) {
    RealVector th(np);
    if (start == 0) {
      for (int q = 0; q < np; ++q) th(q) = params[q].first == params[q].second ? 1.0 : 0.0;
    } else {
      for (int q = 0; q < np; ++q) th(q) = unif(rng);
    }
    RealMatrix g;
    detail::RTensor mt;
    RealVector r;
    if (!evaluate(th, g, mt, r)) continue;
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (int it = 0; it < opt.max_iterations && std::sqrt(cost) > 1e-3 * opt.tol; ++it, ++out.steps) {
      RealMatrix jac(nr, np);
      RealMatrix ginv = g.inverse();
      for (int q = 0; q < np; ++q) {
        RealMatrix e = RealMatrix::Zero(n, n);
        e(params[q].first, params[q].second) = 1.0;
        RealMatrix dir = p * e * pinv * ginv;
        detail::RTensor nu = detail::infinitesimal_action(dir, mt);
        detail::RTensor plus(n), minus(n);
        for (std::size_t k = 0; k < mt.c.size(); ++k) {
          plus.c[k] = mt.c[k] + nu.c[k];
          minus.c[k] = mt.c[k] - nu.c[k];
        }
        RealMatrix dm = (detail::moment(plus) - detail::moment(minus)) / 2.0;
        int k = 0;
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b) jac(k++, q) = dm(a, b);
      }
      RealMatrix jtj = jac.transpose() * jac;
      RealVector jtr = jac.transpose() * r;
      bool accepted = false;
      while (lambda < 1e12) {
        RealMatrix lhs = jtj;
        lhs.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
        RealVector th2 = th - lhs.ldlt().solve(jtr);
        RealMatrix g2;
        detail::RTensor mt2;
        RealVector r2;
        if (evaluate(th2, g2, mt2, r2) && r2.squaredNorm() < cost) {
          th = th2;
          g = g2;
          mt = mt2;
          r = r2;
          cost = r2.squaredNorm();
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 4.0;
      }
      if (!accepted) break;
    }
    best = std::min(best, std::sqrt(cost));
    if (std::sqrt(cost) > opt.tol) continue;
    SolitonCertificate cert = verify_nilsoliton(detail::to_algebra(mt), opt.tol);
    if (!cert.passed) continue;
    cert.g = g.cast<cplx>();
    cert.route = Route::centralizer;
    out.final_residual = cert.residual;
    out.certificate = std::move(cert);
    out.diagnostic = "converged from start " + std::to_string(start);
    return out;
  }
  out.final_residual = best;
  out.diagnostic = "no certificate found";
  return out;
}

// ---------------------------------------------------------------------------
// Gradient flow of F = |m|^2 / |mu|^4 along the orbit

struct FlowOptions {
  int max_steps = 100000;
  double tol = 1e-6;
  double eta0 = 0.1;
  int check_every = 100;
};

struct FlowState {
  double value = 0;   // F
  RealMatrix gradient;
};

// |mu|^2 = sum_{i<j,k} |C_ij^k|^2
inline double bracket_norm_squared(const detail::RTensor& t) {
  double s = 0;
  for (double x : t.c) s += x * x;
  return s / 2;
}

inline FlowState flow_objective(const detail::RTensor& t) {
  const int n = t.n;
  RealMatrix m = detail::moment(t);
  double g = m.squaredNorm();
  double nn = bracket_norm_squared(t);
  // dG/dT_pqr = -8 sum_b m_pb t_bqr + 4 sum_b m_rb t_pqb
  detail::RTensor w(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        double s = 0;
        for (int b = 0; b < n; ++b) s += -8.0 * m(p, b) * t(b, q, r) + 4.0 * m(r, b) * t(p, q, b);
        w(p, q, r) = s;
      }
  RealMatrix dg = detail::pullback(w, t);
  RealMatrix dn = detail::pullback(t, t);  // dN/dT = t for N = |t|^2 / 2
  FlowState st;
  st.value = g / (nn * nn);
  st.gradient = dg / (nn * nn) - 2.0 * g / (nn * nn * nn) * dn;
  return st;
}

inline SearchOutcome gradient_flow(const NilpotentAlgebra& alg, const FlowOptions& opt = {}) {
  if (!alg.has_real_coefficients()) throw Error(Errc::precondition, "gradient flow needs real constants");
  if (alg.is_abelian()) throw Error(Errc::invalid_input, "zero bracket");
  const int n = alg.dim();
  detail::RTensor t = detail::real_tensor(alg);
  auto renormalize = [](detail::RTensor& x) {
    double s = std::sqrt(bracket_norm_squared(x));
    for (double& v : x.c) v /= s;
  };
  renormalize(t);
  RealMatrix gacc = RealMatrix::Identity(n, n) * std::sqrt(bracket_norm_squared(detail::real_tensor(alg)));

  SearchOutcome out;
  auto check = [&](const detail::RTensor& x) {
    NilpotentAlgebra cand = normalize_scalar_curvature(detail::to_algebra(x));
    SolitonCertificate cert = verify_nilsoliton(cand, opt.tol);
    out.final_residual = cert.residual;
    if (cert.passed) {
      double lam = std::sqrt(-0.25 / scalar_curvature(detail::to_algebra(x)));
      cert.g = (gacc / lam).cast<cplx>();
      cert.route = Route::gradient_flow;
      out.certificate = std::move(cert);
    }
    return out.certificate.has_value();
  };

  FlowState st = flow_objective(t);
  int stagnant = 0;
  for (int step = 0; step < opt.max_steps; ++step) {
    if (step % opt.check_every == 0 && check(t)) {
      out.steps = step;
      out.diagnostic = "converged";
      return out;
    }
    double gn2 = st.gradient.squaredNorm();
    double eta = opt.eta0;
    bool accepted = false;
    detail::RTensor trial;
    FlowState trial_state;
    RealMatrix update;
    while (eta > 1e-18) {
      update = RealMatrix::Identity(n, n) - eta * st.gradient;
      trial = detail::act_real(update, t);
      double s = std::sqrt(bracket_norm_squared(trial));
      for (double& v : trial.c) v /= s;
      update *= s;
      trial_state = flow_objective(trial);
      if (trial_state.value <= st.value - 1e-4 * eta * gn2) {
        accepted = true;
        break;
      }
      eta /= 2;
    }
    out.steps = step + 1;
    if (!accepted) {
      out.diagnostic = "step-size underflow";
      break;
    }
    double rel = (st.value - trial_state.value) / std::max(st.value, 1e-300);
    stagnant = rel < 1e-14 ? stagnant + 1 : 0;
    t = std::move(trial);
    st = std::move(trial_state);
    gacc = update * gacc;
    if (stagnant >= 50) {
      out.diagnostic = "stagnated";
      break;
    }
  }
  if (check(t)) {
    out.diagnostic = "converged";
    return out;
  }
  if (out.diagnostic.empty()) out.diagnostic = "max steps exceeded";
  return out;
}

}  // namespace nilsoliton
