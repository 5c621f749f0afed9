#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nilsoliton/algebra.hpp"
#include "nilsoliton/lp.hpp"

namespace nilsoliton {

struct NiceBasisReport {
  bool nice = true;
  std::vector<std::string> violations;
};

inline NiceBasisReport is_nice_basis(const NilpotentAlgebra& alg) {
  NiceBasisReport rep;
  std::map<std::pair<int, int>, std::set<int>> targets;  // (i,j) -> k
  std::map<std::pair<int, int>, std::set<int>> sources;  // (i,k) -> j
  for (const auto& b : alg.brackets()) {
    targets[{b.i, b.j}].insert(b.k);
    sources[{b.i, b.k}].insert(b.j);
    sources[{b.j, b.k}].insert(b.i);
  }
  for (const auto& [ij, ks] : targets)
    if (ks.size() > 1) {
      rep.nice = false;
      rep.violations.push_back("[e" + std::to_string(ij.first + 1) + ",e" + std::to_string(ij.second + 1) + "] has " +
                               std::to_string(ks.size()) + " targets");
    }
  for (const auto& [ik, js] : sources)
    if (js.size() > 1) {
      rep.nice = false;
      rep.violations.push_back("(e" + std::to_string(ik.first + 1) + ",e" + std::to_string(ik.second + 1) +
                               ") reached through " + std::to_string(js.size()) + " brackets");
    }
  return rep;
}

struct Weight {
  std::vector<int> vec;                       // E_kk - E_ii - E_jj
  std::vector<std::array<int, 3>> triples;    // contributing (i, j, k), 0-based
  std::optional<Rational> exact_mass;         // sum of |c|^2 when exact
  double mass = 0;

  int trace() const {
    int s = 0;
    for (int x : vec) s += x;
    return s;
  }
};

// Ordered lexicographically by (k, i, j) of the first contributing triple.
inline std::vector<Weight> weight_set(const NilpotentAlgebra& alg) {
  std::map<std::vector<int>, Weight> by_vec;
  for (const auto& b : alg.brackets()) {
    std::vector<int> v(alg.dim(), 0);
    v[b.k] += 1;
    v[b.i] -= 1;
    v[b.j] -= 1;
    auto [it, fresh] = by_vec.try_emplace(v);
    Weight& w = it->second;
    if (fresh) {
      w.vec = v;
      w.exact_mass = Rational(0);
    }
    w.triples.push_back({b.i, b.j, b.k});
    w.mass += b.coeff.abs_squared();
    auto q = b.coeff.exact_abs_squared();
    if (q && w.exact_mass) *w.exact_mass += *q;
    else w.exact_mass.reset();
  }
  std::vector<Weight> out;
  for (auto& [v, w] : by_vec) {
    std::sort(w.triples.begin(), w.triples.end(),
              [](const auto& a, const auto& b) { return std::tie(a[2], a[0], a[1]) < std::tie(b[2], b[0], b[1]); });
    out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end(), [](const Weight& a, const Weight& b) {
    const auto& x = a.triples.front();
    const auto& y = b.triples.front();
    return std::tie(x[2], x[0], x[1]) < std::tie(y[2], y[0], y[1]);
  });
  return out;
}

struct GramSystem {
  std::vector<Weight> weights;
  std::vector<std::vector<int>> U;
  bool consistent = false;
  RationalVector particular;
  std::vector<RationalVector> nullspace;
  bool positive = false;
  RationalVector witness;  // U x = 1, x > 0 when positive
  Rational epsilon;        // optimum of max min_p x_p (capped at 1); valid when consistent
};

inline RationalMatrix gram_matrix(const GramSystem& g) {
  const std::size_t m = g.U.size();
  RationalMatrix u(m, m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) u(p, q) = g.U[p][q];
  return u;
}

inline GramSystem gram_system(std::vector<Weight> weights) {
  if (weights.empty()) throw Error(Errc::precondition, "empty weight set");
  GramSystem g;
  const std::size_t m = weights.size();
  g.U.assign(m, std::vector<int>(m, 0));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t r = 0; r < weights[p].vec.size(); ++r) g.U[p][q] += weights[p].vec[r] * weights[q].vec[r];
  g.weights = std::move(weights);

  RationalMatrix u = gram_matrix(g);
  RationalVector ones(m, 1);
  LinearSolution sol = solve(u, ones);
  g.consistent = sol.consistent;
  if (!g.consistent) return g;
  g.particular = sol.particular;
  g.nullspace = sol.nullspace;

  // Independent rows of [U | 1] give an equivalent equality system.
  RationalMatrix aug(m, m + 1);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) aug(p, q) = u(p, q);
    aug(p, m) = 1;
  }
  Rref r = rref(aug);
  const std::size_t rows = r.pivots.size();

  // Variables: y (m), eps+, eps-, slack; x = y + (eps+ - eps-) 1.
  RationalMatrix a(rows + 1, m + 3);
  RationalVector b(rows + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    Rational rowsum = 0;
    for (std::size_t q = 0; q < m; ++q) {
      a(i, q) = r.reduced(i, q);
      rowsum += r.reduced(i, q);
    }
    a(i, m) = rowsum;
    a(i, m + 1) = -rowsum;
    b[i] = r.reduced(i, m);
  }
  a(rows, m) = 1;
  a(rows, m + 1) = -1;
  a(rows, m + 2) = 1;
  b[rows] = 1;
  RationalVector c(m + 3, 0);
  c[m] = 1;
  c[m + 1] = -1;
  LpResult lp = simplex_maximize(a, b, c);
  if (lp.status != LpResult::Status::optimal)
    throw Error(Errc::no_solution, "positivity program failed on a consistent system");
  g.epsilon = lp.value;
  g.positive = g.epsilon > 0;
  if (g.positive) {
    g.witness.resize(m);
    for (std::size_t q = 0; q < m; ++q) g.witness[q] = lp.x[q] + g.epsilon;
  }
  return g;
}

struct MccVector {
  RationalVector v;
  Rational norm_sq;
  Rational sum_x;  // sum of the coordinates of a positive solution
};

inline MccVector mcc(const GramSystem& g) {
  if (!g.positive) throw Error(Errc::mcc_undefined, "Gram system has no positive solution");
  const std::size_t n = g.weights.front().vec.size();
  MccVector out;
  out.v.assign(n, 0);
  out.sum_x = 0;
  for (const auto& x : g.witness) out.sum_x += x;
  for (std::size_t p = 0; p < g.weights.size(); ++p)
    for (std::size_t r = 0; r < n; ++r) out.v[r] += g.witness[p] * g.weights[p].vec[r];
  for (auto& x : out.v) x /= out.sum_x;
  out.norm_sq = 0;
  for (const auto& x : out.v) out.norm_sq += x * x;
  return out;
}

struct NiceVerdict {
  bool admits = false;
  GramSystem gram;
};

inline NiceVerdict admits_nilsoliton_nice(const NilpotentAlgebra& alg) {
  if (alg.is_abelian()) throw Error(Errc::precondition, "abelian algebra has no weights; it is trivially flat");
  auto rep = is_nice_basis(alg);
  if (!rep.nice)
    throw Error(Errc::precondition, "basis is not nice (" + rep.violations.front() +
                                        "); use the centralizer or gradient-flow search");
  NiceVerdict v;
  v.gram = gram_system(weight_set(alg));
  v.admits = v.gram.positive;
  return v;
}

}  // namespace nilsoliton
