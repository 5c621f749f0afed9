#pragma once

// Algebras shared by the test suites. Indices in br() are 1-based.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "nilsoliton/catalog.hpp"
#include "nilsoliton/nice_basis.hpp"

namespace fixtures {

using namespace nilsoliton;

struct B {
  int i, j, k;
  const char* c;
};

inline NilpotentAlgebra br(int n, std::initializer_list<B> list, Field f = Field::real) {
  std::vector<Bracket> out;
  for (const auto& b : list) out.push_back({b.i - 1, b.j - 1, b.k - 1, RadicalScalar::parse(b.c)});
  return NilpotentAlgebra(n, std::move(out), f);
}

inline NilpotentAlgebra heisenberg() { return br(3, {{1, 2, 3, "1"}}); }

// 5-dimensional Heisenberg: [e1,e2] = [e3,e4] = e5
inline NilpotentAlgebra heisenberg5() { return br(5, {{1, 2, 5, "1"}, {3, 4, 5, "1"}}); }

// The (1357QRS1) family in its nice basis.
inline NilpotentAlgebra qrs1(const std::string& t) {
  Rational tq = parse_rational(t);
  std::string one_minus = to_string(Rational(1 - tq));
  std::vector<Bracket> out;
  auto add = [&](int i, int j, int k, const std::string& c) {
    out.push_back({i - 1, j - 1, k - 1, RadicalScalar::parse(c)});
  };
  add(1, 2, 3, "1");
  add(1, 3, 5, "1");
  add(1, 4, 6, "1");
  add(1, 5, 7, "1");
  add(2, 3, 6, "-1");
  add(2, 4, 5, "1");
  add(2, 6, 7, to_string(tq));
  add(3, 4, 7, one_minus);
  return NilpotentAlgebra(7, std::move(out));
}

// Integer form of (1357R); the basis is not nice.
inline NilpotentAlgebra r1357() {
  return br(7, {{1, 2, 3, "1"}, {1, 3, 5, "1"}, {1, 6, 7, "1"}, {2, 3, 6, "1"}, {2, 4, 6, "1"}, {2, 5, 7, "1"}, {3, 4, 7, "1"}});
}

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = load_catalog(default_catalog_path());
  return entries;
}

inline const CatalogEntry& entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw std::runtime_error("no catalog entry " + id);
}

inline RealMatrix random_matrix(int n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

// Same structure constants in a permuted basis: e_p -> e_perm[p].
inline NilpotentAlgebra permuted(const NilpotentAlgebra& alg, const std::vector<int>& perm) {
  std::vector<Bracket> out;
  for (const auto& b : alg.brackets()) out.push_back({perm[b.i], perm[b.j], perm[b.k], b.coeff});
  return NilpotentAlgebra(alg.dim(), std::move(out), alg.field());
}

// Gram matrix of the t = -1 member, rows in bracket listing order
// [1,2] [1,3] [1,4] [1,5] [2,3] [2,4] [2,6] [3,4].
inline constexpr std::array<std::array<int, 3>, 8> kListing = {
    {{1, 2, 3}, {1, 3, 5}, {1, 4, 6}, {1, 5, 7}, {2, 3, 6}, {2, 4, 5}, {2, 6, 7}, {3, 4, 7}}};
inline constexpr int kPrintedU[8][8] = {
    {3, 0, 1, 1, 0, 1, 1, -1}, {0, 3, 1, 0, 1, 1, 0, 1},   {1, 1, 3, 1, 1, 1, -1, 1},
    {1, 0, 1, 3, 0, -1, 1, 1}, {0, 1, 1, 0, 3, 1, 0, 1},   {1, 1, 1, -1, 1, 3, 1, 1},
    {1, 0, -1, 1, 0, 1, 3, 1}, {-1, 1, 1, 1, 1, 1, 1, 3}};

// position of each listed bracket in weight_set order
inline std::vector<int> listing_to_weight(const std::vector<Weight>& ws) {
  std::vector<int> pos;
  for (const auto& t : kListing)
    for (std::size_t p = 0; p < ws.size(); ++p) {
      const auto& tr = ws[p].triples.front();
      if (tr[0] == t[0] - 1 && tr[1] == t[1] - 1 && tr[2] == t[2] - 1) pos.push_back(static_cast<int>(p));
    }
  return pos;
}

inline RationalVector from_listing(const std::vector<int>& pos, std::initializer_list<int> num, int den) {
  RationalVector x(pos.size());
  int q = 0;
  for (int v : num) x[pos[q++]] = Rational(v, den);
  return x;
}

}  // namespace fixtures
