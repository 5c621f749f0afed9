#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nilsoliton/nice_basis.hpp"

using namespace nilsoliton;
using fixtures::br;
using fixtures::from_listing;
using fixtures::kPrintedU;
using fixtures::listing_to_weight;

TEST(NiceBasis, Detection) {
  EXPECT_TRUE(is_nice_basis(fixtures::qrs1("-1")).nice);
  EXPECT_TRUE(is_nice_basis(fixtures::heisenberg5()).nice);
  // two brackets hit e6 from e2
  auto r = is_nice_basis(fixtures::r1357());
  EXPECT_FALSE(r.nice);
  EXPECT_FALSE(r.violations.empty());
  // [e1,e2] = e3 + e4
  EXPECT_FALSE(is_nice_basis(br(4, {{1, 2, 3, "1"}, {1, 2, 4, "1"}})).nice);
  EXPECT_FALSE(is_nice_basis(*fixtures::entry("257I").algebra).nice);
}

TEST(NiceBasis, WeightVectors) {
  auto ws = weight_set(fixtures::heisenberg5());
  ASSERT_EQ(ws.size(), 2u);
  EXPECT_EQ(ws[0].vec, (std::vector<int>{-1, -1, 0, 0, 1}));
  EXPECT_EQ(ws[0].trace(), -1);
  auto c = weight_set(br(3, {{1, 2, 3, "1/2*sqrt(2)"}}));
  EXPECT_EQ(*c[0].exact_mass, Rational(1, 2));
}

TEST(NiceBasis, PrintedGramMatrix) {
  auto ws = weight_set(fixtures::qrs1("-1"));
  ASSERT_EQ(ws.size(), 8u);
  auto pos = listing_to_weight(ws);
  ASSERT_EQ(pos.size(), 8u);
  GramSystem g = gram_system(ws);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) EXPECT_EQ(g.U[pos[a]][pos[b]], kPrintedU[a][b]) << a << "," << b;
}

TEST(NiceBasis, PrintedSolutionFamily) {
  auto ws = weight_set(fixtures::qrs1("-1"));
  auto pos = listing_to_weight(ws);
  GramSystem g = gram_system(ws);
  ASSERT_TRUE(g.consistent);
  ASSERT_EQ(g.nullspace.size(), 2u);
  RationalMatrix u = gram_matrix(g);
  RationalVector part = from_listing(pos, {1, 2, -1, 5, 2, 4, 0, 0}, 11);
  for (const auto& v : multiply(u, part)) EXPECT_EQ(v, 1);
  for (auto dir : {from_listing(pos, {1, 0, 0, -1, 0, -1, 0, 1}, 1), from_listing(pos, {0, 0, 1, -1, 0, -1, 1, 0}, 1)})
    for (const auto& v : multiply(u, dir)) EXPECT_EQ(v, 0);
  EXPECT_TRUE(g.positive);
  for (const auto& x : g.witness) EXPECT_GT(x, 0);
  for (const auto& v : multiply(u, g.witness)) EXPECT_EQ(v, 1);
}

TEST(NiceBasis, PrintedMccVector) {
  auto v = admits_nilsoliton_nice(fixtures::qrs1("-1"));
  ASSERT_TRUE(v.admits);
  MccVector m = mcc(v.gram);
  EXPECT_EQ(m.sum_x, Rational(13, 11));
  RationalVector want;
  for (int x : {-7, -7, -3, -3, 1, 1, 5}) want.push_back(Rational(x, 13));
  EXPECT_EQ(m.v, want);
  EXPECT_EQ(m.norm_sq, Rational(11, 13));
}

TEST(NiceBasis, MccIsIndependentOfTheCoefficients) {
  // the Gram data only sees the weights
  EXPECT_EQ(mcc(gram_system(weight_set(fixtures::qrs1("2")))).norm_sq, Rational(11, 13));
}

TEST(NiceBasis, HeisenbergMcc) {
  // a single weight is its own convex hull
  MccVector m = mcc(admits_nilsoliton_nice(fixtures::heisenberg()).gram);
  EXPECT_EQ(m.v, (RationalVector{-1, -1, 1}));
  EXPECT_EQ(m.norm_sq, 3);
  EXPECT_EQ(m.sum_x, Rational(1, 3));
}

TEST(NiceBasis, NonPositiveGramSystem) {
  auto v = admits_nilsoliton_nice(fixtures::qrs1("0"));
  EXPECT_FALSE(v.admits);
  EXPECT_TRUE(v.gram.consistent);
  EXPECT_EQ(v.gram.epsilon, Rational(-1, 11));
  EXPECT_THROW(mcc(v.gram), Error);
}

TEST(NiceBasis, Preconditions) {
  EXPECT_THROW(admits_nilsoliton_nice(br(4, {})), Error);
  try {
    admits_nilsoliton_nice(fixtures::r1357());
    FAIL() << "expected a precondition error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
  EXPECT_THROW(gram_system({}), Error);
}
