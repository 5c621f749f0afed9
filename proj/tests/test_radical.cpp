#include <gtest/gtest.h>

#include <cmath>

#include "nilsoliton/lp.hpp"
#include "nilsoliton/radical.hpp"

using namespace nilsoliton;

TEST(Radical, ParsesCatalogGrammar) {
  EXPECT_EQ(RadicalScalar::parse("1/1*sqrt(6)/6"), RadicalScalar::radical(1, 6, 6));
  EXPECT_EQ(RadicalScalar::parse("1/6*sqrt(6)").to_string(), "1/6*sqrt(6)");
  EXPECT_EQ(RadicalScalar::parse("-3/70*sqrt(70)").to_string(), "-3/70*sqrt(70)");
  EXPECT_EQ(RadicalScalar::parse("2/1").to_string(), "2/1");
  EXPECT_NEAR(RadicalScalar::parse("1/6*sqrt(6)").real_value(), std::sqrt(6.0) / 6, 1e-15);
}

TEST(Radical, CanonicalForm) {
  // sqrt(8)/4 = sqrt(2)/2; 2/4 = 1/2
  EXPECT_EQ(RadicalScalar::radical(1, 4, 8).to_string(), "1/2*sqrt(2)");
  EXPECT_EQ(RadicalScalar::radical(2, 4, 1).to_string(), "1/2");
  EXPECT_EQ(RadicalScalar::radical(3, 1, 9).to_string(), "9/1");
  EXPECT_TRUE(RadicalScalar::radical(3, 1, 9).is_rational());
}

TEST(Radical, ComplexCoefficient) {
  auto c = RadicalScalar::parse("1/26*sqrt(13) - 1/26*sqrt(39) i");
  EXPECT_FALSE(c.is_real());
  EXPECT_NEAR(c.value().real(), std::sqrt(13.0) / 26, 1e-15);
  EXPECT_NEAR(c.value().imag(), -std::sqrt(39.0) / 26, 1e-15);
  // |c|^2 = 13/676 + 39/676 = 1/13
  EXPECT_EQ(*c.exact_abs_squared(), Rational(1, 13));
  EXPECT_EQ(RadicalScalar::parse(c.to_string()), c);
  EXPECT_EQ(RadicalScalar::parse("-i").value(), std::complex<double>(0, -1));
}

TEST(Radical, Arithmetic) {
  auto a = RadicalScalar::radical(1, 2, 2);  // sqrt(2)/2
  EXPECT_EQ(a * a, RadicalScalar::rational(1, 2));
  EXPECT_EQ(a + a, RadicalScalar::radical(1, 1, 2));
  EXPECT_EQ(a.inverse(), RadicalScalar::radical(1, 1, 2));
  EXPECT_TRUE((a - a).is_zero());
  // sqrt(2) * sqrt(3) = sqrt(6)
  EXPECT_EQ(RadicalScalar::radical(1, 1, 2) * RadicalScalar::radical(1, 1, 3), RadicalScalar::radical(1, 1, 6));
  // unlike radicands do not combine exactly
  auto s = RadicalScalar::radical(1, 1, 2) + RadicalScalar::radical(1, 1, 3);
  EXPECT_FALSE(s.exact());
  EXPECT_NEAR(s.real_value(), std::sqrt(2.0) + std::sqrt(3.0), 1e-15);
  auto i = RadicalScalar::parse("i");
  EXPECT_EQ(i * i, RadicalScalar::rational(-1));
  EXPECT_EQ(i.conj() * i, RadicalScalar::rational(1));
}

TEST(Radical, DecimalsAreInexact) {
  auto d = RadicalScalar::parse("0.25");
  EXPECT_FALSE(d.exact());
  EXPECT_EQ(d.real_value(), 0.25);
  EXPECT_EQ(RadicalScalar::parse(d.to_string()).real_value(), 0.25);
}

TEST(Radical, ParseErrorsCarryColumn) {
  try {
    RadicalScalar::parse("1/2*sqrt(3");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 11);
  }
  EXPECT_THROW(RadicalScalar::parse(""), ParseError);
  EXPECT_THROW(RadicalScalar::parse("1/0"), ParseError);
  EXPECT_THROW(RadicalScalar::parse("i + 1/2"), ParseError);
  EXPECT_THROW(RadicalScalar::parse("1/2 + 1/3"), ParseError);
  EXPECT_THROW(RadicalScalar::parse("abc"), ParseError);
}

TEST(Radical, ReconstructsClosedForms) {
  EXPECT_EQ(reconstruct_radical(std::sqrt(390.0) / 78).to_string(), "1/78*sqrt(390)");
  EXPECT_EQ(reconstruct_radical(-2 * std::sqrt(39.0) / 39).to_string(), "-2/39*sqrt(39)");
  EXPECT_EQ(reconstruct_radical(0.25).to_string(), "1/4");
  EXPECT_EQ(reconstruct_radical(std::sqrt(2.0) / 2).to_string(), "1/2*sqrt(2)");
  // pi^2 has no rational approximation with denominator <= 100 at this tolerance
  auto pi = reconstruct_radical(M_PI, 100);
  EXPECT_FALSE(pi.exact());
  EXPECT_EQ(pi.to_string(), "3.1415926535897931");
}

TEST(Rational, ContinuedFractionApproximation) {
  EXPECT_EQ(*rational_approximation(11.0 / 13.0, 1000, 1e-12), Rational(11, 13));
  EXPECT_EQ(*rational_approximation(-0.75, 10, 1e-12), Rational(-3, 4));
  EXPECT_FALSE(rational_approximation(std::sqrt(2.0), 100, 1e-12).has_value());
}

TEST(Rational, RrefRankNullspace) {
  RationalMatrix a(3, 4);
  int v[3][4] = {{1, 2, 3, 4}, {2, 4, 6, 8}, {1, 0, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = v[i][j];
  EXPECT_EQ(rank(a), 2u);
  auto ns = nullspace(a);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& x : ns)
    for (const auto& y : multiply(a, x)) EXPECT_EQ(y, 0);
}

TEST(Rational, SolveReportsConsistency) {
  RationalMatrix a(2, 2);
  a(0, 0) = 1, a(0, 1) = 1, a(1, 0) = 2, a(1, 1) = 2;
  EXPECT_FALSE(solve(a, {1, 3}).consistent);
  auto s = solve(a, {1, 2});
  ASSERT_TRUE(s.consistent);
  EXPECT_EQ(s.nullspace.size(), 1u);
  EXPECT_EQ(multiply(a, s.particular), (RationalVector{1, 2}));
}

TEST(Rational, ParseRational) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Simplex, SmallPrograms) {
  // max x + y  s.t.  x + 2y + s = 4, 3x + y + t = 6
  RationalMatrix a(2, 4);
  a(0, 0) = 1, a(0, 1) = 2, a(0, 2) = 1;
  a(1, 0) = 3, a(1, 1) = 1, a(1, 3) = 1;
  auto r = simplex_maximize(a, {4, 6}, {1, 1, 0, 0});
  ASSERT_EQ(r.status, LpResult::Status::optimal);
  EXPECT_EQ(r.value, Rational(14, 5));  // vertex (8/5, 6/5)

  // x - y = 1 with x, y >= 0 and objective y is unbounded
  RationalMatrix b(1, 2);
  b(0, 0) = 1, b(0, 1) = -1;
  EXPECT_EQ(simplex_maximize(b, {1}, {0, 1}).status, LpResult::Status::unbounded);

  // x + y = -1 is infeasible for x, y >= 0
  RationalMatrix c(1, 2);
  c(0, 0) = 1, c(0, 1) = 1;
  EXPECT_EQ(simplex_maximize(c, {-1}, {1, 0}).status, LpResult::Status::infeasible);
}

TEST(Simplex, RedundantEqualities) {
  RationalMatrix a(2, 2);
  a(0, 0) = 1, a(0, 1) = 1, a(1, 0) = 2, a(1, 1) = 2;
  auto r = simplex_maximize(a, {1, 2}, {1, 0});
  ASSERT_EQ(r.status, LpResult::Status::optimal);
  EXPECT_EQ(r.value, 1);
}
