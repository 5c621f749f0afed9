#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nilsoliton/cohomology.hpp"
#include "nilsoliton/derivations.hpp"

using namespace nilsoliton;
using fixtures::br;

namespace {

// dim Der by stacking the Leibniz defect of each elementary matrix E_pq.
int der_dim_oracle(const NilpotentAlgebra& alg) {
  const int n = alg.dim();
  StructureTensor t = alg.tensor();
  auto bracket = [&](const Vector& x, const Vector& y) {
    Vector z = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) z(k) += x(i) * y(j) * t(i, j, k);
    return z;
  };
  Matrix op(n * n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      Matrix d = Matrix::Zero(n, n);
      d(p, q) = 1;
      int row = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Vector ea = Vector::Unit(n, a), eb = Vector::Unit(n, b);
          Vector defect = d * bracket(ea, eb) - bracket(d * ea, eb) - bracket(ea, d * eb);
          for (int k = 0; k < n; ++k) op(row++, p * n + q) = defect(k);
        }
    }
  Eigen::FullPivLU<Matrix> lu(op);
  lu.setThreshold(1e-10);
  return n * n - static_cast<int>(lu.rank());
}

std::vector<int> binomials(int n) {
  std::vector<int> b;
  long c = 1;
  for (int k = 1; k <= n; ++k) {
    c = c * (n - k + 1) / k;
    b.push_back(static_cast<int>(c));
  }
  return b;
}

}  // namespace

TEST(Algebra, ConstructorNormalizesAndRejects) {
  auto a = br(3, {{2, 1, 3, "2"}});
  ASSERT_EQ(a.brackets().size(), 1u);
  EXPECT_EQ(a.brackets()[0].i, 0);
  EXPECT_EQ(a.brackets()[0].coeff, RadicalScalar::rational(-2));
  EXPECT_TRUE(br(3, {{1, 2, 3, "0"}}).is_abelian());
  EXPECT_THROW(br(3, {{1, 4, 3, "1"}}), Error);
  EXPECT_THROW(br(3, {{2, 2, 3, "1"}}), Error);
  EXPECT_THROW(br(3, {{1, 2, 3, "1"}, {2, 1, 3, "1"}}), Error);
  EXPECT_THROW(br(3, {{1, 2, 3, "1 + 1 i"}}), Error);
  EXPECT_NO_THROW(br(3, {{1, 2, 3, "1 + 1 i"}}, Field::complex));
}

TEST(Algebra, ValidationDetectsJacobiFailure) {
  // J(e1, e2, e4) = [e4, e3] = -e5
  auto bad = br(5, {{1, 2, 3, "1"}, {3, 4, 5, "1"}});
  auto rep = validate(bad);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.jacobi_ok);
  EXPECT_TRUE(rep.jacobi_exact);
}

TEST(Algebra, ValidationDetectsNonNilpotent) {
  auto solvable = br(2, {{1, 2, 2, "1"}});
  auto rep = validate(solvable);
  EXPECT_TRUE(rep.jacobi_ok);
  EXPECT_FALSE(rep.nilpotency_class.has_value());
  EXPECT_FALSE(rep.passed);
}

TEST(Algebra, LowerCentralSeries) {
  auto rep = validate(fixtures::qrs1("-1"));
  ASSERT_TRUE(rep.passed);
  EXPECT_EQ(rep.lower_central_dims, (std::vector<int>{7, 4, 3, 1, 0}));
  EXPECT_EQ(*rep.nilpotency_class, 4);
  // same answer on the numeric path
  auto scaled = fixtures::qrs1("-1").scaled(RadicalScalar::radical(1, 1, 2) + RadicalScalar::radical(1, 1, 3));
  ASSERT_FALSE(scaled.is_rational());
  auto rep2 = validate(scaled);
  EXPECT_FALSE(rep2.jacobi_exact);
  EXPECT_EQ(rep2.lower_central_dims, rep.lower_central_dims);
}

TEST(Algebra, ActComposes) {
  std::mt19937_64 rng(7);
  auto mu = fixtures::qrs1("-1");
  for (int trial = 0; trial < 5; ++trial) {
    Matrix g = (fixtures::random_matrix(7, rng) + 3 * RealMatrix::Identity(7, 7)).cast<cplx>();
    Matrix h = (fixtures::random_matrix(7, rng) + 3 * RealMatrix::Identity(7, 7)).cast<cplx>();
    StructureTensor lhs = act(g, act(h, mu.tensor()));
    StructureTensor rhs = act(Matrix(g * h), mu.tensor());
    double err = 0;
    for (std::size_t q = 0; q < lhs.c.size(); ++q) err = std::max(err, std::abs(lhs.c[q] - rhs.c[q]));
    EXPECT_LT(err, 1e-11);
    EXPECT_TRUE(validate(act(g, mu)).passed);
  }
  Matrix singular = Matrix::Identity(7, 7);
  singular(3, 3) = 0;
  EXPECT_THROW(act(singular, mu), Error);
}

TEST(Algebra, ExactDiagonalActionMatchesNumeric) {
  auto mu = fixtures::qrs1("-1");
  std::vector<RadicalScalar> d;
  for (int i = 0; i < 7; ++i) d.push_back(RadicalScalar::radical(1, i + 1, i + 2));
  NilpotentAlgebra exact = act(LinearMap::diagonal(d), mu);
  ASSERT_TRUE(exact.is_exact());
  StructureTensor a = exact.tensor();
  StructureTensor b = act(LinearMap::diagonal(d).matrix(), mu.tensor());
  for (std::size_t q = 0; q < a.c.size(); ++q) EXPECT_NEAR(std::abs(a.c[q] - b.c[q]), 0, 1e-14);
}

TEST(Algebra, PrintedBasisChangeMapsIntegerFormOnto1357R) {
  // block-diagonal g with mu~ = g . mu
  const double s3 = std::sqrt(3.0), s13 = std::sqrt(13.0), s39 = std::sqrt(39.0), s130 = std::sqrt(130.0);
  RealMatrix g = RealMatrix::Zero(7, 7);
  g.block(0, 0, 2, 2) << 1, s13 / 2, 1, -s13 / 2;
  g.block(2, 2, 2, 2) << -2 * s3 / 3, -s3 / 3, 0, 1;
  g.block(4, 4, 2, 2) << -2 * s39 / 39, s3 / 3, -2 * s39 / 39, -s3 / 3;
  g(6, 6) = -s130 / 39;
  StructureTensor got = act(g.cast<cplx>(), fixtures::r1357().tensor());
  StructureTensor want = fixtures::entry("1357R").algebra->tensor();
  for (std::size_t q = 0; q < got.c.size(); ++q) EXPECT_NEAR(std::abs(got.c[q] - want.c[q]), 0, 1e-14);
}

TEST(Algebra, RemarkBasisChangePullsBackToIntegerConstants) {
  const double s3 = std::sqrt(3.0);
  RealMatrix g = RealMatrix::Zero(7, 7);
  g.block(0, 0, 2, 2) << 0, s3 / 2, 1, -0.5;
  g(2, 2) = 1;
  g(3, 3) = -0.25;
  g.block(4, 4, 2, 2) << s3 / 12, s3 / 6, -0.25, 0;
  g(6, 6) = -s3 / 48;
  NilpotentAlgebra mu = act(Matrix(g.inverse().cast<cplx>()), *fixtures::entry("147E1[t=2]").algebra);
  auto want = br(7, {{1, 2, 4, "1"}, {1, 3, 6, "-1"}, {1, 6, 7, "-2"}, {2, 3, 5, "1"},
                     {2, 5, 7, "2"}, {2, 6, 7, "2"}, {3, 4, 7, "-2"}});
  StructureTensor a = mu.tensor(), b = want.tensor();
  for (std::size_t q = 0; q < a.c.size(); ++q) EXPECT_NEAR(std::abs(a.c[q] - b.c[q]), 0, 1e-13);
}

TEST(Derivations, HandCases) {
  EXPECT_EQ(derivation_algebra(fixtures::heisenberg()).dimension, 6);
  EXPECT_EQ(derivation_algebra(br(4, {})).dimension, 16);
  // sp(4) + center part + Hom(V, z): 10 + 1 + 4
  EXPECT_EQ(derivation_algebra(fixtures::heisenberg5()).dimension, 15);
}

TEST(Derivations, MatchOracleAcrossCatalog) {
  int checked = 0;
  for (const auto& e : fixtures::catalog()) {
    if (!e.algebra || checked >= 40) continue;
    DerivationSpace d = derivation_algebra(*e.algebra);
    EXPECT_EQ(d.dimension, der_dim_oracle(*e.algebra)) << e.id;
    EXPECT_LE(d.leibniz_residual, 1e-10) << e.id;
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(Derivations, ExactBasisIsExact) {
  auto mu = fixtures::qrs1("-1");
  DerivationSpace d = derivation_algebra(mu);
  ASSERT_TRUE(d.exact);
  EXPECT_EQ(d.dimension, 13);
  for (const auto& m : d.exact_basis) EXPECT_TRUE(is_exact_derivation(mu, m));
  // orthonormal numeric basis
  for (int a = 0; a < d.dimension; ++a)
    for (int b = 0; b < d.dimension; ++b)
      EXPECT_NEAR(std::abs((d.basis[a].adjoint() * d.basis[b]).trace()), a == b ? 1.0 : 0.0, 1e-12);
}

TEST(Derivations, ComplexPathAgreesWithRealPath) {
  const auto& e = fixtures::entry("1357S[t=-3]");
  EXPECT_EQ(derivation_algebra(e.algebra->with_field(Field::complex)).dimension,
            derivation_algebra(*e.algebra).dimension);
  const auto& c = fixtures::entry("1357QRS1[lambda=1/2-sqrt(3)/2*i]");
  EXPECT_EQ(derivation_algebra(*c.algebra).dimension, der_dim_oracle(*c.algebra));
}

TEST(Betti, HandCases) {
  EXPECT_EQ(betti_numbers(fixtures::heisenberg()), (std::vector<int>{2, 2, 1}));
  EXPECT_EQ(betti_numbers(br(5, {})), binomials(5));
  // b_k = C(4,k) - C(4,k-2) below the middle, then duality
  EXPECT_EQ(betti_numbers(fixtures::heisenberg5()), (std::vector<int>{4, 5, 5, 4, 1}));
}

TEST(Betti, KunnethForAbelianFactor) {
  // P(h3 + R) = (1 + 2t + 2t^2 + t^3)(1 + t)
  auto h3r = br(4, {{1, 2, 3, "1"}});
  EXPECT_EQ(betti_numbers(h3r), (std::vector<int>{3, 4, 3, 1}));
}

TEST(Betti, InvariantUnderBasisChange) {
  std::mt19937_64 rng(11);
  auto mu = fixtures::qrs1("2");
  Matrix g = (fixtures::random_matrix(7, rng) + 3 * RealMatrix::Identity(7, 7)).cast<cplx>();
  EXPECT_EQ(betti_numbers(act(g, mu)), betti_numbers(mu));
}

TEST(Betti, PrintedExample) {
  const auto& e = fixtures::entry("37A");
  EXPECT_EQ(betti_numbers(*e.algebra), (std::vector<int>{4, 12, 18, 18, 12, 4, 1}));
  EXPECT_EQ(derivation_algebra(*e.algebra).dimension, 25);
}
