#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nilsoliton/curvature.hpp"
#include "nilsoliton/nice_basis.hpp"

using namespace nilsoliton;
using fixtures::br;

namespace {

// Ric = -1/2 sum_i ad_i^* ad_i + 1/4 sum_i ad_i ad_i^*, with (ad_i)_{kj} = C_ij^k.
Matrix ricci_oracle(const NilpotentAlgebra& alg) {
  const int n = alg.dim();
  StructureTensor t = alg.tensor();
  Matrix ric = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Matrix ad(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) ad(k, j) = t(i, j, k);
    ric += -0.5 * ad.adjoint() * ad + 0.25 * ad * ad.adjoint();
  }
  return ric;
}

}  // namespace

TEST(Ricci, Heisenberg) {
  // [e1,e2] = a e3: Ric = a^2/2 diag(-1,-1,1)
  auto h = br(3, {{1, 2, 3, "3/2"}});
  Matrix ric = ricci_operator(h);
  const double a2 = 9.0 / 4;
  EXPECT_NEAR(ric(0, 0).real(), -a2 / 2, 1e-15);
  EXPECT_NEAR(ric(1, 1).real(), -a2 / 2, 1e-15);
  EXPECT_NEAR(ric(2, 2).real(), a2 / 2, 1e-15);
  EXPECT_NEAR(scalar_curvature(h), -a2 / 2, 1e-15);
}

TEST(Ricci, MatchesAdjointFormula) {
  for (const auto& e : fixtures::catalog()) {
    if (!e.algebra) continue;
    Matrix diff = ricci_operator(*e.algebra) - ricci_oracle(*e.algebra);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-14) << e.id;
  }
}

TEST(Ricci, HermitianOnComplexAlgebra) {
  const auto& e = fixtures::entry("1357QRS1[lambda=1/2-sqrt(3)/2*i]");
  Matrix ric = ricci_operator(*e.algebra);
  EXPECT_LT((ric - ric.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((ric - ricci_oracle(*e.algebra)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Ricci, OrthogonalEquivariance) {
  std::mt19937_64 rng(3);
  auto mu = fixtures::qrs1("-1");
  Eigen::HouseholderQR<RealMatrix> qr(fixtures::random_matrix(7, rng));
  RealMatrix k = qr.householderQ();
  Matrix kc = k.cast<cplx>();
  Matrix lhs = ricci_operator(act(kc, mu));
  Matrix rhs = kc * ricci_operator(mu) * kc.adjoint();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(MomentMap, NiceBasisIsDiagonalWeightSum) {
  // m = 2 sum_p mass_p alpha_p when the basis is nice
  for (const auto& id : {"37A", "17", "257I", "1357R"}) {
    const auto& alg = *fixtures::entry(id).algebra;
    Matrix m = moment_map(alg).matrix;
    if (!is_nice_basis(alg).nice) continue;
    RealVector want = RealVector::Zero(alg.dim());
    for (const auto& w : weight_set(alg))
      for (int r = 0; r < alg.dim(); ++r) want(r) += 2.0 * w.mass * w.vec[r];
    for (int r = 0; r < alg.dim(); ++r) EXPECT_NEAR(m(r, r).real(), want(r), 1e-14) << id;
    EXPECT_LT((m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15) << id;
  }
}

TEST(MomentMap, TraceIsMinusTwiceBracketNorm) {
  for (const auto& id : {"37A", "17", "1357S[t=-3]"}) {
    const auto& alg = *fixtures::entry(id).algebra;
    EXPECT_NEAR(moment_map(alg).matrix.trace().real(), -2 * alg.bracket_norm_squared(), 1e-14) << id;
  }
}

TEST(SolitonResidual, ZeroOnDistinguishedBracket) {
  const auto& alg = *fixtures::entry("37A").algebra;
  SolitonResidual r = soliton_residual(alg, derivation_algebra(alg));
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_NEAR(r.c, -5.0 / 3, 1e-12);
}

TEST(SolitonResidual, PositiveOffTheOrbitMinimum) {
  auto mu = fixtures::qrs1("-1");
  SolitonResidual r = soliton_residual(mu, derivation_algebra(mu));
  EXPECT_GT(r.residual, 1e-3);
}
