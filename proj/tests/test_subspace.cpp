#include "gap/subspace.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gap;
using gap::testing::known_pair;
using gap::testing::random_gaussian;
using gap::testing::random_orthogonal;
using gap::testing::random_subspace;
using gap::testing::random_vector;

namespace {

double orthonormality_error(const Subspace& S) {
  if (S.dim() == 0) return 0.0;
  return (S.basis().transpose() * S.basis() - Matrix::Identity(S.dim(), S.dim()))
      .cwiseAbs()
      .maxCoeff();
}

// rank via a separate SVD path (full U/V, singular values only).
Index rank_of(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) > 1e-10 * sv(0)) ++r;
  return r;
}

}  // namespace

TEST(Subspace, RejectsNonOrthonormalBasis) {
  Matrix B(2, 1);
  B << 1.0, 1.0;
  EXPECT_THROW(Subspace{B}, std::invalid_argument);
}

TEST(Subspace, ZeroDimensionalIsLegal) {
  const Subspace Z = Subspace::zero(4);
  EXPECT_EQ(Z.dim(), 0);
  EXPECT_EQ(Z.ambient_dim(), 4);
  Vector x(4);
  x << 1, 2, 3, 4;
  EXPECT_EQ(project(Z, x), Vector::Zero(4));
}

TEST(NullspaceBasis, FullRankSquareHasTrivialKernel) {
  const Subspace S = nullspace_basis(Matrix::Identity(2, 2), 1e-12);
  EXPECT_EQ(S.dim(), 0);
  EXPECT_EQ(S.ambient_dim(), 2);
}

TEST(NullspaceBasis, CoordinateFunctional) {
  Matrix A(1, 3);
  A << 1, 0, 0;
  const Subspace S = nullspace_basis(A);
  ASSERT_EQ(S.dim(), 2);
  // spans {e2, e3}: projection of e1 vanishes, e2 and e3 are fixed
  EXPECT_LT(project(S, Vector::Unit(3, 0)).norm(), 1e-14);
  EXPECT_LT((project(S, Vector::Unit(3, 1)) - Vector::Unit(3, 1)).norm(), 1e-14);
  EXPECT_LT((project(S, Vector::Unit(3, 2)) - Vector::Unit(3, 2)).norm(), 1e-14);
}

TEST(NullspaceBasis, GaussianMatrixDimensionMatchesRank) {
  std::mt19937_64 rng(7);
  const Matrix A = random_gaussian(rng, 50, 200);
  const Subspace S = nullspace_basis(A);
  EXPECT_EQ(S.dim(), 200 - rank_of(A));
  EXPECT_EQ(S.dim(), 150);
  EXPECT_LT(orthonormality_error(S), kOrthonormalityTol);
  EXPECT_LT((A * S.basis()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Project, Examples) {
  const Subspace e1(Matrix::Identity(2, 1));
  Vector x(2);
  x << 3, 4;
  EXPECT_LT((project(e1, x) - Vector::Unit(2, 0) * 3).norm(), 1e-15);

  Matrix d(2, 1);
  d << 1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2;
  const Subspace diag(d);
  Vector expected(2);
  expected << 0.5, 0.5;
  EXPECT_LT((project(diag, Vector::Unit(2, 0)) - expected).norm(), 1e-15);

  EXPECT_THROW(project(e1, Vector::Zero(3)), DimensionError);
}

TEST(Project, SelfAdjointAndIdempotent) {
  std::mt19937_64 rng(11);
  for (Index d : {0, 3, 9, 14}) {  // 14 > 20/2 exercises the complement path
    const Subspace S = random_subspace(rng, 20, d);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = random_vector(rng, 20);
      const Vector y = random_vector(rng, 20);
      const Vector px = project(S, x);
      EXPECT_NEAR(px.dot(y), x.dot(project(S, y)), 1e-10);
      EXPECT_LT((project(S, px) - px).norm(), 1e-10);
    }
  }
}

TEST(Project, ComplementPathAgreesWithBasisPath) {
  std::mt19937_64 rng(12);
  const Subspace S = random_subspace(rng, 30, 25);
  ASSERT_TRUE(S.has_complement());
  const Vector x = random_vector(rng, 30);
  const Vector direct = S.basis() * (S.basis().transpose() * x);
  EXPECT_LT((project(S, x) - direct).norm(), 1e-12);
}

TEST(PrincipalAngles, Examples) {
  const Subspace e1(Matrix::Identity(2, 1));
  Matrix e2m(2, 1);
  e2m << 0, 1;
  const Subspace e2(e2m);
  const auto ortho = principal_angles(e1, e2);
  ASSERT_EQ(ortho.angles.size(), 1u);
  EXPECT_NEAR(ortho.angles[0], std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(ortho.intersection_dim, 0);
  ASSERT_TRUE(ortho.friedrichs);
  EXPECT_NEAR(*ortho.friedrichs, std::numbers::pi / 2, 1e-15);

  Matrix line(2, 1);
  line << std::cos(0.3), std::sin(0.3);
  const auto planar = principal_angles(e1, Subspace(line));
  EXPECT_NEAR(planar.angles[0], 0.3, 1e-14);
  EXPECT_NEAR(*planar.friedrichs, 0.3, 1e-14);

  const Subspace plane(Matrix::Identity(3, 2));
  const auto same = principal_angles(plane, plane);
  ASSERT_EQ(same.angles.size(), 2u);
  EXPECT_EQ(same.intersection_dim, 2);
  EXPECT_FALSE(same.friedrichs);
}

TEST(PrincipalAngles, Errors) {
  const Subspace a(Matrix::Identity(3, 1));
  EXPECT_THROW(principal_angles(a, Subspace::zero(3)), DimensionError);
  EXPECT_THROW(principal_angles(a, Subspace(Matrix::Identity(4, 1))), DimensionError);
}

TEST(PrincipalAngles, RecoversConstructedAngles) {
  std::mt19937_64 rng(3);
  const std::vector<double> truth = {0.0, 0.0, 0.05, 0.4, 1.1, std::numbers::pi / 2};
  const auto pair = known_pair(rng, truth, 6, 9, 20);
  const auto got = principal_angles(pair.U, pair.V);
  ASSERT_EQ(got.angles.size(), truth.size());
  for (std::size_t i = 2; i < truth.size(); ++i) EXPECT_NEAR(got.angles[i], truth[i], 1e-10);
  EXPECT_EQ(got.intersection_dim, 2);
  ASSERT_TRUE(got.friedrichs);
  EXPECT_NEAR(*got.friedrichs, 0.05, 1e-10);
}

TEST(PrincipalAngles, SymmetricAndBasisInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Subspace U = random_subspace(rng, 25, 7);
    const Subspace V = random_subspace(rng, 25, 11);
    const auto uv = principal_angles(U, V);
    const auto vu = principal_angles(V, U);
    const Subspace U2(U.basis() * random_orthogonal(rng, 7));
    const Subspace V2(V.basis() * random_orthogonal(rng, 11));
    const auto rotated = principal_angles(U2, V2);
    ASSERT_EQ(uv.angles.size(), vu.angles.size());
    for (std::size_t i = 0; i < uv.angles.size(); ++i) {
      EXPECT_NEAR(uv.angles[i], vu.angles[i], 1e-10);
      EXPECT_NEAR(uv.angles[i], rotated.angles[i], 1e-10);
    }
  }
}

TEST(PrincipalAngles, DimensionFormulaLowerBound) {
  std::mt19937_64 rng(9);
  for (auto [p, q] : {std::pair<Index, Index>{10, 15}, {18, 18}, {5, 24}}) {
    const Subspace U = random_subspace(rng, 30, p);
    const Subspace V = random_subspace(rng, 30, q);
    const auto angles = principal_angles(U, V);
    EXPECT_GE(angles.intersection_dim, std::max<Index>(0, p + q - 30));
  }
}

TEST(IntersectionSubspace, SharedAxis) {
  Matrix a(3, 2), b(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  b << 0, 0, 1, 0, 0, 1;
  const Subspace W = intersection_subspace(Subspace(a), Subspace(b));
  ASSERT_EQ(W.dim(), 1);
  EXPECT_NEAR(std::abs(W.basis()(1, 0)), 1.0, 1e-14);
}

TEST(IntersectionSubspace, OrthogonalSubspacesMeetInZero) {
  Matrix a(2, 1), b(2, 1);
  a << 1, 0;
  b << 0, 1;
  EXPECT_EQ(intersection_subspace(Subspace(a), Subspace(b)).dim(), 0);
}

TEST(IntersectionSubspace, RandomDimensionFormula) {
  std::mt19937_64 rng(21);
  const Subspace U = random_subspace(rng, 200, 100);
  const Subspace V = random_subspace(rng, 200, 150);
  Matrix both(200, 250);
  both << U.basis(), V.basis();
  const Index expected = 100 + 150 - rank_of(both);
  const Subspace W = intersection_subspace(U, V);
  EXPECT_EQ(expected, 50);
  EXPECT_EQ(W.dim(), expected);
  EXPECT_EQ(W.dim(), principal_angles(U, V).intersection_dim);
}

TEST(IntersectionSubspace, MembershipEquivalence) {
  std::mt19937_64 rng(22);
  const auto pair = known_pair(rng, {0.0, 0.0, 0.0, 0.2, 0.7}, 5, 8, 16);
  const Subspace W = intersection_subspace(pair.U, pair.V);
  ASSERT_EQ(W.dim(), 3);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = W.basis() * random_vector(rng, 3);
    EXPECT_LT((project(pair.U, x) - x).norm(), 1e-9);
    EXPECT_LT((project(pair.V, x) - x).norm(), 1e-9);
    EXPECT_LT((project(W, x) - x).norm(), 1e-9);
  }
  // A vector of U outside the intersection is moved by P_V and P_W alike.
  const Vector u = project(pair.U, random_vector(rng, 16));
  const bool in_v = (project(pair.V, u) - u).norm() < 1e-9;
  const bool in_w = (project(W, u) - u).norm() < 1e-9;
  EXPECT_FALSE(in_v);
  EXPECT_EQ(in_v, in_w);
}
