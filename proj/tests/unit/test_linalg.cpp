#include <cmath>

#include <gtest/gtest.h>

#include "conelab/linalg.hpp"

namespace conelab {
namespace {

TEST(AffineSubspace, DistanceToCoordinateHyperplane) {
  const auto a = AffineSubspace::hyperplane(Vec::Unit(3, 2), 1.0);
  EXPECT_NEAR(distance_to_affine(Vec::Zero(3), a), 1.0, 1e-15);
  const Vec inside = (Vec(3) << 4.0, -2.0, 1.0).finished();
  EXPECT_NEAR(distance_to_affine(inside, a), 0.0, 1e-15);
  EXPECT_TRUE(a.contains(inside));
}

TEST(AffineSubspace, DistanceToLineMatchesGridSearch) {
  const Vec x = (Vec(3) << 1.0, 2.0, 3.0).finished();
  const auto a = AffineSubspace::through_origin(Vec::Unit(3, 0));
  // Independent oracle: scan ||x - t e1|| over a fine grid of t.
  double best = std::numeric_limits<double>::infinity();
  for (int i = -40000; i <= 40000; ++i) {
    const double t = i * 1e-4;
    best = std::min(best, (x - t * Vec::Unit(3, 0)).norm());
  }
  EXPECT_NEAR(distance_to_affine(x, a), best, 1e-9);
  EXPECT_NEAR(distance_to_affine(x, a), std::sqrt(13.0), 1e-14);
}

TEST(AffineSubspace, DimensionMismatchThrows) {
  const auto a = AffineSubspace::whole_space(3);
  try {
    a.distance(Vec::Zero(2));
    FAIL() << "expected a dimension error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(AffineSubspace, RejectsNonOrthonormalBasis) {
  Mat b(2, 1);
  b << 2.0, 0.0;
  EXPECT_THROW(AffineSubspace(Vec::Zero(2), b), Error);
}

TEST(AffineSubspace, ProjectionIsIdempotentAndPythagorean) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + trial % 6;
    const Index k = trial % n;
    const Mat span = Mat::Random(n, k);
    const AffineSubspace a(gaussian_vector(n, rng), orthonormalize(span));
    const Vec x = gaussian_vector(n, rng) * 3.0;
    const Vec p = a.project(x);
    EXPECT_LT((a.project(p) - p).norm(), 1e-10);
    const Vec y = a.from_local(gaussian_vector(a.dim(), rng));
    const double lhs = (x - y).squaredNorm();
    const double rhs = std::pow(a.distance(x), 2) + (p - y).squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, lhs));
  }
}

TEST(Orthonormalize, AxisAligned) {
  Mat m(2, 2);
  m << 2, 0, 0, 3;
  const Mat q = orthonormalize(m);
  ASSERT_EQ(q.cols(), 2);
  EXPECT_LT((q - Mat::Identity(2, 2)).norm(), 1e-15);
}

TEST(Orthonormalize, CollinearCollapses) {
  Mat m(2, 2);
  m << 1, 2, 1, 2;
  const Mat q = orthonormalize(m);
  ASSERT_EQ(q.cols(), 1);
  EXPECT_NEAR(std::abs(q.col(0).dot(Vec::Ones(2) / std::sqrt(2.0))), 1.0, 1e-15);
}

TEST(Orthonormalize, TriangularInputGivesStandardBasis) {
  const std::vector<Vec> v = {(Vec(3) << 1, 0, 0).finished(), (Vec(3) << 1, 1, 0).finished(),
                              (Vec(3) << 1, 1, 1).finished()};
  const Mat q = orthonormalize(v);
  ASSERT_EQ(q.cols(), 3);
  EXPECT_LT((q.transpose() * q - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  // Span equality: each input is reproduced by least squares in the new basis.
  for (const Vec& x : v) EXPECT_LT((q * q.colPivHouseholderQr().solve(x) - x).norm(), 1e-12);
  EXPECT_LT((q.cwiseAbs() - Mat::Identity(3, 3)).norm(), 1e-14);
}

TEST(Orthonormalize, EmptyInputGivesEmptyBasis) {
  const std::vector<Vec> none;
  EXPECT_EQ(orthonormalize(none, 4).cols(), 0);
}

TEST(Orthonormalize, ScaleInvariantRankDecision) {
  Mat m(3, 2);
  m << 1, 1, 0, 1e-12, 0, 0;
  EXPECT_EQ(orthonormalize(m).cols(), 1);
  EXPECT_EQ(orthonormalize(Mat(m * 1e-20)).cols(), 1);
  m(1, 1) = 1e-6;
  EXPECT_EQ(orthonormalize(Mat(m * 1e-20)).cols(), 2);
}

TEST(OrthogonalComplement, CompletesBasis) {
  const Mat b = orthonormalize(Mat(Mat::Random(5, 2)));
  const Mat c = orthogonal_complement(b, 5);
  ASSERT_EQ(c.cols(), 3);
  EXPECT_LT((b.transpose() * c).norm(), 1e-12);
  EXPECT_LT((c.transpose() * c - Mat::Identity(3, 3)).norm(), 1e-12);
}

TEST(Svec, InnerProductIsFrobenius) {
  Rng rng(3);
  for (int n = 1; n <= 5; ++n) {
    const Mat ra = Mat::Random(n, n), rb = Mat::Random(n, n);
    const Mat a = ra + ra.transpose(), b = rb + rb.transpose();
    EXPECT_NEAR(svec(a).dot(svec(b)), (a.array() * b.array()).sum(), 1e-12);
    EXPECT_LT((smat(svec(a)) - a).norm(), 1e-14);
  }
  Mat two(2, 2);
  two << 1, 2, 2, 3;
  const Vec v = svec(two);
  EXPECT_DOUBLE_EQ(v(0), 1.0);
  EXPECT_NEAR(v(1), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(v(2), 3.0);
  EXPECT_THROW(smat_order(5), Error);
}

TEST(BoundedRegion, Validation) {
  EXPECT_THROW(BoundedRegion::ball(Vec::Zero(2), 0.0), Error);
  EXPECT_THROW(BoundedRegion::box(Vec::Ones(2), Vec::Zero(2)), Error);
}

TEST(BoundedRegion, SamplesInsideAffineSlice) {
  Rng rng(5);
  const auto ball = BoundedRegion::ball(Vec::Zero(3), 2.0);
  const auto plane = AffineSubspace::hyperplane(Vec::Unit(3, 2), 1.5);
  for (int i = 0; i < 500; ++i) {
    const Vec y = ball.sample_in(plane, rng);
    EXPECT_TRUE(ball.contains(y, 1e-12));
    EXPECT_LT(plane.distance(y), 1e-12);
  }
  const auto far = AffineSubspace::hyperplane(Vec::Unit(3, 2), 5.0);
  EXPECT_FALSE(ball.intersects(far));
  EXPECT_THROW(ball.sample_in(far, rng), Error);

  const auto box = BoundedRegion::box(-Vec::Ones(3), Vec::Ones(3));
  const auto low = AffineSubspace::hyperplane(Vec::Unit(3, 2), 0.5);
  EXPECT_FALSE(box.intersects(plane));
  for (int i = 0; i < 200; ++i) {
    const Vec y = box.sample_in(low, rng);
    EXPECT_TRUE(box.contains(y, 1e-12));
  }
}

TEST(SphereGrid, UnitColumnsAndCoverage) {
  for (Index d : {1, 2, 3, 5}) {
    const Mat g = sphere_grid(d, 400);
    for (Index j = 0; j < g.cols(); ++j) EXPECT_NEAR(g.col(j).norm(), 1.0, 1e-14);
  }
  // Every probe direction lies within the advertised resolution of the grid.
  const Mat g = sphere_grid(3, 4096);
  Rng rng(9);
  const double res = sphere_grid_resolution(3, 4096);
  for (int i = 0; i < 200; ++i) {
    Vec u = gaussian_vector(3, rng);
    u.normalize();
    EXPECT_LT(((g.colwise() - u).colwise().norm()).minCoeff(), res);
  }
}

}  // namespace
}  // namespace conelab
