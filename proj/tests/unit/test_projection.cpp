#include <cmath>

#include <gtest/gtest.h>

#include "conelab/projection.hpp"
#include "conelab/solvers.hpp"
#include "support/oracles.hpp"

namespace conelab {
namespace {

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

TEST(Project, SocPolarPointGoesToApex) {
  const auto r = project(ConeSpec::second_order(3), v3(1, 0, -1));
  EXPECT_LT(r.point.norm(), 1e-15);
  EXPECT_NEAR(r.distance, std::sqrt(2.0), 1e-15);
}

TEST(Project, PsdClipMatchesFactorSearch) {
  Mat x(2, 2);
  x << 1, 0, 0, -1;
  const auto r = project(ConeSpec::psd(2), svec(x));
  const Mat brute = oracle::psd2_nearest(x);
  EXPECT_LT((smat(r.point) - brute).norm(), 1e-5);
  EXPECT_NEAR(r.distance, 1.0, 1e-14);
  EXPECT_EQ(r.method, ProjectionMethod::kEigenClip);
}

TEST(Project, PsdRandomInstancesMatchFactorSearch) {
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const Mat r = Mat::Random(2, 2);
    const Mat x = r + r.transpose();
    const Mat brute = oracle::psd2_nearest(x);
    EXPECT_NEAR(project(ConeSpec::psd(2), svec(x)).distance, (brute - x).norm(), 1e-6);
  }
}

TEST(Project, SocMatchesBoundarySearch) {
  const auto r = project(ConeSpec::second_order(3), v3(1, 0, 0));
  const Vec brute = oracle::soc3_nearest(v3(1, 0, 0));
  EXPECT_LT((r.point - brute).norm(), 1e-6);
  EXPECT_LT((r.point - v3(0.5, 0, 0.5)).norm(), 1e-15);
  EXPECT_NEAR(r.distance, 1.0 / std::sqrt(2.0), 1e-15);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec x = gaussian_vector(3, rng);
    EXPECT_LT((project(ConeSpec::second_order(3), x).point - oracle::soc3_nearest(x)).norm(), 1e-6);
  }
}

TEST(Moreau, OrthantSplit) {
  const Vec x = (Vec(2) << 3.0, -2.0).finished();
  const auto m = moreau_decompose(ConeSpec::orthant(2), x);
  EXPECT_EQ(m.cone_part, (Vec(2) << 3.0, 0.0).finished());
  EXPECT_EQ(m.polar_part, (Vec(2) << 0.0, -2.0).finished());
}

TEST(Moreau, MemberHasZeroPolarPart) {
  const auto m = moreau_decompose(ConeSpec::second_order(3), v3(0.1, 0.2, 1));
  EXPECT_EQ(m.polar_part.norm(), 0.0);
}

TEST(Moreau, SocSplitIsOrthogonal) {
  const auto m = moreau_decompose(ConeSpec::second_order(3), v3(1, 0, 0));
  EXPECT_LT((m.cone_part - v3(0.5, 0, 0.5)).norm(), 1e-15);
  EXPECT_LT((m.polar_part - v3(0.5, 0, -0.5)).norm(), 1e-15);
  EXPECT_EQ(m.orthogonality, 0.0);
  EXPECT_EQ(m.residual, 0.0);
}

TEST(Moreau, PolarPartPairsNonpositivelyWithTheCone) {
  Rng rng(10);
  const std::vector<ConeSpec> cones = {ConeSpec::second_order(4), ConeSpec::psd(3), ConeSpec::orthant(5)};
  for (const auto& k : cones) {
    const auto m = moreau_decompose(k, 2.0 * gaussian_vector(k.dim(), rng));
    for (int i = 0; i < 500; ++i) EXPECT_LE(m.polar_part.dot(sample_element(k, rng)), 1e-10);
  }
}

TEST(Dykstra, DoublyNonnegativeAgreesWithOracle) {
  Mat x(2, 2);
  x << 2, -1, -1, 2;
  const std::vector<ConeSpec> parts = {ConeSpec::psd(2), ConeSpec::orthant(3)};
  const auto r = dykstra_intersection(parts, svec(x));
  const Mat p = smat(r.point);
  EXPECT_LT((p - oracle::dnn2_nearest(x)).norm(), 1e-6);
  const bool zero_offdiag = std::abs(p(0, 1)) < 1e-8;
  const bool psd_boundary = std::abs(p.determinant()) < 1e-8;
  EXPECT_TRUE(zero_offdiag || psd_boundary);
  EXPECT_EQ(r.method, ProjectionMethod::kDykstra);
}

TEST(Dykstra, FeasiblePointConvergesInOneCycle) {
  const std::vector<ConeSpec> parts = {ConeSpec::psd(2), ConeSpec::orthant(3)};
  const Vec x = svec((Mat(2, 2) << 2, 1, 1, 2).finished());
  const auto r = dykstra_intersection(parts, x);
  EXPECT_EQ(r.point, x);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Dykstra, TwoHalfplanesMatchCaseAnalysis) {
  // {x1 - x2 <= 0} ∩ {-x1 - x2 <= 0}: the cone above |x1| <= x2.
  const Vec n1 = (Vec(2) << 1, -1).finished(), n2 = (Vec(2) << -1, -1).finished();
  const std::vector<ConeSpec> parts = {ConeSpec::halfspace(n1), ConeSpec::halfspace(n2)};
  auto exact = [&](const Vec& x) -> Vec {
    // Case analysis of the two-constraint QP: interior, either facet, or apex.
    const bool v1 = n1.dot(x) > 0, v2 = n2.dot(x) > 0;
    if (!v1 && !v2) return x;
    const Vec p1 = x - n1 * (n1.dot(x) / 2.0);
    const Vec p2 = x - n2 * (n2.dot(x) / 2.0);
    if (v1 && n2.dot(p1) <= 0) return p1;
    if (v2 && n1.dot(p2) <= 0) return p2;
    return Vec::Zero(2);
  };
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const Vec x = 3.0 * gaussian_vector(2, rng);
    EXPECT_LT((dykstra_intersection(parts, x).point - exact(x)).norm(), 1e-9);
  }
}

TEST(Dykstra, NonConvergenceCarriesBestIterate) {
  const std::vector<ConeSpec> parts = {ConeSpec::psd(2), ConeSpec::orthant(3)};
  const Vec x = (Vec(3) << 2.5590260589660363e-4, -0.1775844128565755, -1.1124297590517283).finished();
  try {
    dykstra_intersection(parts, x, 2, 1e-13);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonConvergence);
    EXPECT_EQ(e.best_iterate().size(), 3);
    EXPECT_EQ(e.iterations(), 2);
  }
}

TEST(ProjectHull, UnitSquare) {
  Mat sq(2, 4);
  sq << 0, 1, 1, 0, 0, 0, 1, 1;
  const auto r = project_hull(sq, (Vec(2) << 2.0, 0.5).finished());
  EXPECT_LT((r.point - (Vec(2) << 1.0, 0.5).finished()).norm(), 1e-14);
  EXPECT_NEAR(r.distance, 1.0, 1e-14);
  EXPECT_LT(r.certificate_gap, 1e-10);
  const auto in = project_hull(sq, (Vec(2) << 0.3, 0.6).finished());
  EXPECT_LT(in.distance, 1e-12);
}

TEST(ProjectHull, TriangleMatchesEdgeSearch) {
  Mat tri(2, 3);
  tri << 0, 2, 0, 0, 0, 2;
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const Vec x = 3.0 * gaussian_vector(2, rng);
    const auto r = project_hull(tri, x);
    // Oracle: zero inside, otherwise the best point over the three edges.
    const bool inside = x(0) >= 0 && x(1) >= 0 && x(0) + x(1) <= 2;
    double best = inside ? 0.0 : std::numeric_limits<double>::infinity();
    for (int e = 0; e < 3 && !inside; ++e) {
      const Vec a = tri.col(e), b = tri.col((e + 1) % 3);
      auto f = [&](double t) { return (a + t * (b - a) - x).norm(); };
      best = std::min(best, f(golden_section_min(f, 0.0, 1.0)));
    }
    EXPECT_NEAR(r.distance, best, 1e-7);
  }
}

TEST(Projection, NonexpansiveAndConicEquivariant) {
  Rng rng(12);
  Mat rows(3, 4);
  rows << 1, -1, 0, 0, 0, 1, -1, 0, 0, 0, 1, -1;
  const std::vector<ConeSpec> cones = {
      ConeSpec::second_order(4), ConeSpec::psd(3), ConeSpec::orthant(4), ConeSpec::polyhedral(rows),
      ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)}),
      ConeSpec::image((Mat(3, 2) << 1, 0, 1, 1, 0, 2).finished(), ConeSpec::orthant(2))};
  for (const auto& k : cones) {
    for (int i = 0; i < 100; ++i) {
      const Vec x = gaussian_vector(k.dim(), rng), y = gaussian_vector(k.dim(), rng);
      const Vec px = project(k, x).point, py = project(k, y).point;
      EXPECT_LE((px - py).norm(), (x - y).norm() + 1e-9) << k.describe();
      const double lam = 0.1 + 5.0 * std::abs(gaussian_vector(1, rng)(0));
      EXPECT_LT((project(k, lam * x).point - lam * px).norm(), 1e-9 * std::max(1.0, lam * px.norm()))
          << k.describe();
    }
  }
}

TEST(Projection, PolyhedralPointPassesMembership) {
  Rng rng(14);
  Mat rows = Mat::Random(6, 3);
  const ConeSpec k = ConeSpec::polyhedral(rows);
  for (int i = 0; i < 200; ++i) {
    const auto r = project(k, gaussian_vector(3, rng));
    EXPECT_TRUE(contains(k, r.point));
    EXPECT_LT(r.certificate_gap, 1e-10);
  }
}

TEST(Projection, BlockNormConeMatchesDykstra) {
  // {|c| <= t, ||(a,b)|| <= t} as the intersection of a permuted SOC x R and
  // a polyhedral wedge, solved by the generic Dykstra path.
  Mat perm = Mat::Zero(4, 4);
  perm(0, 0) = perm(1, 1) = perm(3, 2) = perm(2, 3) = 1.0;
  const ConeSpec disk = ConeSpec::image(perm, ConeSpec::product({ConeSpec::second_order(3),
                                                                   ConeSpec::subspace(Mat::Identity(1, 1), 1)}));
  const ConeSpec wedge = ConeSpec::polyhedral((Mat(2, 4) << 0, 0, 1, -1, 0, 0, -1, -1).finished());
  const std::vector<ConeSpec> parts = {disk, wedge};
  Rng rng(15);
  const std::array<Index, 2> blocks{2, 1};
  for (int i = 0; i < 200; ++i) {
    const Vec x = 2.0 * gaussian_vector(4, rng);
    const Vec p = project_max_block_norm_cone(x, blocks);
    EXPECT_LT((p - dykstra_intersection(parts, x).point).norm(), 1e-8);
  }
}

TEST(Projection, BlockNormConeHandlesNearTies) {
  // The level (t + n0)/2 sits one ulp below the second block norm.
  const std::array<Index, 2> blocks{2, 1};
  const Vec x = (Vec(4) << 2, 2, 0.79466089343391555, -1.2391053378783594).finished();
  const Vec p = project_max_block_norm_cone(x, blocks);
  EXPECT_NEAR(p(3), 0.7946608934339155, 1e-12);
  EXPECT_NEAR(p.head(2).norm(), p(3), 1e-12);
  // Optimality: x - p lies in the polar, so <x - p, p> = 0.
  EXPECT_NEAR((x - p).dot(p), 0.0, 1e-12);
}

}  // namespace
}  // namespace conelab
