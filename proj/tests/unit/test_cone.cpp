#include <cmath>

#include <gtest/gtest.h>

#include "conelab/cone.hpp"
#include "conelab/projection.hpp"

namespace conelab {
namespace {

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

TEST(Membership, SocAxisIsInterior) {
  EXPECT_EQ(membership(ConeSpec::second_order(3), v3(0, 0, 1)).location, Location::kInside);
  EXPECT_EQ(membership(ConeSpec::second_order(3), v3(1, 0, 1)).location, Location::kBoundary);
  EXPECT_EQ(membership(ConeSpec::second_order(3), v3(1, 0, 0)).location, Location::kOutside);
}

TEST(Membership, PsdNegativeEigenvalueIsOutside) {
  Mat x(2, 2);
  x << 1, 0, 0, -1;
  EXPECT_EQ(membership(ConeSpec::psd(2), svec(x)).location, Location::kOutside);
}

TEST(Membership, DoublyNonnegativeRejectsNegativeOffDiagonal) {
  const ConeSpec dnn = ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
  Mat x(2, 2);
  x << 1, -0.5, -0.5, 1;
  // Independent check: eigenvalues 0.5 and 1.5 (PSD) but an entry is negative.
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  ASSERT_GT(es.eigenvalues().minCoeff(), 0.0);
  ASSERT_LT(x(0, 1), 0.0);
  EXPECT_EQ(membership(dnn, svec(x)).location, Location::kOutside);
  EXPECT_GT(distance(dnn, svec(x)), 0.1);
}

TEST(Membership, ProjectionFallbackIsFlagged) {
  Mat g(2, 2);
  g << 1, 1, 0, 1;
  const ConeSpec k = ConeSpec::generated(g);
  const auto in = membership(k, (Vec(2) << 2.0, 1.0).finished());
  EXPECT_TRUE(in.projection_based);
  EXPECT_EQ(in.location, Location::kInside);
  EXPECT_EQ(membership(k, (Vec(2) << 1.0, 1.0).finished()).location, Location::kBoundary);
  EXPECT_EQ(membership(k, (Vec(2) << -1.0, 1.0).finished()).location, Location::kOutside);
}

TEST(Membership, DimensionMismatchThrows) {
  EXPECT_THROW(membership(ConeSpec::orthant(3), Vec::Zero(2)), Error);
}

TEST(DualCone, SelfDualAtoms) {
  EXPECT_EQ(dual_cone(ConeSpec::second_order(4)).describe(), "second_order(4)");
  EXPECT_EQ(dual_cone(ConeSpec::psd(3)).describe(), "psd(3)");
  EXPECT_EQ(dual_cone(ConeSpec::orthant(2)).describe(), "nonnegative_orthant(2)");
}

TEST(DualCone, SubspaceGoesToComplement) {
  const ConeSpec l = ConeSpec::subspace(v3(1, 1, 0), 3);
  const ConeSpec d = dual_cone(l);
  const auto* s = d.get_if<spec::LinearSubspace>();
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->basis.cols(), 2);
  EXPECT_LT((s->basis.transpose() * v3(1, 1, 0)).norm(), 1e-14);
}

TEST(DualCone, UnavailableVariantsThrowDualUnavailable) {
  const ConeSpec inter = ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
  try {
    dual_cone(inter);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDualUnavailable);
  }
}

TEST(DualCone, PairingIsNonnegativeOnSamples) {
  Rng rng(21);
  Mat rows(2, 3);
  rows << 1, -1, 0, 0, 1, -2;
  const std::vector<ConeSpec> cones = {
      ConeSpec::second_order(4), ConeSpec::psd(3), ConeSpec::orthant(3), ConeSpec::polyhedral(rows),
      ConeSpec::product({ConeSpec::second_order(3), ConeSpec::orthant(2)}),
      ConeSpec::halfspace(v3(1, 2, -1))};
  for (const auto& k : cones) {
    const ConeSpec d = dual_cone(k);
    for (int i = 0; i < 1000; ++i) {
      const Vec x = sample_element(k, rng);
      const Vec s = sample_element(d, rng);
      EXPECT_GE(x.dot(s), -1e-10) << k.describe();
    }
  }
}

TEST(DualCone, SampledPolarPairsNonnegatively) {
  Rng rng(2);
  const ConeSpec dnn = ConeSpec::intersection({ConeSpec::psd(2), ConeSpec::orthant(3)});
  const Mat s = sampled_polar(dnn, 100, rng);
  ASSERT_EQ(s.cols(), 100);
  for (int i = 0; i < 300; ++i) {
    const Vec x = sample_element(dnn, rng);
    EXPECT_GE((s.transpose() * x).minCoeff(), -1e-9);
  }
}

TEST(ConicClosure, ScalingPreservesMembership) {
  Rng rng(8);
  const std::vector<ConeSpec> cones = {ConeSpec::second_order(5), ConeSpec::psd(3), ConeSpec::orthant(4)};
  for (const auto& k : cones) {
    for (int i = 0; i < 100; ++i) {
      const Vec x = sample_element(k, rng);
      for (double lam : {0.0, 0.5, 2.0, 10.0}) EXPECT_TRUE(contains(k, lam * x)) << k.describe();
    }
  }
}

TEST(ProductLaw, DistancesComposeByPythagoras) {
  Rng rng(4);
  const ConeSpec a = ConeSpec::second_order(3), b = ConeSpec::psd(2);
  const ConeSpec prod = ConeSpec::product({a, b});
  for (int i = 0; i < 200; ++i) {
    const Vec x = gaussian_vector(3, rng), y = gaussian_vector(3, rng);
    Vec xy(6);
    xy << x, y;
    const double lhs = std::pow(distance(prod, xy), 2);
    const double rhs = std::pow(distance(a, x), 2) + std::pow(distance(b, y), 2);
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, rhs));
  }
}

TEST(RescaleToSlice, Cases) {
  HullSampler g;
  g.points = Mat::Identity(4, 4);
  g.points.row(3).setOnes();
  SliceSpec s{Vec::Unit(4, 3), 1.0, g, 3};
  const Vec x = (Vec(4) << 1, 0, 0, 2).finished();
  EXPECT_LT((rescale_to_slice(s, x) - (Vec(4) << 0.5, 0, 0, 1).finished()).norm(), 1e-15);
  const Vec on = (Vec(4) << 0.3, 0.2, 0.1, 1).finished();
  EXPECT_EQ(rescale_to_slice(s, on), on);
  try {
    rescale_to_slice(s, (Vec(4) << 1, 0, 0, 0).finished());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotRescalable);
  }
}

TEST(ConeSpec, ImageRequiresFullColumnRank) {
  Mat m(3, 2);
  m << 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(ConeSpec::image(m, ConeSpec::orthant(2)), Error);
}

}  // namespace
}  // namespace conelab
